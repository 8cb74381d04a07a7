//! Command implementations behind the `eatforge` binary. Each command returns
//! an [`Outcome`]: a JSON document for standard output, a one-line summary
//! for standard error, and the process exit code.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use eatforge::chase::{
    free_model_of_chain, saturate_with, ChainConfig, ChaseConfig, ChaseError, GeneratorSet, SaturationState,
    DEFAULT_ELEMENT_CAP,
};
use eatforge::effective::{Bundle, EffectiveError};
use eatforge::fincat::{run_corpus, CategoryJson, Claim, Corpus};
use eatforge::std_theories::{category_theory, r_topos_chain, r_topos_theory, regular_category_theory};
use eatforge::theory::{parse_theory_spanned, validate, TheoryChain, TheoryPresentation};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_CAP: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "eatforge", version, about = "Free models of essentially algebraic theories and related checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Write the JSON document here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Element cap for saturations; defaults to $EATFORGE_CAP, then 1000000.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate a theory file.
    Check { theory: String },
    /// Saturate a theory on generators and dump the state.
    Saturate {
        theory: String,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
    },
    /// List the Gödel enumeration of a sort.
    Enumerate {
        theory: String,
        #[arg(long)]
        sort: String,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value_t = 3)]
        rounds: usize,
    },
    /// Run the finite-category claims over a corpus.
    Verify {
        /// `default`, or a JSON array of categories.
        #[arg(long, default_value = "default")]
        corpus: String,
    },
    /// Extract a minimal section or a branch from a bundle.
    Witness {
        bundle: PathBuf,
        #[arg(long, value_enum, default_value_t = WitnessMode::Section)]
        mode: WitnessMode,
        /// Overrides the bundle's fiber (successor) bound.
        #[arg(long)]
        bound: Option<u64>,
        /// Branch length when the bundle gives none.
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Compare stage models of a theory chain with its colimit.
    Chain {
        /// Theory files, smallest first; ignored with `--rtopos`.
        theories: Vec<String>,
        /// Use the ranked chain T_0 ⊆ ... ⊆ T_r.
        #[arg(long)]
        rtopos: Option<usize>,
        #[command(flatten)]
        gens: Gens,
        #[arg(long, default_value_t = 2)]
        rounds: usize,
    },
}

#[derive(Debug, Args, Clone, Default)]
pub struct Gens {
    /// Inline generators, e.g. `a b : M; mul(a, b) = mul(b, a)`.
    #[arg(long)]
    pub generators: Option<String>,
    /// File holding generators in the same syntax.
    #[arg(long)]
    pub generators_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessMode {
    Section,
    Branch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub json: Value,
    pub summary: String,
}

impl Outcome {
    fn ok(json: Value, summary: String) -> Self {
        Outcome { code: EXIT_OK, json, summary }
    }

    fn fail(code: i32, message: String) -> Self {
        Outcome { code, json: json!({ "error": message }), summary: message }
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("json renders");
        s.push('\n');
        s
    }
}

/// Cap from the flag, else `$EATFORGE_CAP`, else the engine default.
pub fn resolve_cap(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("EATFORGE_CAP").ok()?.parse().ok()).unwrap_or(DEFAULT_ELEMENT_CAP)
}

/// Runs `cli`, writing nothing; see [`main_with`] for the I/O side.
pub fn run(cli: &Cli) -> Outcome {
    let cap = resolve_cap(cli.common.cap);
    let result = match &cli.command {
        Command::Check { theory } => cmd_check(theory),
        Command::Saturate { theory, gens, rounds } => cmd_saturate(theory, gens, *rounds, cap),
        Command::Enumerate { theory, sort, gens, rounds } => cmd_enumerate(theory, sort, gens, *rounds, cap),
        Command::Verify { corpus } => cmd_verify(corpus),
        Command::Witness { bundle, mode, bound, steps } => cmd_witness(bundle, *mode, *bound, *steps),
        Command::Chain { theories, rtopos, gens, rounds } => cmd_chain(theories, *rtopos, gens, *rounds, cap),
    };
    result.unwrap_or_else(|o| o)
}

/// Parses arguments, runs, and performs the output; returns the exit code.
pub fn main_with(args: impl IntoIterator<Item = String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let outcome = run(&cli);
    eprintln!("{}", outcome.summary);
    let text = outcome.render();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_IO;
            }
        }
        None => print!("{text}"),
    }
    outcome.code
}

type Cmd = Result<Outcome, Outcome>;

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| Outcome::fail(EXIT_IO, format!("cannot read {}: {e}", path.display())))
}

/// A theory file, or one of `std:cat`, `std:regular`, `std:rtopos<r>`.
fn load_theory(spec: &str) -> Result<TheoryPresentation, Outcome> {
    if let Some(name) = spec.strip_prefix("std:") {
        return match name {
            "cat" => Ok(category_theory()),
            "regular" => Ok(regular_category_theory()),
            _ => match name.strip_prefix("rtopos").and_then(|r| r.parse::<usize>().ok()) {
                Some(r) => Ok(r_topos_theory(r).theory),
                None => Err(Outcome::fail(EXIT_IO, format!("unknown built-in theory `{spec}`"))),
            },
        };
    }
    let text = read(Path::new(spec))?;
    let (theory, _) = parse_theory_spanned(&text)
        .map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("{spec}:{e}")))?;
    let errors: Vec<String> = validate(&theory).into_iter().filter(|d| d.is_error()).map(|d| d.message).collect();
    if !errors.is_empty() {
        return Err(Outcome::fail(EXIT_VALIDATION, format!("{spec}: {}", errors.join("; "))));
    }
    Ok(theory)
}

fn load_gens(g: &Gens) -> Result<GeneratorSet, Outcome> {
    let text = match (&g.generators, &g.generators_file) {
        (Some(t), None) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => String::new(),
        (Some(_), Some(_)) => {
            return Err(Outcome::fail(EXIT_VALIDATION, "give --generators or --generators-file, not both".into()))
        }
    };
    GeneratorSet::parse(&text).map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("generators: {e}")))
}

fn class_counts(s: &SaturationState) -> BTreeMap<String, usize> {
    s.theory().sorts.iter().map(|so| (so.name.clone(), s.class_count(&so.name).unwrap_or(0))).collect()
}

fn counts_text(c: &BTreeMap<String, usize>) -> String {
    if c.is_empty() {
        return "no sorts".into();
    }
    c.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Saturates, mapping a cap overrun to its partial state.
fn run_chase(theory: &TheoryPresentation, gens: &GeneratorSet, rounds: usize, cap: usize) -> Result<(SaturationState, bool), Outcome> {
    match saturate_with(theory, gens, &ChaseConfig::rounds(rounds).with_cap(cap)) {
        Ok(s) => Ok((s, false)),
        Err(ChaseError::ElementCap { partial, .. }) => Ok((*partial, true)),
        Err(e) => Err(Outcome::fail(EXIT_VALIDATION, e.to_string())),
    }
}

pub fn cmd_check(path: &str) -> Cmd {
    let text = read(Path::new(path))?;
    let (theory, spans) = match parse_theory_spanned(&text) {
        Ok(x) => x,
        Err(e) => {
            let d = json!({ "severity": "error", "message": e.kind.to_string(), "line": e.line, "col": e.col });
            return Ok(Outcome {
                code: EXIT_VALIDATION,
                json: json!({ "theory": null, "diagnostics": [d] }),
                summary: format!("{path}:{e}"),
            });
        }
    };
    let diags = validate(&theory);
    let lines: Vec<Value> = diags
        .iter()
        .map(|d| serde_json::from_str(&d.to_json_line(Some(&spans))).expect("diagnostic is json"))
        .collect();
    let errors = diags.iter().filter(|d| d.is_error()).count();
    let code = if errors == 0 { EXIT_OK } else { EXIT_VALIDATION };
    let summary = format!(
        "{}: {} sorts, {} ops, {} axioms, {errors} errors, {} warnings",
        theory.name,
        theory.sorts.len(),
        theory.ops.len(),
        theory.axioms.len(),
        diags.len() - errors
    );
    Ok(Outcome { code, json: json!({ "theory": theory.name, "diagnostics": lines }), summary })
}

pub fn cmd_saturate(theory: &str, gens: &Gens, rounds: usize, cap: usize) -> Cmd {
    let t = load_theory(theory)?;
    let g = load_gens(gens)?;
    let (state, capped) = run_chase(&t, &g, rounds, cap)?;
    let counts = class_counts(&state);
    let mut summary = format!("{}: stage {}, {} elements, {}", t.name, state.stage(), state.num_elements(), counts_text(&counts));
    if capped {
        summary.push_str(&format!(" (element cap {cap} exceeded, partial dump)"));
    }
    Ok(Outcome { code: if capped { EXIT_CAP } else { EXIT_OK }, json: state.dump(), summary })
}

pub fn cmd_enumerate(theory: &str, sort: &str, gens: &Gens, rounds: usize, cap: usize) -> Cmd {
    let t = load_theory(theory)?;
    let g = load_gens(gens)?;
    let (state, capped) = run_chase(&t, &g, rounds, cap)?;
    let n = state.class_count(sort).map_err(|e| Outcome::fail(EXIT_VALIDATION, e.to_string()))?;
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let id = state.enumerate(sort, i).expect("index below count");
        rows.push(json!({ "index": i, "id": id, "bornInRound": state.born_in_round(id), "witness": state.witness(id).to_string() }));
    }
    let json = json!({ "theory": t.name, "sort": sort, "stage": state.stage(), "capExceeded": capped, "classes": n, "enumeration": rows });
    let summary = format!("{}: {n} classes of {sort} at stage {}", t.name, state.stage());
    Ok(Outcome { code: if capped { EXIT_CAP } else { EXIT_OK }, json, summary })
}

pub fn cmd_verify(corpus: &str) -> Cmd {
    let c = if corpus == "default" {
        Corpus::standard()
    } else {
        let text = read(Path::new(corpus))?;
        let items: Vec<CategoryJson> =
            serde_json::from_str(&text).map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("{corpus}: {e}")))?;
        Corpus::from_json(&items)
    };
    let report = run_corpus(&c);
    let claims: Vec<Value> = Claim::ALL
        .iter()
        .map(|&cl| json!({ "claim": cl, "applicable": report.applicable(cl), "counterexamples": report.counterexamples(cl) }))
        .collect();
    let passed = report.passed();
    let summary = format!(
        "{} instances, {} commas, {} outcomes, {} errors: {}",
        report.instances,
        report.commas,
        report.outcomes.len(),
        report.errors.len(),
        if passed { "all claims pass" } else { "FAILURES" }
    );
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["passed"] = json!(passed);
    json["claims"] = json!(claims);
    Ok(Outcome { code: if passed { EXIT_OK } else { EXIT_VALIDATION }, json, summary })
}

pub fn cmd_witness(path: &Path, mode: WitnessMode, bound: Option<u64>, steps: usize) -> Cmd {
    let text = read(path)?;
    let mut bundle =
        Bundle::parse(&text).map_err(|e| Outcome::fail(EXIT_VALIDATION, format!("{}: {e}", path.display())))?;
    if let Some(b) = bound {
        bundle.bounds.fiber = b;
    }
    let invalid = |e: EffectiveError| Outcome::fail(EXIT_VALIDATION, e.to_string());
    match mode {
        WitnessMode::Section => {
            let r = bundle.section().map_err(invalid)?;
            let summary = format!("section over {} base points, {} bound-exceeded", r.entries.len(), r.exceeded.len());
            Ok(Outcome::ok(json!({ "mode": "section", "section": r.witnesses(), "report": r }), summary))
        }
        WitnessMode::Branch => match bundle.branch(steps) {
            Ok(b) => {
                let summary = format!("branch of {} nodes", b.nodes.len());
                Ok(Outcome::ok(json!({ "mode": "branch", "branch": b.nodes, "edges": b.edges }), summary))
            }
            Err(e @ EffectiveError::CertificateViolation { .. }) => {
                let msg = e.to_string();
                Ok(Outcome { code: EXIT_VALIDATION, json: json!({ "mode": "branch", "error": msg }), summary: msg })
            }
            Err(e) => Err(invalid(e)),
        },
    }
}

pub fn cmd_chain(theories: &[String], rtopos: Option<usize>, gens: &Gens, rounds: usize, cap: usize) -> Cmd {
    let chain = match rtopos {
        Some(r) => r_topos_chain(r),
        None => {
            let stages = theories.iter().map(|t| load_theory(t)).collect::<Result<Vec<_>, _>>()?;
            if stages.is_empty() {
                return Err(Outcome::fail(EXIT_VALIDATION, "chain needs at least one theory".into()));
            }
            TheoryChain::linear(stages).map_err(|e| Outcome::fail(EXIT_VALIDATION, e.to_string()))?
        }
    };
    let g = load_gens(gens)?;
    let mut cfg = ChainConfig::rounds(rounds);
    cfg.cap = cap;
    let report = match free_model_of_chain(&chain, &g, &cfg) {
        Ok(r) => r,
        Err(ChaseError::ElementCap { cap, .. }) => {
            return Err(Outcome::fail(EXIT_CAP, format!("element cap {cap} exceeded")));
        }
        Err(e) => return Err(Outcome::fail(EXIT_VALIDATION, e.to_string())),
    };
    let realized = report.all_realized();
    let summary = format!(
        "{} stages at {} rounds, colimit {}: {}",
        report.reducts.len(),
        report.rounds,
        counts_text(&report.colimit_classes),
        if realized { "every stage reduct realized" } else { "unrealized elements or equations" }
    );
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["allRealized"] = json!(realized);
    Ok(Outcome { code: if realized { EXIT_OK } else { EXIT_VALIDATION }, json, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("eatforge").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_parse_in_any_position() {
        let cli = parse(&["saturate", "t.eat", "--rounds", "4", "--cap", "9", "--out", "o.json"]);
        assert_eq!(cli.common.cap, Some(9));
        assert_eq!(cli.common.out.as_deref(), Some(Path::new("o.json")));
        assert!(matches!(cli.command, Command::Saturate { rounds: 4, .. }));
        let cli = parse(&["--format", "json", "verify"]);
        assert!(matches!(&cli.command, Command::Verify { corpus } if corpus == "default"));
        assert!(Cli::try_parse_from(["eatforge", "verify", "--format", "xml"]).is_err());
    }

    #[test]
    fn explicit_cap_wins() {
        assert_eq!(resolve_cap(Some(5)), 5);
    }

    #[test]
    fn builtin_theory_names() {
        assert_eq!(load_theory("std:cat").unwrap().name, "cat");
        assert_eq!(load_theory("std:rtopos2").unwrap().name, "rtopos2");
        assert_eq!(load_theory("std:nothing").unwrap_err().code, EXIT_IO);
    }

    #[test]
    fn generator_sources_are_exclusive() {
        let both = Gens { generators: Some("a : M".into()), generators_file: Some("g.txt".into()) };
        assert_eq!(load_gens(&both).unwrap_err().code, EXIT_VALIDATION);
        assert_eq!(load_gens(&Gens::default()).unwrap().names().len(), 0);
    }
}
