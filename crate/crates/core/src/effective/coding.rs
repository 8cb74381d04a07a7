//! Cantor pairing and list codes.
//!
//! A list `[x1, ..., xn]` is coded as `pair(n, payload)` where the payload of
//! `[]` is 0, of `[x]` is `x`, and of `x :: rest` (rest nonempty) is
//! `pair(x, payload(rest))`. Every number decodes to at most one list; codes
//! `pair(0, p)` with `p > 0` are malformed.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("pairing overflow")]
    Overflow,
    #[error("malformed list code {0}")]
    Malformed(u64),
    #[error("list code {code} has length {len}, above the limit {limit}")]
    TooLong { code: u64, len: u64, limit: u64 },
}

pub fn pair(x: u64, y: u64) -> Result<u64, CodingError> {
    let s = x.checked_add(y).ok_or(CodingError::Overflow)?;
    let t = (s as u128) * (s as u128 + 1) / 2 + y as u128;
    u64::try_from(t).map_err(|_| CodingError::Overflow)
}

pub fn unpair(z: u64) -> (u64, u64) {
    // w = ⌊(√(8z + 1) − 1) / 2⌋, the largest w with w(w+1)/2 ≤ z.
    let z = z as u128;
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let y = z - w * (w + 1) / 2;
    ((w - y) as u64, y as u64)
}

pub fn encode_list(xs: &[u64]) -> Result<u64, CodingError> {
    let mut payload = match xs.last() {
        None => 0,
        Some(&x) => x,
    };
    for &x in xs.iter().rev().skip(1) {
        payload = pair(x, payload)?;
    }
    pair(xs.len() as u64, payload)
}

/// Decodes a list code, refusing lengths above `max_len`.
pub fn decode_list(code: u64, max_len: u64) -> Result<Vec<u64>, CodingError> {
    let (len, mut payload) = unpair(code);
    if len == 0 {
        return if payload == 0 { Ok(Vec::new()) } else { Err(CodingError::Malformed(code)) };
    }
    if len > max_len {
        return Err(CodingError::TooLong { code, len, limit: max_len });
    }
    let mut out = Vec::with_capacity(len as usize);
    for _ in 1..len {
        let (x, rest) = unpair(payload);
        out.push(x);
        payload = rest;
    }
    out.push(payload);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_a_bijection_on_a_prefix() {
        let mut seen = vec![false; 1000];
        for z in 0..1000u64 {
            let (x, y) = unpair(z);
            assert_eq!(pair(x, y).unwrap(), z);
            seen[z as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
        assert_eq!(pair(0, 0).unwrap(), 0);
        assert_eq!(pair(1, 0).unwrap(), 1);
        assert_eq!(pair(0, 1).unwrap(), 2);
        assert_eq!(pair(2, 3).unwrap(), 18);
    }

    #[test]
    fn large_values() {
        for z in [u64::MAX, u64::MAX - 1, 1 << 63, (1 << 40) + 12345] {
            let (x, y) = unpair(z);
            assert_eq!(pair(x, y).unwrap(), z);
        }
        assert_eq!(pair(u64::MAX, 1), Err(CodingError::Overflow));
        assert_eq!(pair(1 << 33, 0), Err(CodingError::Overflow));
    }

    #[test]
    fn lists() {
        for xs in [vec![], vec![0], vec![5], vec![0, 1, 1], vec![3, 0, 2, 7]] {
            let c = encode_list(&xs).unwrap();
            assert_eq!(decode_list(c, 10).unwrap(), xs);
        }
        assert_eq!(encode_list(&[]).unwrap(), 0);
        let bad = pair(0, 4).unwrap();
        assert_eq!(decode_list(bad, 10), Err(CodingError::Malformed(bad)));
        let long = encode_list(&[1, 2, 3]).unwrap();
        assert!(matches!(decode_list(long, 2), Err(CodingError::TooLong { len: 3, .. })));
    }
}
