//! Gödel numbering: the Cantor-style pairing function, sequence codes,
//! canonical indices of finite sets, and codes of clauses and proof schemes.
//!
//! Every coder here is a closed-form computation over arbitrary-precision
//! naturals. Nothing loops on an unbounded search.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// A natural number used as a code.
pub type Code = BigUint;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodingError {
    #[error("{0} is not the code of a finite sequence")]
    NotASequence(Code),
}

/// `[x, y] = ((x + y)^2 + 3x + y) / 2`.
pub fn pair(x: &BigUint, y: &BigUint) -> Code {
    if x.bits() < 62 && y.bits() < 62 {
        let (x, y) = (x.to_u128().unwrap(), y.to_u128().unwrap());
        let s = x + y;
        return BigUint::from((s * s + s) / 2 + x);
    }
    let s = x + y;
    // (s^2 + s) / 2 + x equals the closed form above.
    ((&s * &s + &s) >> 1u32) + x
}

pub fn pair_u64(x: u64, y: u64) -> Code {
    pair(&BigUint::from(x), &BigUint::from(y))
}

/// Inverse of [`pair`].
pub fn unpair(c: &BigUint) -> (BigUint, BigUint) {
    if c.bits() <= 120 {
        let c = c.to_u128().expect("fits in 120 bits");
        let w = (((c << 3) + 1).isqrt() - 1) >> 1;
        let x = c - (w * w + w) / 2;
        return (BigUint::from(x), BigUint::from(w - x));
    }
    // w = floor((sqrt(8c + 1) - 1) / 2) is the diagonal index x + y.
    let disc: BigUint = (c << 3u32) + 1u32;
    let w: BigUint = (disc.sqrt() - 1u32) >> 1u32;
    let t = (&w * &w + &w) >> 1u32;
    let x = c - t;
    let y = w - &x;
    (x, y)
}

/// `[x0, ..., xn] = [[x0, ..., x(n-1)], xn]`, with `[x0] = x0`.
fn tuple_code(items: &[BigUint]) -> Code {
    let mut iter = items.iter();
    let mut acc = iter.next().cloned().unwrap_or_else(BigUint::zero);
    for x in iter {
        acc = pair(&acc, x);
    }
    acc
}

/// `c(σ) = [n, [σ(0), ..., σ(n-1)]]` and `c(∅) = 0`.
pub fn seq_code(seq: &[BigUint]) -> Code {
    if seq.is_empty() {
        return BigUint::zero();
    }
    pair(&BigUint::from(seq.len()), &tuple_code(seq))
}

pub fn seq_code_u64(seq: &[u64]) -> Code {
    let items: Vec<BigUint> = seq.iter().map(|&x| BigUint::from(x)).collect();
    seq_code(&items)
}

/// Left inverse of [`seq_code`].
///
/// A nonzero code whose length component is zero does not come from any
/// sequence. Every other code decodes: the body is split by `len - 1`
/// unpairing steps. The length is bounded by the code itself, so the loop is
/// bounded as well.
pub fn seq_decode(c: &BigUint) -> Result<Vec<BigUint>, CodingError> {
    if c.is_zero() {
        return Ok(Vec::new());
    }
    let (len, mut body) = unpair(c);
    let len = match len.to_usize() {
        Some(n) if n > 0 => n,
        _ => return Err(CodingError::NotASequence(c.clone())),
    };
    let mut out = Vec::with_capacity(len.min(1 << 16));
    for _ in 1..len {
        let (rest, last) = unpair(&body);
        out.push(last);
        body = rest;
    }
    out.push(body);
    out.reverse();
    Ok(out)
}

/// Decodes a sequence whose entries all fit in `u64`; `None` otherwise.
pub fn seq_decode_u64(c: &BigUint) -> Option<Vec<u64>> {
    seq_decode(c).ok()?.iter().map(|x| x.to_u64()).collect::<Option<Vec<_>>>()
}

/// `can(X) = Σ 2^x` over the members of `X`.
pub fn can_index<I>(set: I) -> Code
where
    I: IntoIterator<Item = u64>,
{
    let mut acc = BigUint::zero();
    for x in set {
        acc.set_bit(x, true);
    }
    acc
}

/// Members of the finite set with canonical index `c`, ascending.
pub fn can_decode(c: &BigUint) -> Vec<u64> {
    (0..c.bits()).filter(|&i| c.bit(i)).collect()
}

/// Code of a clause given the code of its head and of its premise and
/// constraint atoms: the triple `(x, y, z)` encoded as `[[x, y], z]`.
pub fn clause_code<P, N>(head: u64, premises: P, constraints: N) -> Code
where
    P: IntoIterator<Item = u64>,
    N: IntoIterator<Item = u64>,
{
    let x = BigUint::from(head);
    let y = can_index(premises);
    let z = can_index(constraints);
    pair(&pair(&x, &y), &z)
}

/// Code of a proof scheme from its steps `(clause code, atom code)` and its
/// support: `[s, t]` where `s` is the sequence code of the step pair codes and
/// `t` the canonical index of the support.
pub fn scheme_code<S>(steps: &[(Code, u64)], support: S) -> Code
where
    S: IntoIterator<Item = u64>,
{
    let items: Vec<BigUint> = steps.iter().map(|(clause, atom)| pair(clause, &BigUint::from(*atom))).collect();
    pair(&seq_code(&items), &can_index(support))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigUint {
        BigUint::from(x)
    }

    // Closed form evaluated directly, independent of the implementation.
    fn pair_oracle(x: u64, y: u64) -> u64 {
        (x * x + 2 * x * y + y * y + 3 * x + y) / 2
    }

    #[test]
    fn pair_small_values() {
        assert_eq!(pair_u64(0, 0), b(0));
        assert_eq!(pair_u64(0, 1), b(1));
        assert_eq!(pair_u64(1, 0), b(2));
        assert_eq!(pair_u64(1, 1), b(4));
        for x in 0..30 {
            for y in 0..30 {
                assert_eq!(pair_u64(x, y), b(pair_oracle(x, y)));
            }
        }
    }

    #[test]
    fn pairing_across_word_sizes() {
        for x in [(1u128 << 61) - 1, 1 << 61, 1 << 62, u64::MAX as u128, 1 << 70] {
            let x = BigUint::from(x);
            let y = &x + 3u32;
            let s = &x + &y;
            assert_eq!(pair(&x, &y), (&s * &s + &s) / 2u32 + &x);
            assert_eq!(unpair(&pair(&x, &y)), (x, y));
        }
    }

    #[test]
    fn unpair_small_values() {
        assert_eq!(unpair(&b(0)), (b(0), b(0)));
        assert_eq!(unpair(&b(2)), (b(1), b(0)));
        assert_eq!(unpair(&b(4)), (b(1), b(1)));
    }

    #[test]
    fn seq_examples() {
        assert_eq!(seq_code_u64(&[]), b(0));
        assert_eq!(seq_code_u64(&[0]), b(2));
        assert_eq!(seq_code_u64(&[0, 0]), b(5));
        assert_eq!(seq_decode(&b(0)).unwrap(), Vec::<BigUint>::new());
        assert_eq!(seq_decode(&b(2)).unwrap(), vec![b(0)]);
        assert_eq!(seq_decode(&b(5)).unwrap(), vec![b(0), b(0)]);
    }

    #[test]
    fn zero_length_with_body_is_rejected() {
        // [0, 1] = 1 has length field 0 but a nonzero body.
        assert_eq!(seq_decode(&b(1)), Err(CodingError::NotASequence(b(1))));
    }

    #[test]
    fn can_index_examples() {
        assert_eq!(can_index([]), b(0));
        assert_eq!(can_index([0]), b(1));
        assert_eq!(can_index([0, 1]), b(3));
        assert_eq!(can_decode(&b(3)), vec![0, 1]);
    }

    #[test]
    fn clause_code_examples() {
        assert_eq!(clause_code(0, [], []), pair(&pair(&b(0), &b(0)), &b(0)));
        assert_eq!(clause_code(0, [1], []), pair(&pair(&b(0), &b(2)), &b(0)));
        assert_eq!(clause_code(3, [1, 2], [0]), clause_code(3, [2, 1], [0]));
    }

    #[test]
    fn scheme_code_examples() {
        let fact = clause_code(0, [], []);
        let code = scheme_code(&[(fact.clone(), 0)], []);
        let expected = pair(&seq_code(&[pair(&fact, &b(0))]), &b(0));
        assert_eq!(code, expected);
        let other = scheme_code(&[(fact, 0)], [1]);
        assert_ne!(code, other);
    }

    #[test]
    fn long_sequences_do_not_overflow() {
        let seq: Vec<u64> = (0..12).map(|i| 1000 + i).collect();
        let c = seq_code_u64(&seq);
        assert!(c.bits() > 64);
        assert_eq!(seq_decode_u64(&c).unwrap(), seq);
    }
}
