//! Capacity sequences N^{n,m}(a,b) of singular ellipsoids.
//!
//! The sequence is the multiset `{a·k₁ + b·k₂ : k₁, k₂ >= 0,
//! k₁ + m·k₂ ≡ 0 (mod n)}` sorted with repetitions. Pairs are enumerated
//! under a value cap that doubles until enough terms are collected.

use num_traits::Signed;
use thiserror::Error;

use crate::domain::{CapacitySequence, ConeFrame};
use crate::rational::{int, Rational};

/// Largest `count` a query accepts.
pub const DEFAULT_MAX_COUNT: usize = 1_000_000;

/// Largest number of pairs a single enumeration pass may visit.
pub const ENUMERATION_BUDGET: usize = 50_000_000;

/// Errors raised by spectrum generation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: Rational },
    #[error("count must be between 1 and {max}, got {count}")]
    Count { count: usize, max: usize },
    #[error("enumeration budget of {budget} pairs exceeded")]
    Budget { budget: usize },
}

/// A validated request for the first `count` terms of N^{n,m}(a,b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumQuery {
    frame: ConeFrame,
    a: Rational,
    b: Rational,
    count: usize,
}

impl SpectrumQuery {
    pub fn new(frame: ConeFrame, a: Rational, b: Rational, count: usize) -> Result<Self, SpectrumError> {
        if !a.is_positive() {
            return Err(SpectrumError::NonPositive { name: "a", value: a });
        }
        if !b.is_positive() {
            return Err(SpectrumError::NonPositive { name: "b", value: b });
        }
        if count == 0 || count > DEFAULT_MAX_COUNT {
            return Err(SpectrumError::Count { count, max: DEFAULT_MAX_COUNT });
        }
        Ok(SpectrumQuery { frame, a, b, count })
    }

    pub fn frame(&self) -> ConeFrame {
        self.frame
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// True when `k₁ + m·k₂ ≡ 0 (mod n)`.
pub fn is_admissible(frame: ConeFrame, k1: i64, k2: i64) -> bool {
    (k1 + frame.m() * k2).rem_euclid(frame.n()) == 0
}

/// All admissible `(k₁, k₂, a·k₁ + b·k₂)` with value at most `cap`, in
/// order of increasing `k₂` then `k₁`.
pub fn admissible_pairs_up_to(
    frame: ConeFrame,
    a: &Rational,
    b: &Rational,
    cap: &Rational,
    budget: usize,
) -> Result<Vec<(i64, i64, Rational)>, SpectrumError> {
    let n = frame.n();
    let mut out = Vec::new();
    let mut k2 = 0i64;
    loop {
        let base = b * int(k2);
        if &base > cap {
            break;
        }
        let mut k1 = (-frame.m() * k2).rem_euclid(n);
        loop {
            let value = a * int(k1) + &base;
            if &value > cap {
                break;
            }
            if out.len() >= budget {
                return Err(SpectrumError::Budget { budget });
            }
            out.push((k1, k2, value));
            k1 += n;
        }
        k2 += 1;
    }
    Ok(out)
}

/// The first `count` terms of N^{n,m}(a,b).
pub fn singular_ellipsoid_spectrum(q: &SpectrumQuery) -> Result<CapacitySequence, SpectrumError> {
    let mut cap = if q.a > q.b { q.a.clone() } else { q.b.clone() };
    loop {
        let pairs = admissible_pairs_up_to(q.frame, &q.a, &q.b, &cap, ENUMERATION_BUDGET)?;
        if pairs.len() >= q.count {
            let mut values: Vec<Rational> = pairs.into_iter().map(|(_, _, v)| v).collect();
            values.sort_unstable();
            values.truncate(q.count);
            return Ok(CapacitySequence::new(values).expect("sorted and starting at zero"));
        }
        cap *= int(2);
    }
}

/// The classical ellipsoid sequence N(a,b), the frame (1,0) case.
pub fn classical_spectrum(a: &Rational, b: &Rational, count: usize) -> Result<CapacitySequence, SpectrumError> {
    let q = SpectrumQuery::new(ConeFrame::CLASSICAL, a.clone(), b.clone(), count)?;
    singular_ellipsoid_spectrum(&q)
}

/// Convenience wrapper building the query in place.
pub fn spectrum(frame: ConeFrame, a: &Rational, b: &Rational, count: usize) -> Result<CapacitySequence, SpectrumError> {
    let q = SpectrumQuery::new(frame, a.clone(), b.clone(), count)?;
    singular_ellipsoid_spectrum(&q)
}

/// Number of admissible pairs with value at most `v`, by direct
/// enumeration.
pub fn count_at_most(frame: ConeFrame, a: &Rational, b: &Rational, v: &Rational) -> Result<usize, SpectrumError> {
    if v.is_negative() {
        return Ok(0);
    }
    Ok(admissible_pairs_up_to(frame, a, b, v, ENUMERATION_BUDGET)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn ints(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| int(v)).collect()
    }

    fn frame(n: i64, m: i64) -> ConeFrame {
        ConeFrame::new(n, m).unwrap()
    }

    #[test]
    fn sphere_sequence() {
        let s = spectrum(frame(2, 1), &int(1), &int(1), 16).unwrap();
        assert_eq!(s.values(), ints(&[0, 2, 2, 2, 4, 4, 4, 4, 4, 6, 6, 6, 6, 6, 6, 6]).as_slice());
    }

    #[test]
    fn projective_plane_sequence() {
        let s = spectrum(frame(4, 1), &int(1), &int(1), 15).unwrap();
        assert_eq!(s.values(), ints(&[0, 4, 4, 4, 4, 4, 8, 8, 8, 8, 8, 8, 8, 8, 8]).as_slice());
    }

    #[test]
    fn classical_sequences() {
        let s = spectrum(ConeFrame::CLASSICAL, &int(1), &int(1), 6).unwrap();
        assert_eq!(s.values(), ints(&[0, 1, 1, 2, 2, 2]).as_slice());
        let s = classical_spectrum(&int(1), &int(2), 7).unwrap();
        assert_eq!(s.values(), ints(&[0, 1, 2, 2, 3, 3, 4]).as_slice());
        let r = frac(3, 7);
        let scaled = classical_spectrum(&r, &r, 6).unwrap();
        let unit = classical_spectrum(&int(1), &int(1), 6).unwrap();
        assert_eq!(scaled, unit.scaled(&r));
        assert_eq!(classical_spectrum(&int(5), &int(9), 1).unwrap().values(), ints(&[0]).as_slice());
    }

    #[test]
    fn query_validation() {
        assert!(SpectrumQuery::new(frame(2, 1), int(0), int(1), 3).is_err());
        assert!(SpectrumQuery::new(frame(2, 1), int(1), int(-1), 3).is_err());
        assert!(SpectrumQuery::new(frame(2, 1), int(1), int(1), 0).is_err());
        assert!(SpectrumQuery::new(frame(2, 1), int(1), int(1), DEFAULT_MAX_COUNT + 1).is_err());
    }

    #[test]
    fn admissibility() {
        let f = frame(3, 2);
        assert!(is_admissible(f, 0, 0));
        assert!(is_admissible(f, 1, 1));
        assert!(!is_admissible(f, 1, 0));
        assert!(is_admissible(f, 3, 0));
    }

    #[test]
    fn budget_is_enforced() {
        let err = admissible_pairs_up_to(frame(1, 0), &int(1), &int(1), &int(100), 10);
        assert_eq!(err, Err(SpectrumError::Budget { budget: 10 }));
    }
}
