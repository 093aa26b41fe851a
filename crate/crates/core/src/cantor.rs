//! Middle-third intervals of the ternary Cantor construction, kept in exact arithmetic.
//!
//! At step `n` only the closed outer thirds are trisected again; every open middle third
//! removed so far stays in the list. Indexing each middle interval by the number of steps
//! since it appeared yields `ruler_block(n)` read left to right.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{Pow, Zero};
use serde::{Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::ruler::{ruler_block, IndexSequence};

pub const MAX_LEVEL: u32 = 20;

/// Exact rational with a power-of-three denominator, `numerator / 3^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TernaryRational {
    numerator: BigUint,
    exponent: u32,
}

fn pow3(e: u32) -> BigUint {
    BigUint::from(3u32).pow(e)
}

impl TernaryRational {
    /// Builds `numerator / 3^exponent` in canonical form (numerator not divisible by 3 unless
    /// the exponent is 0).
    pub fn new(numerator: BigUint, exponent: u32) -> Self {
        let three = BigUint::from(3u32);
        let mut numerator = numerator;
        let mut exponent = exponent;
        if numerator.is_zero() {
            exponent = 0;
        }
        while exponent > 0 && (&numerator % &three).is_zero() {
            numerator /= &three;
            exponent -= 1;
        }
        Self {
            numerator,
            exponent,
        }
    }

    pub fn from_u64(numerator: u64, exponent: u32) -> Self {
        Self::new(BigUint::from(numerator), exponent)
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Numerator after rescaling to denominator `3^exponent` (must not be below the own exponent).
    fn scaled_to(&self, exponent: u32) -> BigUint {
        debug_assert!(exponent >= self.exponent);
        &self.numerator * pow3(exponent - self.exponent)
    }

    /// `self - other`, or `None` if the result would be negative.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        let e = self.exponent.max(other.exponent);
        let (a, b) = (self.scaled_to(e), other.scaled_to(e));
        (a >= b).then(|| Self::new(a - b, e))
    }

    pub fn to_ratio(&self) -> Ratio<BigUint> {
        Ratio::new(self.numerator.clone(), pow3(self.exponent))
    }
}

impl Ord for TernaryRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_to(e).cmp(&other.scaled_to(e))
    }
}

impl PartialOrd for TernaryRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TernaryRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/3^{}", self.numerator, self.exponent)
    }
}

impl Serialize for TernaryRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An open middle third `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MiddleInterval {
    pub lo: TernaryRational,
    pub hi: TernaryRational,
    pub birth_step: u32,
    /// Steps since the interval was formed, counting the birth step.
    pub index: u32,
}

impl MiddleInterval {
    pub fn width(&self) -> TernaryRational {
        self.hi
            .checked_sub(&self.lo)
            .expect("middle interval has hi > lo")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorLevel {
    pub step: u32,
    /// Left to right.
    pub intervals: Vec<MiddleInterval>,
    /// Total width of the intervals, summed exactly.
    pub removed_length: Ratio<BigUint>,
}

/// Builds `C_n`, the middle intervals present after `n` trisection steps.
pub fn cantor_level(n: u32) -> Result<CantorLevel> {
    if n == 0 || n > MAX_LEVEL {
        return Err(domain("cantor_level", n, "1..=20"));
    }
    let mut intervals = Vec::with_capacity((1usize << n) - 1);
    collect_middles(&BigUint::zero(), 0, n, &mut intervals);
    let removed_length = summed_widths(&intervals, n);
    Ok(CantorLevel {
        step: n,
        intervals,
        removed_length,
    })
}

/// Visits the closed piece `[left / 3^depth, (left + 1) / 3^depth]` in order: left third,
/// middle third, right third.
fn collect_middles(left: &BigUint, depth: u32, n: u32, out: &mut Vec<MiddleInterval>) {
    if depth == n {
        return;
    }
    let base = left * 3u32;
    let birth_step = depth + 1;
    collect_middles(&base, birth_step, n, out);
    out.push(MiddleInterval {
        lo: TernaryRational::new(&base + 1u32, birth_step),
        hi: TernaryRational::new(&base + 2u32, birth_step),
        birth_step,
        index: n - depth,
    });
    collect_middles(&(base + 2u32), birth_step, n, out);
}

/// Exact sum of `hi - lo` over common denominator `3^n`.
fn summed_widths(intervals: &[MiddleInterval], n: u32) -> Ratio<BigUint> {
    let numerator = intervals
        .iter()
        .fold(BigUint::zero(), |acc, iv| acc + iv.width().scaled_to(n));
    Ratio::new(numerator, pow3(n))
}

pub fn index_sequence(level: &CantorLevel) -> IndexSequence {
    IndexSequence::from_terms(level.intervals.iter().map(|iv| iv.index).collect())
}

/// `L_n = sum_k 3^(r_n(k) - (n+1))` over `ruler_block(n)`.
pub fn removed_length_formula(n: u32) -> Result<Ratio<BigUint>> {
    if n == 0 || n > MAX_LEVEL {
        return Err(domain("removed_length_formula", n, "1..=20"));
    }
    // each term is 3^(r-1) / 3^n
    let numerator = ruler_block(n)?
        .iter()
        .fold(BigUint::zero(), |acc, &r| acc + pow3(r - 1));
    Ok(Ratio::new(numerator, pow3(n)))
}

/// Total removed length after `n` steps, by the index formula and by summing interval widths.
/// Both routes must agree exactly.
pub fn removed_length(n: u32) -> Result<Ratio<BigUint>> {
    let formula = removed_length_formula(n)?;
    let geometric = cantor_level(n)?.removed_length;
    if formula != geometric {
        return Err(Error::Mismatch {
            identity: "removed length: index formula vs interval widths",
            detail: format!("{formula} != {geometric}"),
        });
    }
    Ok(formula)
}

/// `(2/3)^n`, the length left after removing `n` generations of middle thirds.
pub fn remaining_length(n: u32) -> Ratio<BigUint> {
    Ratio::new(BigUint::from(2u32).pow(n), pow3(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(num: u64, den: u64) -> Ratio<BigUint> {
        Ratio::new(BigUint::from(num), BigUint::from(den))
    }

    fn endpoints(level: &CantorLevel) -> Vec<(String, String)> {
        level
            .intervals
            .iter()
            .map(|iv| (iv.lo.to_string(), iv.hi.to_string()))
            .collect()
    }

    #[test]
    fn ternary_canonical_form() {
        let third = TernaryRational::from_u64(9, 3);
        assert_eq!(
            (third.numerator().clone(), third.exponent()),
            (BigUint::from(1u32), 1)
        );
        assert_eq!(TernaryRational::from_u64(0, 5).to_string(), "0/3^0");
        assert_eq!(TernaryRational::from_u64(6, 1).to_string(), "2/3^0");
        assert!(TernaryRational::from_u64(1, 3) < TernaryRational::from_u64(1, 2));
        assert_eq!(
            TernaryRational::from_u64(2, 1).checked_sub(&TernaryRational::from_u64(1, 1)),
            Some(TernaryRational::from_u64(1, 1))
        );
        assert_eq!(
            TernaryRational::from_u64(1, 2).checked_sub(&TernaryRational::from_u64(1, 1)),
            None
        );
    }

    #[test]
    fn first_levels() {
        let c1 = cantor_level(1).unwrap();
        assert_eq!(endpoints(&c1), vec![("1/3^1".into(), "2/3^1".into())]);

        let c2 = cantor_level(2).unwrap();
        assert_eq!(
            endpoints(&c2),
            vec![
                ("1/3^2".to_string(), "2/3^2".to_string()),
                ("1/3^1".to_string(), "2/3^1".to_string()),
                ("7/3^2".to_string(), "8/3^2".to_string()),
            ]
        );
        assert_eq!(index_sequence(&c2), [1, 2, 1]);

        let c3 = cantor_level(3).unwrap();
        assert_eq!(
            endpoints(&c3)[0],
            ("1/3^3".to_string(), "2/3^3".to_string())
        );
        let newest: Vec<_> = c3
            .intervals
            .iter()
            .filter(|iv| iv.birth_step == 3)
            .map(|iv| iv.lo.to_string())
            .collect();
        assert_eq!(newest, vec!["1/3^3", "7/3^3", "19/3^3", "25/3^3"]);
        assert_eq!(index_sequence(&c3), [1, 2, 1, 3, 1, 2, 1]);
    }

    #[test]
    fn level_cap() {
        assert!(cantor_level(0).is_err());
        assert!(cantor_level(21).is_err());
        assert!(removed_length(21).is_err());
    }

    #[test]
    fn removed_length_examples() {
        assert_eq!(removed_length(1).unwrap(), r(1, 3));
        assert_eq!(removed_length(2).unwrap(), r(5, 9));
        assert_eq!(removed_length(3).unwrap(), r(19, 27));
        // 4 * 1/27 + 2 * 1/9 + 1/3
        assert_eq!(removed_length(3).unwrap(), r(4, 27) + r(2, 9) + r(1, 3));
    }

    #[test]
    fn levels_are_ordered_and_disjoint() {
        for n in 1..=10 {
            let level = cantor_level(n).unwrap();
            assert_eq!(level.intervals.len(), (1 << n) - 1);
            for w in level.intervals.windows(2) {
                assert!(w[0].lo < w[0].hi);
                assert!(w[0].hi < w[1].lo);
            }
            for iv in &level.intervals {
                assert_eq!(iv.index, n - iv.birth_step + 1);
                assert_eq!(iv.width(), TernaryRational::from_u64(1, iv.birth_step));
            }
        }
    }

    #[test]
    fn index_sequence_matches_block() {
        for n in 1..=12 {
            assert_eq!(
                index_sequence(&cantor_level(n).unwrap()),
                ruler_block(n).unwrap()
            );
        }
    }

    #[test]
    fn widths_by_birth_step() {
        let n = 9;
        let level = cantor_level(n).unwrap();
        for b in 1..=n {
            let count = level
                .intervals
                .iter()
                .filter(|iv| iv.birth_step == b)
                .count();
            assert_eq!(count, 1 << (b - 1));
        }
    }

    #[test]
    fn complement_is_two_thirds_power() {
        for n in 1..=12 {
            assert_eq!(
                Ratio::one() - removed_length(n).unwrap(),
                remaining_length(n)
            );
        }
    }
}
