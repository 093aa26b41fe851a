//! The ruler sequence a(n) = v2(n) + 1, i.e. the exponent of the largest power of two
//! dividing 2n: `1, 2, 1, 3, 1, 2, 1, 4, ...`.
//!
//! Besides the bit-level closed form this module carries the recursive, doubling,
//! streaming and dyadic-rational (Thomae) constructions, block statistics and the
//! combinatorial identities the other constructions are checked against.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Largest block order materialized in memory (2^24 - 1 terms).
pub const MAX_BLOCK_ORDER: u32 = 24;

/// Largest order accepted by [`half_block`] (2^24 terms).
pub const MAX_HALF_ORDER: u32 = MAX_BLOCK_ORDER + 1;

/// Longest prefix [`check_squarefree`] will scan.
pub const MAX_SQUAREFREE_PREFIX: usize = 1 << 13;

/// A finite run of positive integers, usually a prefix or a block of the ruler sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct IndexSequence(Vec<u32>);

impl IndexSequence {
    /// Wraps `terms`, rejecting zero entries.
    pub fn new(terms: Vec<u32>) -> Result<Self> {
        if let Some(pos) = terms.iter().position(|&t| t == 0) {
            return Err(domain(
                "IndexSequence::new",
                format!("term 0 at index {pos}"),
                "terms >= 1",
            ));
        }
        Ok(Self(terms))
    }

    pub(crate) fn from_terms(terms: Vec<u32>) -> Self {
        debug_assert!(terms.iter().all(|&t| t >= 1));
        Self(terms)
    }

    pub fn terms(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn max_term(&self) -> Option<u32> {
        self.0.iter().copied().max()
    }

    /// Sum of the terms in exact arithmetic.
    pub fn term_sum(&self) -> u64 {
        self.0.iter().map(|&t| u64::from(t)).sum()
    }
}

impl Deref for IndexSequence {
    type Target = [u32];

    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl PartialEq<[u32]> for IndexSequence {
    fn eq(&self, other: &[u32]) -> bool {
        self.0 == other
    }
}

impl<const N: usize> PartialEq<[u32; N]> for IndexSequence {
    fn eq(&self, other: &[u32; N]) -> bool {
        self.0 == other
    }
}

impl fmt::Display for IndexSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Term `n` (1-based) of the ruler sequence, from the trailing zero count of `n`.
///
/// Every `u64` position is supported; only `n = 0` is rejected.
#[inline]
pub fn ruler_term(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(domain("ruler_term", n, "1..=2^64-1"));
    }
    Ok(n.trailing_zeros() + 1)
}

/// Term `k` by halving: `g(k) = 1` for odd `k`, `g(k/2) + 1` otherwise.
pub fn ruler_term_recursive(k: u64) -> Result<u32> {
    fn g(k: u64) -> u32 {
        if k % 2 == 1 {
            1
        } else {
            g(k / 2) + 1
        }
    }
    if k == 0 {
        return Err(domain("ruler_term_recursive", k, "k >= 1"));
    }
    Ok(g(k))
}

/// The order-`n` block `r_n` built by doubling: `r_1 = [1]`, `r_{k+1} = r_k ++ [k+1] ++ r_k`.
pub fn ruler_block(n: u32) -> Result<IndexSequence> {
    if n == 0 || n > MAX_BLOCK_ORDER {
        return Err(domain("ruler_block", n, "1..=24"));
    }
    let mut block = Vec::with_capacity((1usize << n) - 1);
    block.push(1);
    for k in 2..=n {
        let prev = block.len();
        block.push(k);
        block.extend_from_within(..prev);
    }
    Ok(IndexSequence::from_terms(block))
}

/// Iterator over the ruler sequence starting at position 1.
#[derive(Debug, Clone)]
pub struct RulerTerms {
    next: u64,
}

impl RulerTerms {
    pub fn new() -> Self {
        Self { next: 1 }
    }

    /// Starts at 1-based `position`.
    pub fn starting_at(position: u64) -> Self {
        Self {
            next: position.max(1),
        }
    }
}

impl Default for RulerTerms {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for RulerTerms {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        let n = self.next;
        if n == 0 {
            return None;
        }
        // wraps to 0 after u64::MAX, which ends the stream
        self.next = n.wrapping_add(1);
        Some(n.trailing_zeros() + 1)
    }
}

/// The first `count` terms of the ruler sequence.
pub fn ruler_stream(count: usize) -> IndexSequence {
    IndexSequence::from_terms(RulerTerms::new().take(count).collect())
}

/// The half construction `h_n`: left thirds and middles only, `h_n = r_{n-1} ++ [n]`.
///
/// `h_n` has length `2^(n-1)` and coincides with the ruler prefix of that length.
pub fn half_block(n: u32) -> Result<IndexSequence> {
    if n == 0 || n > MAX_HALF_ORDER {
        return Err(domain("half_block", n, "1..=25"));
    }
    let mut terms = if n == 1 {
        Vec::new()
    } else {
        ruler_block(n - 1)?.into_vec()
    };
    terms.push(n);
    Ok(IndexSequence::from_terms(terms))
}

/// A dyadic rational `p / 2^k` in lowest terms (`p` odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DyadicRational {
    odd_numerator: u64,
    exponent: u32,
}

impl DyadicRational {
    pub fn new(odd_numerator: u64, exponent: u32) -> Result<Self> {
        if odd_numerator.is_multiple_of(2) {
            return Err(domain(
                "DyadicRational::new",
                odd_numerator,
                "odd numerator",
            ));
        }
        if exponent > 63 {
            return Err(domain("DyadicRational::new", exponent, "exponent <= 63"));
        }
        Ok(Self {
            odd_numerator,
            exponent,
        })
    }

    /// Reduces `numerator / 2^exponent` to lowest terms. The numerator must be nonzero.
    pub fn reduce(numerator: u64, exponent: u32) -> Result<Self> {
        if numerator == 0 {
            return Err(domain(
                "DyadicRational::reduce",
                numerator,
                "numerator >= 1",
            ));
        }
        let shift = numerator.trailing_zeros().min(exponent);
        // an even numerator left over means the value is an integer, not p/2^k with p odd
        Self::new(numerator >> shift, exponent - shift)
            .map_err(|_| domain("DyadicRational::reduce", numerator, "non-integer value"))
    }

    pub fn odd_numerator(&self) -> u64 {
        self.odd_numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// Thomae-type height `h(p/2^k) = 2^-k`.
    pub fn height(&self) -> f64 {
        (-(self.exponent as f64)).exp2()
    }

    /// Exponent of the height, `-k`.
    pub fn height_exponent(&self) -> i32 {
        -(self.exponent as i32)
    }

    pub fn to_f64(&self) -> f64 {
        self.odd_numerator as f64 * self.height()
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        // compare p1 * 2^k2 with p2 * 2^k1 without overflow
        let lhs = u128::from(self.odd_numerator) << other.exponent;
        let rhs = u128::from(other.odd_numerator) << self.exponent;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.odd_numerator, self.exponent)
    }
}

/// All dyadic rationals `p/2^k` in `(0, 1)` with `1 <= k <= n`, in increasing order.
pub fn dyadic_rationals(n: u32) -> Result<Vec<DyadicRational>> {
    if n == 0 || n > MAX_BLOCK_ORDER {
        return Err(domain("dyadic_rationals", n, "1..=24"));
    }
    let mut points = Vec::with_capacity((1usize << n) - 1);
    for k in 1..=n {
        for p in (1..(1u64 << k)).step_by(2) {
            points.push(DyadicRational {
                odd_numerator: p,
                exponent: k,
            });
        }
    }
    points.sort_unstable();
    Ok(points)
}

/// Height exponents `-k` of the ordered dyadic rationals of level at most `n`.
pub fn thomae_exponents(n: u32) -> Result<Vec<i32>> {
    Ok(dyadic_rationals(n)?
        .iter()
        .map(DyadicRational::height_exponent)
        .collect())
}

/// [`thomae_exponents`] shifted by `n + 1` into positive integers; equals `ruler_block(n)`.
pub fn thomae_exponent_sequence(n: u32) -> Result<IndexSequence> {
    let shift = n as i32 + 1;
    let terms = thomae_exponents(n)?
        .into_iter()
        .map(|e| (e + shift) as u32)
        .collect();
    Ok(IndexSequence::from_terms(terms))
}

/// Length, sum, maximum and max/length ratio of the order-`n` block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockStats {
    pub order: u32,
    pub length: u64,
    pub term_sum: u64,
    pub max_term: u32,
    /// `log2(N + 1) / N`
    pub ratio: f64,
}

/// Block length `N(n) = 2^n - 1`.
pub fn block_length(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(domain("block_length", n, "n >= 1"));
    }
    match n {
        1..=63 => Ok((1u64 << n) - 1),
        64 => Ok(u64::MAX),
        _ => Err(Error::Overflow {
            operation: "block_length",
            n: n.into(),
        }),
    }
}

/// Block sum by the recurrence `s_{k+1} = 2 s_k + k + 1`, `s_1 = 1`, in checked arithmetic.
pub fn block_sum(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(domain("block_sum", n, "n >= 1"));
    }
    let overflow = || Error::Overflow {
        operation: "block_sum",
        n: n.into(),
    };
    let mut s: u64 = 1;
    for k in 1..n {
        s = s
            .checked_mul(2)
            .and_then(|v| v.checked_add(u64::from(k) + 1))
            .ok_or_else(overflow)?;
    }
    Ok(s)
}

/// Block sum from the unrolled recurrence
/// `s_n = sum_{j=0}^{n-2} 2^j (n - j) + 2^(n-1) s_1`.
pub fn block_sum_unrolled(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(domain("block_sum_unrolled", n, "n >= 1"));
    }
    let overflow = || Error::Overflow {
        operation: "block_sum_unrolled",
        n: n.into(),
    };
    let pow = |j: u32| 1u64.checked_shl(j).filter(|_| j < 64).ok_or_else(overflow);
    let mut s = pow(n - 1)?;
    for j in 0..n.saturating_sub(1) {
        let term = pow(j)?.checked_mul(u64::from(n - j)).ok_or_else(overflow)?;
        s = s.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(s)
}

/// Block sum by adding up the materialized block (n <= 24).
pub fn block_sum_direct(n: u32) -> Result<u64> {
    Ok(ruler_block(n)?.term_sum())
}

pub fn block_stats(n: u32) -> Result<BlockStats> {
    let length = block_length(n)?;
    let term_sum = block_sum(n)?;
    Ok(BlockStats {
        order: n,
        length,
        term_sum,
        max_term: n,
        ratio: f64::from(n) / length as f64,
    })
}

/// Occurrences of each term value in `ruler_block(n)`.
pub fn frequency_counts(n: u32) -> Result<BTreeMap<u32, u64>> {
    let mut counts = BTreeMap::new();
    for &t in ruler_block(n)?.iter() {
        *counts.entry(t).or_insert(0u64) += 1;
    }
    Ok(counts)
}

/// An occurrence of `ww`: `terms[start..start + half_len] == terms[start + half_len..start + 2 * half_len]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Square {
    /// 0-based index of the first term of the square.
    pub start: usize,
    pub half_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquarefreeReport {
    pub length: usize,
    pub first_square: Option<Square>,
}

impl SquarefreeReport {
    pub fn is_squarefree(&self) -> bool {
        self.first_square.is_none()
    }
}

/// Exhaustive search for a square factor, shortest half-length first, then leftmost.
///
/// For each half-length `l` a run counter tracks how many consecutive positions satisfy
/// `t[i] == t[i + l]`; a run of length `l` is a square. O(L^2) overall.
pub fn find_square(terms: &[u32]) -> Option<Square> {
    let len = terms.len();
    for half_len in 1..=len / 2 {
        let mut run = 0;
        for i in 0..len - half_len {
            if terms[i] == terms[i + half_len] {
                run += 1;
                if run == half_len {
                    return Some(Square {
                        start: i + 1 - half_len,
                        half_len,
                    });
                }
            } else {
                run = 0;
            }
        }
    }
    None
}

/// Scans the ruler prefix of length `prefix_length` for squares.
pub fn check_squarefree(prefix_length: usize) -> Result<SquarefreeReport> {
    if prefix_length > MAX_SQUAREFREE_PREFIX {
        return Err(domain("check_squarefree", prefix_length, "0..=8192"));
    }
    let prefix = ruler_stream(prefix_length);
    Ok(SquarefreeReport {
        length: prefix_length,
        first_square: find_square(&prefix),
    })
}

/// Deletes every 1 and lowers the remaining terms by one. Applied to `r_n` this gives `r_{n-1}`.
pub fn strip_ones(terms: &[u32]) -> IndexSequence {
    IndexSequence::from_terms(terms.iter().filter(|&&t| t > 1).map(|&t| t - 1).collect())
}

/// Outcome of deleting the first occurrence of each distinct value from a sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FirstOccurrenceDeletion {
    pub remaining: Vec<u32>,
    /// Whether `remaining` equals the ruler prefix of the same length.
    pub matches_ruler_prefix: bool,
}

pub fn delete_first_occurrences(terms: &[u32]) -> FirstOccurrenceDeletion {
    let mut seen = std::collections::BTreeSet::new();
    let remaining: Vec<u32> = terms.iter().copied().filter(|&t| !seen.insert(t)).collect();
    let matches_ruler_prefix = RulerTerms::new().zip(&remaining).all(|(a, &b)| a == b);
    FirstOccurrenceDeletion {
        remaining,
        matches_ruler_prefix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valuation_oracle(mut n: u64) -> u32 {
        let mut k = 1;
        while n.is_multiple_of(2) {
            n /= 2;
            k += 1;
        }
        k
    }

    #[test]
    fn ruler_term_examples() {
        assert_eq!(ruler_term(1).unwrap(), 1);
        assert_eq!(ruler_term(8).unwrap(), 4);
        assert_eq!(ruler_term(12).unwrap(), 3);
        assert_eq!(ruler_term(1 << 62).unwrap(), 63);
        assert_eq!(ruler_term(u64::MAX).unwrap(), 1);
        assert!(matches!(ruler_term(0), Err(Error::Domain { .. })));
    }

    #[test]
    fn ruler_term_matches_division_oracle() {
        for n in 1..5000u64 {
            assert_eq!(ruler_term(n).unwrap(), valuation_oracle(n), "n = {n}");
        }
        assert_eq!(ruler_term(3 << 40).unwrap(), valuation_oracle(3 << 40));
    }

    #[test]
    fn recursive_examples() {
        assert_eq!(ruler_term_recursive(3).unwrap(), 1);
        assert_eq!(ruler_term_recursive(4).unwrap(), 3);
        assert_eq!(ruler_term_recursive(1 << 20).unwrap(), 21);
        assert!(ruler_term_recursive(0).is_err());
    }

    #[test]
    fn block_examples() {
        assert_eq!(ruler_block(1).unwrap(), [1]);
        assert_eq!(ruler_block(3).unwrap(), [1, 2, 1, 3, 1, 2, 1]);
        assert_eq!(
            ruler_block(4).unwrap(),
            [1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1]
        );
        assert!(ruler_block(0).is_err());
        assert!(ruler_block(25).is_err());
    }

    #[test]
    fn stream_examples() {
        assert!(ruler_stream(0).is_empty());
        assert_eq!(ruler_stream(7), [1, 2, 1, 3, 1, 2, 1]);
        assert_eq!(ruler_stream(15), ruler_block(4).unwrap());
    }

    #[test]
    fn stream_ends_at_last_position() {
        let tail: Vec<u32> = RulerTerms::starting_at(u64::MAX - 1).collect();
        assert_eq!(tail, vec![2, 1]);
    }

    #[test]
    fn half_block_examples() {
        assert_eq!(half_block(1).unwrap(), [1]);
        assert_eq!(half_block(2).unwrap(), [1, 2]);
        assert_eq!(half_block(3).unwrap(), [1, 2, 1, 3]);
        assert_eq!(half_block(4).unwrap(), [1, 2, 1, 3, 1, 2, 1, 4]);
        assert!(half_block(0).is_err());
        for n in 1..=12 {
            assert_eq!(half_block(n).unwrap(), ruler_stream(1 << (n - 1)));
        }
    }

    #[test]
    fn thomae_listing() {
        assert_eq!(thomae_exponent_sequence(1).unwrap(), [1]);
        assert_eq!(
            thomae_exponents(4).unwrap(),
            vec![-4, -3, -4, -2, -4, -3, -4, -1, -4, -3, -4, -2, -4, -3, -4]
        );
        assert_eq!(
            thomae_exponent_sequence(4).unwrap(),
            [1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1]
        );
        assert!(thomae_exponent_sequence(0).is_err());
    }

    #[test]
    fn dyadic_reduce_and_order() {
        let half = DyadicRational::reduce(4, 3).unwrap();
        assert_eq!((half.odd_numerator(), half.exponent()), (1, 1));
        assert_eq!(half.to_string(), "1/2^1");
        assert!(DyadicRational::new(2, 3).is_err());
        assert!(DyadicRational::reduce(8, 2).is_err());
        assert!(DyadicRational::new(3, 2).unwrap() > DyadicRational::new(5, 3).unwrap());
    }

    #[test]
    fn block_stats_examples() {
        assert_eq!(block_stats(1).unwrap().term_sum, 1);
        assert_eq!(block_stats(2).unwrap().term_sum, 4);
        let s3 = block_stats(3).unwrap();
        assert_eq!((s3.term_sum, s3.length, s3.max_term), (11, 7, 3));
        assert_eq!(s3.ratio, 3.0 / 7.0);
        assert!(block_stats(0).is_err());
    }

    #[test]
    fn block_sum_routes_agree() {
        for n in 1..=20 {
            let closed = (1u64 << (n + 1)) - u64::from(n) - 2;
            assert_eq!(block_sum(n).unwrap(), closed);
            assert_eq!(block_sum_unrolled(n).unwrap(), closed);
            assert_eq!(block_sum_direct(n).unwrap(), closed);
        }
        for n in 21..=62 {
            assert_eq!(block_sum(n).unwrap(), block_sum_unrolled(n).unwrap());
        }
    }

    #[test]
    fn block_sum_overflow_is_reported() {
        assert!(block_sum(63).is_ok());
        assert!(matches!(block_sum(64), Err(Error::Overflow { .. })));
        assert!(matches!(block_length(65), Err(Error::Overflow { .. })));
    }

    #[test]
    fn frequency_examples() {
        let c1 = frequency_counts(1).unwrap();
        assert_eq!(c1.into_iter().collect::<Vec<_>>(), vec![(1, 1)]);
        let c3 = frequency_counts(3).unwrap();
        assert_eq!(
            c3.into_iter().collect::<Vec<_>>(),
            vec![(1, 4), (2, 2), (3, 1)]
        );
        let c10 = frequency_counts(10).unwrap();
        let brute = ruler_block(10).unwrap().iter().filter(|&&t| t == 1).count() as u64;
        assert_eq!(c10[&1], brute);
        assert_eq!(brute, 512);
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(find_square(&[1, 2, 1]), None);
        assert_eq!(
            find_square(&[1, 2, 1, 2]),
            Some(Square {
                start: 0,
                half_len: 2
            })
        );
        assert_eq!(
            find_square(&[3, 1, 1]),
            Some(Square {
                start: 1,
                half_len: 1
            })
        );
        assert!(check_squarefree(4095).unwrap().is_squarefree());
        assert!(check_squarefree(8193).is_err());
    }

    #[test]
    fn squarefree_detector_matches_naive_scan() {
        let naive = |t: &[u32]| {
            for l in 1..=t.len() / 2 {
                for s in 0..=t.len() - 2 * l {
                    if t[s..s + l] == t[s + l..s + 2 * l] {
                        return Some(Square {
                            start: s,
                            half_len: l,
                        });
                    }
                }
            }
            None
        };
        let cases: [&[u32]; 5] = [
            &[1, 2, 3, 1, 2, 3],
            &[1, 2, 1, 3, 1, 2, 1, 3, 1],
            &[5, 4, 5, 4, 4],
            &[1, 2, 1, 3, 1, 2, 1, 4, 1, 2, 1, 3, 1, 2, 1, 4],
            &[],
        ];
        for c in cases {
            assert_eq!(find_square(c), naive(c), "{c:?}");
        }
    }

    #[test]
    fn strip_ones_recovers_previous_block() {
        for n in 2..=12 {
            assert_eq!(
                strip_ones(&ruler_block(n).unwrap()),
                ruler_block(n - 1).unwrap()
            );
        }
    }

    #[test]
    fn first_occurrence_deletion_is_diagnostic() {
        let d = delete_first_occurrences(&[1, 2, 1, 3, 1, 2, 1]);
        assert_eq!(d.remaining, vec![1, 1, 2, 1]);
        assert!(!d.matches_ruler_prefix);
    }

    #[test]
    fn index_sequence_rejects_zero() {
        assert!(IndexSequence::new(vec![1, 0]).is_err());
        assert_eq!(IndexSequence::new(vec![1, 2]).unwrap().to_string(), "[1,2]");
    }
}
