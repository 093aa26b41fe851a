//! Forward horizontal visibility: points `i < j` see each other when every value strictly
//! between them is below `min(x_i, x_j)`. The forward degree of `i` counts the `j > i` it sees.

use std::ops::Range;

use serde::Serialize;

use super::logistic::{stationary_orbit, Orbit, OrbitConfig};
use crate::error::{domain, Error, Result};
use crate::ruler::{half_block, ruler_block};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VisibilityPattern {
    pub degrees: Vec<u32>,
}

impl VisibilityPattern {
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }
}

/// Forward degree of point `i`, or `None` if no later point is as high as `x_i`, in which
/// case points past the end of the series could still be visible.
///
/// Scanning stops at the first `x_j >= x_i`: it is visible and blocks everything after it.
/// Before that, `j` is visible exactly when `x_j` exceeds every value between `i` and `j`.
pub fn forward_degree(series: &[f64], i: usize) -> Option<u32> {
    let xi = series[i];
    let mut highest = f64::NEG_INFINITY;
    let mut degree = 0;
    for &xj in &series[i + 1..] {
        if xj > highest {
            degree += 1;
            highest = xj;
        }
        if xj >= xi {
            return Some(degree);
        }
    }
    None
}

/// Indices `j > i` visible from `i` within the series.
pub fn forward_links(series: &[f64], i: usize) -> Vec<usize> {
    let xi = series[i];
    let mut highest = f64::NEG_INFINITY;
    let mut links = Vec::new();
    for (j, &xj) in series.iter().enumerate().skip(i + 1) {
        if xj > highest {
            links.push(j);
            highest = xj;
        }
        if xj >= xi {
            break;
        }
    }
    links
}

/// Forward degrees for the points in `window`.
///
/// Every window point must meet a later point at least as high inside the series; then no
/// extension of the series can change its degree. Otherwise [`Error::NotStabilized`].
pub fn forward_visibility(series: &[f64], window: Range<usize>) -> Result<VisibilityPattern> {
    if window.end > series.len() || window.start > window.end {
        return Err(domain(
            "forward_visibility",
            format!("{window:?}"),
            "window inside the series",
        ));
    }
    let degrees = window
        .map(|i| {
            forward_degree(series, i).ok_or(Error::NotStabilized {
                index: i,
                len: series.len(),
            })
        })
        .collect::<Result<_>>()?;
    Ok(VisibilityPattern { degrees })
}

/// Direct pairwise check of the visibility criterion, O(L^3). Degrees are counted within the
/// series only, with no stabilization requirement.
pub fn forward_visibility_brute_force(series: &[f64]) -> Vec<u32> {
    let n = series.len();
    (0..n)
        .map(|i| {
            (i + 1..n)
                .filter(|&j| {
                    let floor = series[i].min(series[j]);
                    series[i + 1..j].iter().all(|&x| x < floor)
                })
                .count() as u32
        })
        .collect()
}

/// Forward visibility over one interior period of a cycle repeated `periods` times.
///
/// The second period is measured; the result is recomputed on a series one period longer
/// and the two must agree.
pub fn orbit_visibility(orbit: &Orbit, periods: usize) -> Result<VisibilityPattern> {
    if periods < 3 {
        return Err(domain("orbit_visibility", periods, "periods >= 3"));
    }
    let p = orbit.period;
    let window = p..2 * p;
    let pattern = forward_visibility(&orbit.series(periods), window.clone())?;
    let extended = forward_visibility(&orbit.series(periods + 1), window)?;
    if pattern != extended {
        return Err(Error::NotStabilized {
            index: p,
            len: periods * p,
        });
    }
    Ok(pattern)
}

/// Pattern built literally from `P_n = 2(n+1), 2, P_1, P_2, ..., P_{n-1}`.
pub fn pattern_recurrence(n: u32) -> Result<VisibilityPattern> {
    if n == 0 || n > 24 {
        return Err(domain("pattern_recurrence", n, "1..=24"));
    }
    let mut patterns: Vec<Vec<u32>> = Vec::with_capacity(n as usize);
    for k in 1..=n {
        let mut p = vec![2 * (k + 1), 2];
        for earlier in &patterns {
            p.extend_from_slice(earlier);
        }
        patterns.push(p);
    }
    Ok(VisibilityPattern {
        degrees: patterns.pop().expect("n >= 1"),
    })
}

/// Smallest `s` with `a` rotated left by `s` equal to `b`.
pub fn rotation_offset(a: &[u32], b: &[u32]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0);
    }
    (0..a.len()).find(|&s| a[s..].iter().chain(&a[..s]).eq(b.iter()))
}

fn sorted(v: &[u32]) -> Vec<u32> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Measured forward visibility of the superstable period-2^n orbit set against the readings
/// of how it relates to the ruler sequence. Nothing here is asserted; each reading is a flag.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatternComparison {
    pub n: u32,
    pub period: usize,
    pub r: f64,
    /// Orbit order, starting from the point nearest 1/2.
    pub measured: Vec<u32>,
    /// `h_{n+1} = r_n ++ [n+1]`, the half construction of the same length.
    pub half_block: Vec<u32>,
    pub multiset_matches_half_block: bool,
    /// Left rotation taking `measured` to `half_block`, if any.
    pub rotation_to_half_block: Option<usize>,
    /// Rotation with the maximum degree last, with that term removed, equals `r_n`.
    pub block_after_removing_max: bool,
    /// `P_n` built by [`pattern_recurrence`].
    pub recurrence: Vec<u32>,
    pub measured_equals_recurrence: bool,
    /// Left rotation taking `2 * measured` to `P_n`, if any.
    pub doubled_rotation_to_recurrence: Option<usize>,
}

pub fn compare_with_ruler(n: u32, r: f64, config: &OrbitConfig) -> Result<PatternComparison> {
    let period = 1usize << n;
    let orbit = stationary_orbit(r, period, config)?;
    if orbit.period != period {
        return Err(Error::Mismatch {
            identity: "superstable orbit period",
            detail: format!("expected {period}, detected {}", orbit.period),
        });
    }
    let measured = orbit_visibility(&orbit, 4)?.degrees;
    let half = half_block(n + 1)?.into_vec();
    let recurrence = pattern_recurrence(n)?.degrees;
    let doubled: Vec<u32> = measured.iter().map(|d| 2 * d).collect();

    let block_after_removing_max = {
        let max_pos = measured
            .iter()
            .enumerate()
            .max_by_key(|&(i, d)| (d, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let rotated: Vec<u32> = measured[max_pos + 1..]
            .iter()
            .chain(&measured[..max_pos])
            .copied()
            .collect();
        n >= 1 && rotated == ruler_block(n)?.into_vec()
    };

    Ok(PatternComparison {
        n,
        period,
        r,
        multiset_matches_half_block: sorted(&measured) == sorted(&half),
        rotation_to_half_block: rotation_offset(&measured, &half),
        block_after_removing_max,
        measured_equals_recurrence: measured == recurrence,
        doubled_rotation_to_recurrence: rotation_offset(&doubled, &recurrence),
        measured,
        half_block: half,
        recurrence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::logistic::superstable_r;

    #[test]
    fn monotone_series() {
        let s = [1.0, 2.0, 3.0];
        assert_eq!(forward_visibility(&s, 0..2).unwrap().degrees, vec![1, 1]);
        assert!(matches!(
            forward_visibility(&s, 0..3),
            Err(Error::NotStabilized { index: 2, len: 3 })
        ));
        assert!(forward_visibility(&s, 0..4).is_err());
    }

    #[test]
    fn two_cycle_brute_force() {
        let (low, high) = (0.5, 0.8);
        let series: Vec<f64> = [low, high].iter().copied().cycle().take(8).collect();
        let brute = forward_visibility_brute_force(&series);
        let fast = forward_visibility(&series, 2..4).unwrap().degrees;
        assert_eq!(fast, vec![1, 2]);
        assert_eq!(fast, brute[2..4].to_vec());
    }

    #[test]
    fn ties_block() {
        let s = [1.0, 0.2, 1.0, 0.5, 1.0];
        assert_eq!(forward_visibility_brute_force(&s), vec![2, 1, 2, 1, 0]);
        assert_eq!(
            forward_visibility(&s, 0..4).unwrap().degrees,
            vec![2, 1, 2, 1]
        );
    }

    #[test]
    fn recurrence_literal_expansion() {
        assert_eq!(pattern_recurrence(1).unwrap().degrees, vec![4, 2]);
        assert_eq!(pattern_recurrence(2).unwrap().degrees, vec![6, 2, 4, 2]);
        assert_eq!(
            pattern_recurrence(3).unwrap().degrees,
            vec![8, 2, 4, 2, 6, 2, 4, 2]
        );
        for n in 1..=10 {
            assert_eq!(pattern_recurrence(n).unwrap().len(), 1 << n);
        }
    }

    #[test]
    fn rotations() {
        assert_eq!(rotation_offset(&[1, 3, 1, 2], &[1, 2, 1, 3]), Some(2));
        assert_eq!(rotation_offset(&[1, 2], &[1, 2]), Some(0));
        assert_eq!(rotation_offset(&[1, 2], &[1, 1]), None);
        assert_eq!(rotation_offset(&[1], &[1, 1]), None);
    }

    #[test]
    fn period_eight_orbit() {
        let r = superstable_r(3).unwrap();
        let cmp = compare_with_ruler(3, r, &OrbitConfig::default()).unwrap();
        assert_eq!(cmp.period, 8);
        assert!(cmp.multiset_matches_half_block);
        assert!(cmp.measured.iter().all(|&d| d > 0));
    }
}
