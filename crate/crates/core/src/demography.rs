//! Population size and age structure of the duplication automaton read as a demographic
//! model: each individual has two offspring exactly once, one step after its own birth.
//!
//! Without deaths the population is `2^n - 1` and the age census is geometric,
//! `2^(n-k)` individuals of age `k`. With a finite lifespan individuals older than the
//! lifespan are removed at the end of each step.

use serde::Serialize;

use crate::automaton::{self, Interval, Placement};
use crate::error::{domain, Error, Result};

/// Largest step for the population recurrences (`N(62) = 2^62 - 1`).
pub const MAX_RECURRENCE_STEP: u32 = 62;

/// Largest step for censuses and age-array simulations.
pub const MAX_CENSUS_STEP: u32 = 24;

/// Largest step for the census tallied from the positional automaton.
pub const MAX_AUTOMATON_CENSUS_STEP: u32 = 20;

/// Lifespan of the three-stage mortal model (fertility, maturity, senescence).
pub const THREE_STAGE_LIFESPAN: u32 = 3;

fn check_recurrence_step(operation: &'static str, n: u32) -> Result<()> {
    if n == 0 || n > MAX_RECURRENCE_STEP {
        return Err(domain(operation, n, "1..=62"));
    }
    Ok(())
}

fn overflow(operation: &'static str, n: u32) -> Error {
    Error::Overflow {
        operation,
        n: n.into(),
    }
}

/// Iterates a two-term recurrence from `N(1) = 1, N(2) = 3`.
fn second_order(
    operation: &'static str,
    n: u32,
    next: impl Fn(u64, u64) -> Option<u64>,
) -> Result<u64> {
    check_recurrence_step(operation, n)?;
    let (mut prev, mut cur) = (1u64, 3u64);
    if n == 1 {
        return Ok(prev);
    }
    for _ in 2..n {
        let following = next(prev, cur).ok_or_else(|| overflow(operation, n))?;
        prev = cur;
        cur = following;
    }
    Ok(cur)
}

/// `N(n+2) = 3 N(n+1) - 2 N(n)`.
pub fn population_linear(n: u32) -> Result<u64> {
    second_order("population_linear", n, |prev, cur| {
        cur.checked_mul(3)?.checked_sub(prev.checked_mul(2)?)
    })
}

/// `N(n+2) = 2 (N(n+1) - N(n)) + N(n+1)`: the `N(n+1) - N(n)` newborns of the last step each
/// have two offspring and the whole population of step `n+1` survives.
pub fn population_duplication(n: u32) -> Result<u64> {
    second_order("population_duplication", n, |prev, cur| {
        cur.checked_sub(prev)?.checked_mul(2)?.checked_add(cur)
    })
}

/// Tower of Hanoi move count, `N(n+1) = 2 N(n) + 1`, `N(1) = 1`.
pub fn hanoi_moves(n: u32) -> Result<u64> {
    check_recurrence_step("hanoi_moves", n)?;
    (1..n).try_fold(1u64, |moves, _| {
        moves
            .checked_mul(2)
            .and_then(|m| m.checked_add(1))
            .ok_or_else(|| overflow("hanoi_moves", n))
    })
}

/// Individuals born at step `n + 1`, `2^n`.
pub fn newborns(n: u32) -> Result<u64> {
    if n == 0 {
        return Err(domain("newborns", n, "n >= 1"));
    }
    1u64.checked_shl(n).ok_or_else(|| overflow("newborns", n))
}

/// Population of the three-stage mortal model: `2^n - 1` for `n <= 2`, `7 * 2^(n-3)` after.
pub fn population_with_death(n: u32) -> Result<u64> {
    match n {
        0 => Err(domain("population_with_death", n, "n >= 1")),
        1 | 2 => Ok((1u64 << n) - 1),
        _ => 1u64
            .checked_shl(n - 3)
            .and_then(|p| p.checked_mul(7))
            .ok_or_else(|| overflow("population_with_death", n)),
    }
}

/// Head count per age class at a given step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgeCensus {
    pub step: u32,
    /// `counts[k - 1]` is the number of individuals of age `k`.
    pub counts: Vec<u64>,
    pub total: u64,
}

impl AgeCensus {
    fn from_counts(step: u32, counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self {
            step,
            counts,
            total,
        }
    }

    fn tally(step: u32, ages: impl IntoIterator<Item = u32>) -> Self {
        let mut counts = Vec::new();
        for age in ages {
            let k = age as usize;
            if counts.len() < k {
                counts.resize(k, 0);
            }
            counts[k - 1] += 1;
        }
        Self::from_counts(step, counts)
    }

    pub fn count(&self, age: u32) -> u64 {
        age.checked_sub(1)
            .and_then(|i| self.counts.get(i as usize))
            .copied()
            .unwrap_or(0)
    }

    /// Fraction of the living population with the given age.
    pub fn proportion(&self, age: u32) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.count(age) as f64 / self.total as f64
    }

    /// `count(age) / 2^step`; for the immortal model this is exactly `2^-age`.
    pub fn relative_frequency(&self, age: u32) -> f64 {
        self.count(age) as f64 * (-(self.step as f64)).exp2()
    }

    /// Ages with a nonzero count, youngest first.
    pub fn ages(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, _)| i as u32 + 1)
    }
}

/// Closed-form census of the immortal model, `2^(n-k)` individuals of age `k`.
pub fn census(n: u32) -> Result<AgeCensus> {
    if n == 0 || n > MAX_CENSUS_STEP {
        return Err(domain("census", n, "1..=24"));
    }
    let counts = (1..=n).map(|k| 1u64 << (n - k)).collect();
    Ok(AgeCensus::from_counts(n, counts))
}

/// Census tallied from the positional automaton with midpoint placement.
pub fn census_from_automaton(n: u32) -> Result<AgeCensus> {
    if n == 0 || n > MAX_AUTOMATON_CENSUS_STEP {
        return Err(domain("census_from_automaton", n, "1..=20"));
    }
    let partition = automaton::run(Interval::unit(), 0.5, n, &mut Placement::Midpoint)?;
    Ok(AgeCensus::tally(
        n,
        partition.points.iter().map(|pt| pt.age),
    ))
}

/// Ages along the one-dimensional array after `n` steps.
///
/// Each age-1 individual places a newborn on either side, every existing individual ages by
/// one, and anyone older than `lifespan` is removed at the end of the step. Reproduction
/// always happens before death, so a lifespan of 1 still lets each individual reproduce.
pub fn simulate_ages(n: u32, lifespan: Option<u32>) -> Result<Vec<u32>> {
    if n == 0 || n > MAX_CENSUS_STEP {
        return Err(domain("simulate_ages", n, "1..=24"));
    }
    if lifespan == Some(0) {
        return Err(domain("simulate_ages", 0, "lifespan >= 1"));
    }
    let limit = lifespan.unwrap_or(u32::MAX);
    let mut ages = vec![1u32];
    for _ in 1..n {
        let mut next = Vec::with_capacity(2 * ages.len() + 1);
        for &age in &ages {
            let fertile = age == 1;
            if fertile {
                next.push(1);
            }
            if age < limit {
                next.push(age + 1);
            }
            if fertile {
                next.push(1);
            }
        }
        ages = next;
    }
    Ok(ages)
}

/// Census of the mortal model, simulated on the array.
pub fn census_with_death(n: u32, lifespan: u32) -> Result<AgeCensus> {
    Ok(AgeCensus::tally(n, simulate_ages(n, Some(lifespan))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_examples() {
        assert_eq!(population_linear(1).unwrap(), 1);
        assert_eq!(population_linear(2).unwrap(), 3);
        assert_eq!(population_linear(5).unwrap(), 31);
        assert!(population_linear(0).is_err());
        assert!(population_linear(63).is_err());
    }

    #[test]
    fn duplication_examples() {
        assert_eq!(population_duplication(2).unwrap(), 3);
        assert_eq!(population_duplication(3).unwrap(), 7);
        assert_eq!(population_duplication(10).unwrap(), 1023);
    }

    #[test]
    fn hanoi_examples() {
        assert_eq!(hanoi_moves(1).unwrap(), 1);
        assert_eq!(hanoi_moves(3).unwrap(), 7);
        assert_eq!(hanoi_moves(8).unwrap(), 255);
    }

    #[test]
    fn recurrences_agree_to_cap() {
        for n in 1..=MAX_RECURRENCE_STEP {
            let closed = (1u64 << n) - 1;
            assert_eq!(population_linear(n).unwrap(), closed, "n = {n}");
            assert_eq!(population_duplication(n).unwrap(), closed, "n = {n}");
            assert_eq!(hanoi_moves(n).unwrap(), closed, "n = {n}");
        }
    }

    #[test]
    fn newborns_are_population_differences() {
        assert_eq!(newborns(1).unwrap(), 2);
        assert_eq!(newborns(4).unwrap(), 16);
        assert_eq!(newborns(10).unwrap(), 1024);
        for n in 1..MAX_RECURRENCE_STEP {
            let diff = population_linear(n + 1).unwrap() - population_linear(n).unwrap();
            assert_eq!(newborns(n).unwrap(), diff);
        }
        assert!(newborns(64).is_err());
    }

    #[test]
    fn death_model_values() {
        let values: Vec<u64> = (1..=6).map(|n| population_with_death(n).unwrap()).collect();
        assert_eq!(values, vec![1, 3, 7, 14, 28, 56]);
        assert_eq!(population_with_death(64).unwrap(), 7 << 61);
        assert!(population_with_death(65).is_err());
        for n in 3..60 {
            assert_eq!(
                population_with_death(n + 1).unwrap(),
                2 * population_with_death(n).unwrap()
            );
        }
    }

    #[test]
    fn census_examples() {
        let c1 = census(1).unwrap();
        assert_eq!((c1.counts.clone(), c1.total), (vec![1], 1));
        let c3 = census(3).unwrap();
        assert_eq!(c3.counts, vec![4, 2, 1]);
        assert_eq!(c3.relative_frequency(1), 0.5);
        assert_eq!(c3.relative_frequency(3), 0.125);
        let c20 = census(20).unwrap();
        assert!((c20.proportion(2) - 0.25).abs() <= (-19f64).exp2());
        assert_eq!(c20.total, population_linear(20).unwrap());
    }

    #[test]
    fn census_matches_automaton_tally() {
        for n in 1..=14 {
            assert_eq!(
                census_from_automaton(n).unwrap(),
                census(n).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn immortal_array_matches_block() {
        for n in 1..=12 {
            let ages = simulate_ages(n, None).unwrap();
            assert_eq!(ages, crate::ruler::ruler_block(n).unwrap().into_vec());
        }
    }

    #[test]
    fn death_census_examples() {
        assert_eq!(census_with_death(2, 3).unwrap().total, 3);
        assert_eq!(census_with_death(4, 3).unwrap().total, 14);
        let c5 = census_with_death(5, 3).unwrap();
        assert!(c5.ages().all(|a| (1..=3).contains(&a)));
        assert_eq!(c5.counts, vec![16, 8, 4]);
        assert!(census_with_death(3, 0).is_err());
    }

    #[test]
    fn death_census_matches_closed_form() {
        for n in 1..=18 {
            assert_eq!(
                census_with_death(n, THREE_STAGE_LIFESPAN).unwrap().total,
                population_with_death(n).unwrap(),
                "n = {n}"
            );
        }
    }
}
