//! The logistic map `x -> r x (1 - x)`, its superstable period-2^n parameters and the
//! stationary cycles found by plain iteration.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Largest `n` for which [`superstable_r`] searches the period-2^n parameter.
pub const MAX_SUPERSTABLE_ORDER: u32 = 7;

#[inline]
pub fn logistic(r: f64, x: f64) -> f64 {
    r * x * (1.0 - x)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogisticParams {
    pub r: f64,
    pub x0: f64,
}

impl LogisticParams {
    pub fn new(r: f64, x0: f64) -> Result<Self> {
        if !(1.0..=4.0).contains(&r) {
            return Err(domain("LogisticParams::new", r, "r in [1, 4]"));
        }
        if !(x0 > 0.0 && x0 < 1.0) {
            return Err(domain("LogisticParams::new", x0, "x0 in (0, 1)"));
        }
        Ok(Self { r, x0 })
    }
}

/// Trajectory `x0, f(x0), f(f(x0)), ...` of length `steps`.
pub fn iterate(params: LogisticParams, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(domain("iterate", steps, "steps >= 1"));
    }
    let mut out = Vec::with_capacity(steps);
    let mut x = params.x0;
    out.push(x);
    for t in 1..steps {
        x = logistic(params.r, x);
        if !x.is_finite() {
            return Err(Error::Numeric {
                operation: "iterate",
                detail: format!("non-finite value at step {t} for r = {}", params.r),
            });
        }
        out.push(x);
    }
    Ok(out)
}

/// Bisection settings for the superstable parameter search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BisectionConfig {
    /// Absolute tolerance on `r`.
    pub tolerance: f64,
    pub max_iterations: u32,
}

impl Default for BisectionConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 200,
        }
    }
}

/// `f_r^(2^n)(1/2) - 1/2`; vanishes where the period-2^n cycle passes through 1/2.
fn critical_return(r: f64, n: u32) -> f64 {
    let mut x = 0.5;
    for _ in 0..1u64 << n {
        x = logistic(r, x);
    }
    x - 0.5
}

fn bisect(n: u32, mut lo: f64, mut hi: f64, config: &BisectionConfig) -> Result<f64> {
    let mut f_lo = critical_return(lo, n);
    let f_hi = critical_return(hi, n);
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Numeric {
            operation: "superstable_r",
            detail: format!(
                "no sign change for period 2^{n} on [{lo}, {hi}]: F(lo) = {f_lo:e}, F(hi) = {f_hi:e}"
            ),
        });
    }
    for _ in 0..config.max_iterations {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 2.0 * config.tolerance {
            return Ok(mid);
        }
        let f_mid = critical_return(mid, n);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Numeric {
        operation: "superstable_r",
        detail: format!(
            "bracket [{lo}, {hi}] for period 2^{n} wider than {:e} after {} iterations",
            config.tolerance, config.max_iterations
        ),
    })
}

/// Superstable parameters `R_0, ..., R_max_n`.
///
/// `R_0 = 2` exactly. `R_1` is bracketed in `[3, 3.4]`; later brackets are seeded from the
/// previous gap `d = R_{n-1} - R_{n-2}` as `[R_{n-1} + 0.15 d, R_{n-1} + 0.3 d]`, which
/// holds the next root because successive gaps shrink by a factor close to 4.67.
pub fn superstable_sequence(max_n: u32, config: &BisectionConfig) -> Result<Vec<f64>> {
    if max_n > MAX_SUPERSTABLE_ORDER {
        return Err(domain("superstable_r", max_n, "0..=7"));
    }
    let mut values = vec![2.0];
    for n in 1..=max_n {
        let (lo, hi) = match values.as_slice() {
            [_] => (3.0, 3.4),
            [.., prev2, prev] => {
                let gap = prev - prev2;
                (prev + 0.15 * gap, prev + 0.3 * gap)
            }
            [] => unreachable!(),
        };
        values.push(bisect(n, lo, hi, config)?);
    }
    Ok(values)
}

/// Parameter at which the period-2^n cycle contains the critical point 1/2.
pub fn superstable_r(n: u32) -> Result<f64> {
    Ok(*superstable_sequence(n, &BisectionConfig::default())?
        .last()
        .expect("sequence holds R_0"))
}

/// `delta_n = (R_{n-1} - R_{n-2}) / (R_n - R_{n-1})` for `n = 2..`; entry `i` is `delta_{i+2}`.
pub fn delta_estimates(values: &[f64]) -> Vec<f64> {
    values
        .windows(3)
        .map(|w| (w[1] - w[0]) / (w[2] - w[1]))
        .collect()
}

/// Extrapolates the accumulation point from the last three values, assuming their gaps
/// keep shrinking geometrically: `r_n + (r_n - r_{n-1}) / (delta_n - 1)`.
pub fn feigenbaum_accumulation(values: &[f64]) -> Result<f64> {
    if values.len() < 4 {
        return Err(domain(
            "feigenbaum_accumulation",
            values.len(),
            "at least 4 values",
        ));
    }
    if let Some(i) = values
        .windows(2)
        .position(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(domain(
            "feigenbaum_accumulation",
            format!(
                "values[{i}] = {} >= values[{}] = {}",
                values[i],
                i + 1,
                values[i + 1]
            ),
            "strictly increasing values",
        ));
    }
    let [a, b, c] = values[values.len() - 3..] else {
        unreachable!()
    };
    let delta = (b - a) / (c - b);
    if delta <= 1.0 {
        return Err(domain(
            "feigenbaum_accumulation",
            delta,
            "shrinking gaps (delta > 1)",
        ));
    }
    Ok(c + (c - b) / (delta - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitConfig {
    pub x0: f64,
    /// Iterations discarded before looking for a period.
    pub transient: usize,
    /// Maximum `|x_{t+p} - x_t|` accepted as periodic.
    pub tolerance: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        Self {
            x0: 0.3,
            transient: 10_000,
            tolerance: 1e-9,
        }
    }
}

/// One period of a stationary cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Orbit {
    pub r: f64,
    pub period: usize,
    /// Temporal order, starting from the point closest to 1/2.
    pub points: Vec<f64>,
}

impl Orbit {
    /// The cycle repeated `periods` times.
    pub fn series(&self, periods: usize) -> Vec<f64> {
        self.points
            .iter()
            .copied()
            .cycle()
            .take(self.period * periods)
            .collect()
    }
}

/// Iterates past the transient and returns the smallest period `p <= max_period` such that
/// `|x_{t+p} - x_t| < tolerance` over a window of `2 * max_period` consecutive steps.
pub fn stationary_orbit(r: f64, max_period: usize, config: &OrbitConfig) -> Result<Orbit> {
    let params = LogisticParams::new(r, config.x0)?;
    if max_period == 0 {
        return Err(domain("stationary_orbit", max_period, "max_period >= 1"));
    }
    let window = 2 * max_period;
    let trajectory = iterate(params, config.transient + window + max_period)?;
    let tail = &trajectory[config.transient..];

    let period = (1..=max_period)
        .find(|&p| (0..window).all(|t| (tail[t + p] - tail[t]).abs() < config.tolerance))
        .ok_or(Error::PeriodNotFound {
            r,
            max_period,
            tolerance: config.tolerance,
        })?;

    let cycle = &tail[..period];
    let start = cycle
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    let points = cycle[start..]
        .iter()
        .chain(&cycle[..start])
        .copied()
        .collect();
    Ok(Orbit { r, period, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iterate_examples() {
        let fixed = iterate(LogisticParams::new(2.0, 0.5).unwrap(), 50).unwrap();
        assert!(fixed.iter().all(|&x| x == 0.5));

        let full = iterate(LogisticParams::new(4.0, 0.5).unwrap(), 3).unwrap();
        assert_eq!(full, vec![0.5, 1.0, 0.0]);

        let two = iterate(LogisticParams::new(3.2, 0.3).unwrap(), 10_000).unwrap();
        let n = two.len();
        assert!((two[n - 1] - two[n - 3]).abs() < 1e-12);
        assert!((two[n - 1] - two[n - 2]).abs() > 0.1);

        assert!(iterate(LogisticParams::new(2.0, 0.5).unwrap(), 0).is_err());
        assert!(LogisticParams::new(4.5, 0.5).is_err());
        assert!(LogisticParams::new(3.0, 1.0).is_err());
    }

    #[test]
    fn superstable_examples() {
        assert_eq!(superstable_r(0).unwrap(), 2.0);
        let r1 = superstable_r(1).unwrap();
        assert!((r1 - (1.0 + 5f64.sqrt())).abs() < 1e-10, "{r1}");
        let r5 = superstable_r(5).unwrap();
        assert!(r5 > 3.568 && r5 < 3.5699, "{r5}");
        assert!(superstable_r(8).is_err());
    }

    #[test]
    fn superstable_cycles_hit_one_half() {
        let values = superstable_sequence(6, &BisectionConfig::default()).unwrap();
        for (n, &r) in values.iter().enumerate() {
            assert!(critical_return(r, n as u32).abs() < 1e-8, "n = {n}");
        }
    }

    #[test]
    fn bracket_failure_is_diagnosed() {
        let err = bisect(1, 3.3, 3.4, &BisectionConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Numeric { .. }));
        assert!(err.to_string().contains("no sign change"));
    }

    #[test]
    fn accumulation_of_geometric_input() {
        let v = [0.0, 1.0, 1.5, 1.75];
        assert_eq!(feigenbaum_accumulation(&v).unwrap(), 2.0);
        assert_eq!(delta_estimates(&v), vec![2.0, 2.0]);
        assert!(feigenbaum_accumulation(&[0.0, 1.0, 0.5, 2.0]).is_err());
        assert!(feigenbaum_accumulation(&[0.0, 1.0, 1.5]).is_err());
    }

    #[test]
    fn accumulation_from_superstable_values() {
        let v = superstable_sequence(5, &BisectionConfig::default()).unwrap();
        let r_inf = feigenbaum_accumulation(&v).unwrap();
        assert!(r_inf > 3.5699 && r_inf < 3.57, "{r_inf}");
    }

    #[test]
    fn orbit_examples() {
        let cfg = OrbitConfig::default();
        let fixed = stationary_orbit(2.0, 8, &cfg).unwrap();
        assert_eq!(fixed.period, 1);
        assert!((fixed.points[0] - 0.5).abs() < 1e-12);

        assert_eq!(stationary_orbit(3.2, 8, &cfg).unwrap().period, 2);

        let r3 = superstable_r(3).unwrap();
        let eight = stationary_orbit(r3, 64, &cfg).unwrap();
        assert_eq!(eight.period, 8);
        assert!((eight.points[0] - 0.5).abs() < 1e-6);

        assert!(matches!(
            stationary_orbit(3.9, 16, &cfg),
            Err(Error::PeriodNotFound { .. })
        ));
    }
}
