//! Cross-checks between independent constructions, run by `rulerlab verify`.

use std::fmt::Display;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::report::{Diagnostic, Verdict};
use crate::automaton::{self, age_sequence, Interval, Placement};
use crate::cantor::{self, cantor_level, remaining_length, removed_length};
use crate::demography::{
    census, census_from_automaton, census_with_death, hanoi_moves, newborns,
    population_duplication, population_linear, population_with_death, MAX_RECURRENCE_STEP,
    THREE_STAGE_LIFESPAN,
};
use crate::dynamics::visibility::forward_degree;
use crate::dynamics::{
    compare_with_ruler, feigenbaum_accumulation, forward_visibility_brute_force, stationary_orbit,
    superstable_sequence, BisectionConfig, OrbitConfig,
};
use crate::error::{domain, Error};
use crate::polygon::{self, generation, jittered_generation, jittered_index_sequence};
use crate::ruler::{
    block_length, block_sum, block_sum_direct, block_sum_unrolled, check_squarefree,
    delete_first_occurrences, frequency_counts, half_block, ruler_block, ruler_stream, ruler_term,
    ruler_term_recursive, strip_ones, thomae_exponent_sequence, MAX_BLOCK_ORDER,
    MAX_SQUAREFREE_PREFIX,
};

/// Largest `max_n` accepted by [`verify`].
pub const MAX_VERIFY_ORDER: u32 = MAX_BLOCK_ORDER;

const REFLECTION_SAMPLES: u64 = 512;
const RANDOM_SERIES: usize = 50;
const RANDOM_SERIES_MAX_LEN: usize = 120;
const ORBIT_MAX_ORDER: u32 = 6;

enum Failure {
    Library(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Library(e)
    }
}

type Outcome = std::result::Result<String, Failure>;

fn ensure(ok: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(detail()))
    }
}

fn mismatch(what: impl Display, got: impl Display, want: impl Display) -> String {
    format!("{what}: got {got}, expected {want}")
}

#[derive(Default)]
struct Suite {
    verdicts: Vec<Verdict>,
}

impl Suite {
    fn check(&mut self, identity: &str, scope: impl Into<String>, f: impl FnOnce() -> Outcome) {
        let (passed, detail) = match f() {
            Ok(detail) => (true, detail),
            Err(Failure::Check(detail)) => (false, detail),
            Err(Failure::Library(e)) => (false, e.to_string()),
        };
        self.verdicts.push(Verdict {
            identity: identity.to_string(),
            scope: scope.into(),
            passed,
            detail,
        });
    }
}

/// Every order from 1 to `m` must satisfy `same(n)`.
fn for_orders(m: u32, mut same: impl FnMut(u32) -> std::result::Result<(), Failure>) -> Outcome {
    for n in 1..=m {
        same(n)?;
    }
    Ok(format!("{m} orders"))
}

fn equals_block(m: u32, build: impl Fn(u32) -> crate::Result<crate::IndexSequence>) -> Outcome {
    for_orders(m, |n| {
        let got = build(n)?;
        let want = ruler_block(n)?;
        ensure(got == want, || format!("n = {n}: {got} != {want}"))
    })
}

/// Runs the suite for orders up to `max_n`; `seed` drives every randomized placement and
/// sample. Verdicts decide the exit status; diagnostics are informational.
pub fn verify(max_n: u32, seed: u64) -> crate::Result<(Vec<Verdict>, Vec<Diagnostic>)> {
    if max_n == 0 || max_n > MAX_VERIFY_ORDER {
        return Err(domain("verify", max_n, "1..=24"));
    }
    let m = max_n;
    let upto = |cap: u32| m.min(cap);
    let mut s = Suite::default();

    // ruler sequence
    let positions = (1u64 << m) - 1;
    s.check(
        "recursive halving = 2-adic valuation",
        format!("k <= {positions}"),
        || {
            for k in 1..=positions {
                let (rec, closed) = (ruler_term_recursive(k)?, ruler_term(k)?);
                ensure(rec == closed, || mismatch(format!("a({k})"), rec, closed))?;
            }
            Ok(format!("{positions} terms"))
        },
    );
    s.check(
        "a(2k) = a(k) + 1 and a(2k - 1) = 1",
        format!("2k <= {}", positions + 1),
        || {
            for k in 1..=positions.div_ceil(2) {
                ensure(ruler_term(2 * k - 1)? == 1, || {
                    format!("a({}) != 1", 2 * k - 1)
                })?;
                if 2 * k <= positions {
                    let (a2k, ak) = (ruler_term(2 * k)?, ruler_term(k)?);
                    ensure(a2k == ak + 1, || {
                        mismatch(format!("a({})", 2 * k), a2k, ak + 1)
                    })?;
                }
            }
            Ok(format!("{} pairs", positions.div_ceil(2)))
        },
    );
    s.check(
        "a(2^j + k) = a(2^j - k) and a(2^j) = j + 1",
        format!(
            "j <= {}, up to {REFLECTION_SAMPLES} sampled k per j, seed {seed}",
            upto(20)
        ),
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut pairs = 0u64;
            for j in 1..=upto(20) {
                let top = 1u64 << j;
                let peak = ruler_term(top)?;
                ensure(peak == j + 1, || mismatch(format!("a(2^{j})"), peak, j + 1))?;
                let ks: Vec<u64> = if top - 1 <= REFLECTION_SAMPLES {
                    (1..top).collect()
                } else {
                    (0..REFLECTION_SAMPLES)
                        .map(|_| rng.gen_range(1..top))
                        .collect()
                };
                for k in ks {
                    let (up, down) = (ruler_term(top + k)?, ruler_term(top - k)?);
                    ensure(up == down, || format!("j = {j}, k = {k}: {up} != {down}"))?;
                    pairs += 1;
                }
            }
            Ok(format!("{pairs} pairs"))
        },
    );
    s.check("stream = block doubling", format!("n <= {m}"), || {
        equals_block(m, |n| Ok(ruler_stream(((1u64 << n) - 1) as usize)))
    });
    s.check(
        "half block = ruler prefix of length 2^(n-1)",
        format!("n <= {m}"),
        || {
            for_orders(m, |n| {
                let half = half_block(n)?;
                let prefix = ruler_stream(1 << (n - 1));
                ensure(half == prefix, || format!("n = {n}: {half} != {prefix}"))
            })
        },
    );
    s.check("Thomae height order = block", format!("n <= {m}"), || {
        equals_block(m, thomae_exponent_sequence)
    });
    s.check(
        "frequency of k in r_n = 2^(n-k)",
        format!("n <= {m}"),
        || {
            for_orders(m, |n| {
                let counts = frequency_counts(n)?;
                ensure(counts.len() == n as usize, || {
                    format!("n = {n}: {} distinct terms", counts.len())
                })?;
                for (&k, &c) in &counts {
                    ensure(k <= n && c == 1 << (n - k), || {
                        mismatch(
                            format!("n = {n}, count of {k}"),
                            c,
                            1u64 << n.saturating_sub(k),
                        )
                    })?;
                }
                Ok(())
            })
        },
    );
    s.check(
        "block length 2^n - 1 with maximum n",
        format!("n <= {m}"),
        || {
            for_orders(m, |n| {
                let block = ruler_block(n)?;
                let len = block_length(n)?;
                ensure(block.len() as u64 == len && len == (1 << n) - 1, || {
                    mismatch(format!("n = {n}, length"), block.len(), len)
                })?;
                ensure(block.max_term() == Some(n), || {
                    format!("n = {n}: maximum {:?}", block.max_term())
                })
            })
        },
    );
    s.check(
        "block sum: recurrence = unrolled = 2^(n+1) - n - 2",
        "n <= 62",
        || {
            for n in 1..=62u32 {
                let closed = (1u64 << (n + 1)) - u64::from(n) - 2;
                let (rec, unrolled) = (block_sum(n)?, block_sum_unrolled(n)?);
                ensure(rec == closed && unrolled == closed, || {
                    format!("n = {n}: {rec}, {unrolled}, {closed}")
                })?;
            }
            Ok("62 orders".into())
        },
    );
    s.check(
        "block sum = sum of block terms",
        format!("n <= {m}"),
        || {
            for_orders(m, |n| {
                let (direct, rec) = (block_sum_direct(n)?, block_sum(n)?);
                ensure(direct == rec, || mismatch(format!("n = {n}"), direct, rec))
            })
        },
    );
    s.check(
        "removing 1s and lowering r_n gives r_(n-1)",
        format!("2 <= n <= {m}"),
        || {
            for n in 2..=m {
                let stripped = strip_ones(&ruler_block(n)?);
                let want = ruler_block(n - 1)?;
                ensure(stripped == want, || {
                    format!("n = {n}: {stripped} != {want}")
                })?;
            }
            Ok(format!("{} orders", m - 1))
        },
    );
    let sq_len = (1usize << m).min(MAX_SQUAREFREE_PREFIX);
    s.check(
        "ruler prefix is squarefree",
        format!("length {sq_len}"),
        || {
            let report = check_squarefree(sq_len)?;
            ensure(report.is_squarefree(), || {
                format!("square at {:?}", report.first_square)
            })?;
            Ok(format!("{sq_len} terms"))
        },
    );

    // interval automaton
    s.check(
        "automaton ages, midpoint on [0, 1] = block",
        format!("n <= {}", upto(automaton::MAX_STEPS)),
        || {
            equals_block(upto(automaton::MAX_STEPS), |n| {
                let p = automaton::run(Interval::unit(), 0.5, n, &mut Placement::Midpoint)?;
                Ok(age_sequence(&p))
            })
        },
    );
    s.check(
        "automaton ages, jittered on the real line = block",
        format!("n <= {}, seed {seed}", upto(automaton::MAX_STEPS)),
        || {
            let p = automaton::run(
                Interval::real_line(),
                0.0,
                upto(automaton::MAX_STEPS),
                &mut Placement::jitter(seed),
            )?;
            p.check_order()?;
            let n = p.step;
            let (got, want) = (age_sequence(&p), ruler_block(n)?);
            ensure(got == want, || format!("n = {n}: ages differ"))?;
            Ok(format!("{} points", p.len()))
        },
    );

    // demography
    s.check(
        "N(n): linear = duplication = Hanoi = 2^n - 1",
        "n <= 62",
        || {
            for n in 1..=MAX_RECURRENCE_STEP {
                let closed = (1u64 << n) - 1;
                let routes = [
                    population_linear(n)?,
                    population_duplication(n)?,
                    hanoi_moves(n)?,
                ];
                ensure(routes.iter().all(|&v| v == closed), || {
                    format!("n = {n}: {routes:?} vs {closed}")
                })?;
            }
            Ok("62 steps".into())
        },
    );
    s.check("newborns = N(n+1) - N(n)", "n <= 61", || {
        for n in 1..MAX_RECURRENCE_STEP {
            let diff = population_linear(n + 1)? - population_linear(n)?;
            let born = newborns(n)?;
            ensure(born == diff, || mismatch(format!("n = {n}"), born, diff))?;
        }
        Ok("61 steps".into())
    });
    s.check(
        "simulated population with lifespan 3 = closed form",
        format!("n <= {}", upto(crate::demography::MAX_CENSUS_STEP)),
        || {
            for_orders(upto(crate::demography::MAX_CENSUS_STEP), |n| {
                let total = census_with_death(n, THREE_STAGE_LIFESPAN)?.total;
                let closed = population_with_death(n)?;
                ensure(total == closed, || {
                    mismatch(format!("n = {n}"), total, closed)
                })
            })
        },
    );
    s.check(
        "age census: closed form = automaton tally",
        format!(
            "n <= {}",
            upto(crate::demography::MAX_AUTOMATON_CENSUS_STEP)
        ),
        || {
            for_orders(upto(crate::demography::MAX_AUTOMATON_CENSUS_STEP), |n| {
                let (closed, tally) = (census(n)?, census_from_automaton(n)?);
                ensure(closed == tally, || {
                    format!("n = {n}: {:?} != {:?}", closed.counts, tally.counts)
                })
            })
        },
    );

    // Cantor set
    let cantor_max = upto(cantor::MAX_LEVEL);
    s.check(
        "Cantor middle-interval indices = block",
        format!("n <= {cantor_max}"),
        || {
            equals_block(cantor_max, |n| {
                Ok(cantor::index_sequence(&cantor_level(n)?))
            })
        },
    );
    s.check(
        "removed length: summed widths = series, and 1 - L_n = (2/3)^n",
        format!("n <= {cantor_max}"),
        || {
            for_orders(cantor_max, |n| {
                let removed = removed_length(n)?;
                let sum = &removed + remaining_length(n);
                ensure(sum == Ratio::<BigUint>::one(), || {
                    format!("n = {n}: L_n + (2/3)^n = {sum}")
                })
            })
        },
    );

    // polygons
    let polygon_max = upto(polygon::MAX_GENERATION);
    s.check(
        "vertex index: valuation = membership = block",
        format!("n <= {polygon_max}"),
        || {
            equals_block(polygon_max, |n| {
                polygon::vertex_index_sequence(&generation(n)?)
            })
        },
    );
    s.check(
        "jittered polygon generations survived = block",
        format!("n <= {polygon_max}, seed {seed}"),
        || {
            equals_block(polygon_max, |n| {
                jittered_index_sequence(&jittered_generation(n, seed)?, n)
            })
        },
    );

    // logistic map and visibility
    let superstable_max = upto(crate::dynamics::logistic::MAX_SUPERSTABLE_ORDER);
    let superstable = superstable_sequence(superstable_max, &BisectionConfig::default());
    s.check("R_0 = 2", "exact", || {
        let r0 = superstable.clone()?[0];
        ensure(r0 == 2.0, || mismatch("R_0", r0, 2))?;
        Ok("2".into())
    });
    s.check("R_1 = 1 + sqrt(5)", "tolerance 1e-10", || {
        let r1 = superstable.clone()?[1];
        let want = 1.0 + 5f64.sqrt();
        ensure((r1 - want).abs() < 1e-10, || mismatch("R_1", r1, want))?;
        Ok(format!("{:e}", (r1 - want).abs()))
    });
    s.check(
        "superstable parameters increase toward the accumulation point",
        format!("n <= {superstable_max}"),
        || {
            let values = superstable.clone()?;
            ensure(values.windows(2).all(|w| w[0] < w[1]), || {
                format!("{values:?}")
            })?;
            if values.len() < 4 {
                return Ok("fewer than 4 values, no extrapolation".into());
            }
            let r_inf = feigenbaum_accumulation(&values)?;
            let last = values[values.len() - 1];
            ensure(last < r_inf && r_inf < 4.0, || {
                format!("R_{superstable_max} = {last}, limit {r_inf}")
            })?;
            Ok(format!("limit {r_inf}"))
        },
    );
    let orbit_max = upto(ORBIT_MAX_ORDER);
    s.check(
        "superstable orbit has period 2^n and visits 1/2",
        format!("n <= {orbit_max}, tolerance 1e-6"),
        || {
            let values = superstable.clone()?;
            for n in 0..=orbit_max {
                let orbit =
                    stationary_orbit(values[n as usize], 1 << (n + 1), &OrbitConfig::default())?;
                ensure(orbit.period == 1 << n, || {
                    mismatch(format!("period at R_{n}"), orbit.period, 1u64 << n)
                })?;
                let gap = (orbit.points[0] - 0.5).abs();
                ensure(gap < 1e-6, || {
                    format!("n = {n}: nearest point {gap:e} from 1/2")
                })?;
            }
            Ok(format!("{} orbits", orbit_max + 1))
        },
    );
    let series = random_series(seed);
    s.check(
        "forward visibility: scan = pairwise check",
        format!("{RANDOM_SERIES} series, length <= {RANDOM_SERIES_MAX_LEN}, seed {seed}"),
        || {
            let mut points = 0;
            for (t, x) in series.iter().enumerate() {
                let brute = forward_visibility_brute_force(x);
                for (i, &b) in brute.iter().enumerate() {
                    if let Some(d) = forward_degree(x, i) {
                        ensure(d == b, || format!("series {t}, point {i}: {d} != {b}"))?;
                        points += 1;
                    }
                }
            }
            Ok(format!("{points} settled points"))
        },
    );
    s.check(
        "forward visibility invariant under increasing maps",
        format!("{RANDOM_SERIES} series, seed {seed}"),
        || {
            for (t, x) in series.iter().enumerate() {
                let y: Vec<f64> = x.iter().map(|v| (3.0 * v).exp() + v.powi(3)).collect();
                let (a, b) = (
                    forward_visibility_brute_force(x),
                    forward_visibility_brute_force(&y),
                );
                ensure(a == b, || format!("series {t}"))?;
                let settled = (0..x.len()).all(|i| forward_degree(x, i) == forward_degree(&y, i));
                ensure(settled, || format!("series {t}: settled degrees differ"))?;
            }
            Ok(format!("{} series", series.len()))
        },
    );

    let mut diagnostics = Vec::new();
    let deletion_order = upto(6);
    diagnostics.push(Diagnostic {
        name: format!("delete first occurrences from r_{deletion_order}"),
        detail: json!(delete_first_occurrences(&ruler_block(deletion_order)?)),
    });
    if let Ok(values) = &superstable {
        for n in 1..=orbit_max {
            let detail = match compare_with_ruler(n, values[n as usize], &OrbitConfig::default()) {
                Ok(cmp) => json!(cmp),
                Err(e) => json!({ "error": e.to_string() }),
            };
            diagnostics.push(Diagnostic {
                name: format!("visibility pattern, period 2^{n}"),
                detail,
            });
        }
    }
    Ok((s.verdicts, diagnostics))
}

/// Random series with deliberate ties, so equal heights are exercised too.
fn random_series(seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    (0..RANDOM_SERIES)
        .map(|_| {
            let len = rng.gen_range(1..=RANDOM_SERIES_MAX_LEN);
            let levels = rng.gen_range(2..=64);
            (0..len)
                .map(|_| f64::from(rng.gen_range(0..levels)) / f64::from(levels))
                .collect()
        })
        .collect()
}
