//! Interval duplication automaton.
//!
//! Starting from one interior point, every point created in the previous step spawns one
//! new point on each side; older points persist and age. Reading ages left to right gives
//! `ruler_block(step)` regardless of where exactly the new points are put, as long as they
//! stay strictly between their parent and its neighbours.

use std::cmp::Ordering;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::ruler::IndexSequence;

/// Largest step [`run`] will simulate (2^22 - 1 points).
pub const MAX_STEPS: u32 = 22;

/// Ambient interval; either bound may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(domain("Interval::new", format!("[{lo}, {hi}]"), "lo < hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: 0.0, hi: 1.0 }
    }

    pub fn real_line() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x.is_finite() && self.lo < x && x < self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionPoint {
    pub position: f64,
    pub birth_step: u32,
    pub age: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Partition {
    pub ambient: Interval,
    pub step: u32,
    pub points: Vec<PartitionPoint>,
}

/// Where a spawned point goes inside the gap it is born into.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Placement {
    /// Halfway between the parent and its neighbour (or the bound, or parent ± 1 for an
    /// infinite bound).
    Midpoint,
    /// A random fraction of the available gap, drawn from a seeded generator.
    Jitter(ChaCha8Rng),
}

impl Placement {
    pub fn jitter(seed: u64) -> Self {
        Placement::Jitter(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Fraction of the way from parent to the far side of the gap.
    fn fraction(&mut self, shared: bool) -> f64 {
        match self {
            Placement::Midpoint => 0.5,
            // a shared gap is split in two halves so siblings from both ends cannot cross
            Placement::Jitter(rng) if shared => rng.gen_range(0.05..0.45),
            Placement::Jitter(rng) => rng.gen_range(0.05..0.95),
        }
    }
}

pub fn init(ambient: Interval, seed: f64) -> Result<Partition> {
    if !ambient.contains_interior(seed) {
        return Err(domain(
            "automaton::init",
            seed,
            "strictly inside the ambient interval",
        ));
    }
    Ok(Partition {
        ambient,
        step: 1,
        points: vec![PartitionPoint {
            position: seed,
            birth_step: 1,
            age: 1,
        }],
    })
}

/// One duplication step with midpoint placement.
pub fn step(p: &Partition) -> Result<Partition> {
    step_with(p, &mut Placement::Midpoint)
}

pub fn step_with(p: &Partition, placement: &mut Placement) -> Result<Partition> {
    let next_step = p.step + 1;
    let points = &p.points;
    let spawns = |i: usize| points[i].age == 1;
    let mut out = Vec::with_capacity(2 * points.len() + 1);

    let newborn = |position| PartitionPoint {
        position,
        birth_step: next_step,
        age: 1,
    };

    for (i, point) in points.iter().enumerate() {
        if spawns(i) {
            let shared = i > 0 && spawns(i - 1);
            let position = match i.checked_sub(1) {
                Some(j) => {
                    let gap = point.position - points[j].position;
                    point.position - placement.fraction(shared) * gap
                }
                None => toward_bound(point.position, p.ambient.lo, placement),
            };
            out.push(newborn(position));
        }
        out.push(PartitionPoint {
            age: point.age + 1,
            ..*point
        });
        if spawns(i) {
            let shared = i + 1 < points.len() && spawns(i + 1);
            let position = match points.get(i + 1) {
                Some(right) => {
                    let gap = right.position - point.position;
                    point.position + placement.fraction(shared) * gap
                }
                None => toward_bound(point.position, p.ambient.hi, placement),
            };
            out.push(newborn(position));
        }
    }

    let next = Partition {
        ambient: p.ambient,
        step: next_step,
        points: out,
    };
    next.check_order()?;
    Ok(next)
}

fn toward_bound(parent: f64, bound: f64, placement: &mut Placement) -> f64 {
    let t = placement.fraction(false);
    if bound.is_infinite() {
        parent + bound.signum() * 2.0 * t
    } else {
        parent + t * (bound - parent)
    }
}

impl Partition {
    /// Fails if positions are not strictly increasing or leave the ambient interval.
    pub fn check_order(&self) -> Result<()> {
        for (i, w) in self.points.windows(2).enumerate() {
            if w[0].position.partial_cmp(&w[1].position) != Some(Ordering::Less) {
                return Err(Error::PositionCollision {
                    step: self.step,
                    index: i,
                    left: w[0].position,
                    right: w[1].position,
                });
            }
        }
        let outside = self
            .points
            .iter()
            .position(|pt| !self.ambient.contains_interior(pt.position));
        if let Some(index) = outside {
            let pt = self.points[index].position;
            let bound = if pt <= self.ambient.lo {
                self.ambient.lo
            } else {
                self.ambient.hi
            };
            return Err(Error::PositionCollision {
                step: self.step,
                index,
                left: pt.min(bound),
                right: pt.max(bound),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn age_sequence(p: &Partition) -> IndexSequence {
    IndexSequence::from_terms(p.points.iter().map(|pt| pt.age).collect())
}

/// Runs the automaton from `init(ambient, seed)` until `steps` is reached.
pub fn run(
    ambient: Interval,
    seed: f64,
    steps: u32,
    placement: &mut Placement,
) -> Result<Partition> {
    if steps == 0 || steps > MAX_STEPS {
        return Err(domain("automaton::run", steps, "1..=22"));
    }
    let mut p = init(ambient, seed)?;
    while p.step < steps {
        p = step_with(&p, placement)?;
    }
    Ok(p)
}
