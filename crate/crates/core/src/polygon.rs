//! Nested 2^n-gons inscribed in a circle, each obtained from the previous one by bisecting
//! its arcs. A vertex's index is the number of generations whose polygon contains it.
//!
//! Vertices are exact fractions `k / 2^n` of a full turn, measured clockwise from the
//! southernmost vertex, which is left out of the sequence. Unit-circle coordinates are
//! only needed for drawing.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::ruler::{DyadicRational, IndexSequence};

pub const MAX_GENERATION: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexFraction {
    /// Position `k / 2^generation` of a full turn, `0 <= k < 2^generation`.
    pub k: u64,
    pub generation: u32,
}

impl VertexFraction {
    /// `v2(k) + 1`, capped at the generation; the southernmost vertex (`k = 0`) has index
    /// `generation`.
    pub fn index(&self) -> u32 {
        if self.k == 0 {
            self.generation
        } else {
            (self.k.trailing_zeros() + 1).min(self.generation)
        }
    }

    /// Index by testing membership in every coarser 2^m-gon: the vertex belongs to
    /// generation `m` iff `2^(n-m)` divides `k`.
    pub fn index_by_membership(&self) -> u32 {
        let n = self.generation;
        (1..=n)
            .filter(|&m| self.k.is_multiple_of(1u64 << (n - m)))
            .count() as u32
    }

    /// The fraction of a full turn in lowest terms (`None` for the southernmost vertex).
    pub fn turn_fraction(&self) -> Option<DyadicRational> {
        DyadicRational::reduce(self.k, self.generation).ok()
    }

    pub fn angle(&self) -> f64 {
        TAU * self.k as f64 / (1u64 << self.generation) as f64
    }
}

/// Point on the unit circle `angle` radians clockwise from the south pole, in y-up coordinates.
pub fn circle_point(angle: f64) -> (f64, f64) {
    (-angle.sin(), -angle.cos())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonGeneration {
    pub generation: u32,
    /// Clockwise from the vertex left of the southernmost one.
    pub vertices: Vec<VertexFraction>,
}

pub fn generation(n: u32) -> Result<PolygonGeneration> {
    if n == 0 || n > MAX_GENERATION {
        return Err(domain("polygon::generation", n, "1..=20"));
    }
    let vertices = (1..1u64 << n)
        .map(|k| VertexFraction { k, generation: n })
        .collect();
    Ok(PolygonGeneration {
        generation: n,
        vertices,
    })
}

/// Vertex indices in traversal order. The valuation formula and the membership count are
/// both evaluated and must agree.
pub fn vertex_index_sequence(g: &PolygonGeneration) -> Result<IndexSequence> {
    let mut terms = Vec::with_capacity(g.vertices.len());
    for v in &g.vertices {
        let (by_valuation, by_membership) = (v.index(), v.index_by_membership());
        if by_valuation != by_membership {
            return Err(Error::Mismatch {
                identity: "vertex index: valuation vs membership",
                detail: format!(
                    "k = {}, n = {}: {by_valuation} != {by_membership}",
                    v.k, v.generation
                ),
            });
        }
        terms.push(by_valuation);
    }
    Ok(IndexSequence::from_terms(terms))
}

/// A vertex placed at an irregular angle, with the generation it was created in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JitteredVertex {
    pub angle: f64,
    pub birth_generation: u32,
}

/// Builds `n` generations of arc bisection where each new vertex lands at a random point
/// strictly inside its arc. Returns the vertices (southernmost excluded) in clockwise order.
pub fn jittered_generation(n: u32, seed: u64) -> Result<Vec<JitteredVertex>> {
    if n == 0 || n > MAX_GENERATION {
        return Err(domain("polygon::jittered_generation", n, "1..=20"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // angles include both copies of the south pole, 0 and a full turn, as sentinels
    let mut ring = vec![
        JitteredVertex {
            angle: 0.0,
            birth_generation: 0,
        },
        JitteredVertex {
            angle: TAU,
            birth_generation: 0,
        },
    ];
    for gen in 1..=n {
        let mut next = Vec::with_capacity(2 * ring.len() - 1);
        for w in ring.windows(2) {
            next.push(w[0]);
            let t = rng.gen_range(0.2..0.8);
            next.push(JitteredVertex {
                angle: w[0].angle + t * (w[1].angle - w[0].angle),
                birth_generation: gen,
            });
        }
        next.push(*ring.last().expect("ring has sentinels"));
        ring = next;
    }
    ring.pop();
    ring.remove(0);
    Ok(ring)
}

/// Index sequence of a jittered construction: generations survived, `n - birth + 1`.
/// Fails if the angles are not strictly increasing.
pub fn jittered_index_sequence(vertices: &[JitteredVertex], n: u32) -> Result<IndexSequence> {
    if let Some(i) = vertices
        .windows(2)
        .position(|w| w[0].angle.partial_cmp(&w[1].angle) != Some(Ordering::Less))
    {
        return Err(Error::Mismatch {
            identity: "jittered polygon: clockwise order",
            detail: format!("vertices {i} and {} out of order", i + 1),
        });
    }
    Ok(IndexSequence::from_terms(
        vertices
            .iter()
            .map(|v| n - v.birth_generation + 1)
            .collect(),
    ))
}
