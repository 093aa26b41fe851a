//! Generators and cross-checks for the ruler (Gros) sequence `1, 2, 1, 3, 1, 2, 1, 4, ...`.
//!
//! The same sequence is produced here by several unrelated constructions: the 2-adic
//! closed form, a recursive halving rule, block doubling, ordering dyadic rationals by
//! their Thomae height, an interval-duplication automaton, the middle thirds of the
//! Cantor set and the vertices of nested 2^n-gons. The [`dynamics`] module looks for it
//! in the forward horizontal visibility of superstable logistic-map orbits.

pub mod automaton;
pub mod cantor;
pub mod cli;
pub mod demography;
pub mod dynamics;
pub mod error;
pub mod polygon;
pub mod ruler;

pub use error::{Error, Result};
pub use ruler::IndexSequence;
