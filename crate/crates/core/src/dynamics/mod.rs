//! Period-doubling cascade of the logistic map and the forward horizontal visibility of its
//! superstable cycles.

pub mod logistic;
pub mod visibility;

pub use logistic::{
    delta_estimates, feigenbaum_accumulation, iterate, stationary_orbit, superstable_r,
    superstable_sequence, BisectionConfig, LogisticParams, Orbit, OrbitConfig,
};
pub use visibility::{
    compare_with_ruler, forward_visibility, forward_visibility_brute_force, orbit_visibility,
    pattern_recurrence, PatternComparison, VisibilityPattern,
};
