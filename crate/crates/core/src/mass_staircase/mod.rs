//! ρ-sums, coarse-grained mass, the mass function, the ς-dimension and the
//! integral staircase `S(x)` of a middle-ξ Cantor set.

mod mass;
mod staircase;

pub use mass::{
    coarse_mass, mass, mass_with_schedule, rho_sum, varsigma_dimension, varsigma_dimension_with,
    MassEstimate, MassSchedule, MassTrend, Subdivision,
};
pub use staircase::{Normalization, StaircaseEvaluator, DEFAULT_TOLERANCE};

/// `Γ(1 + ζ)`.
pub fn gamma_one_plus(zeta: f64) -> f64 {
    statrs::function::gamma::gamma(1.0 + zeta)
}
