//! Local fractal calculus on middle-ξ Cantor sets.
//!
//! The crate builds finite-depth approximations of middle-ξ Cantor sets,
//! evaluates their mass function and integral staircase `S(x)`, differentiates
//! and integrates functions supported on the set (through Darboux-type sums
//! weighted by staircase increments, and through the conjugacy `f = g ∘ S`),
//! and models diffusion whose space and/or time coordinates live on such sets.
//!
//! Every closed form is paired with an independent numerical route: brute-force
//! subdivision sums for the staircase, upper/lower sums for integrals, and a
//! Monte Carlo walker for the mean-squared-displacement exponents.

pub mod cantor_set;
pub mod cli;
pub mod diffusion;
pub mod error;
pub mod fractal_calculus;
pub mod mass_staircase;
mod quad;
pub mod report;

pub use cantor_set::{
    build_prefractal, hausdorff_dimension, xi_for_dimension, CantorParams, ClosedInterval,
    ConstructionMode, PreFractal,
};
pub use diffusion::{DiffusionModel, DiffusionParams, DiffusionRegime, WalkConfig};
pub use error::{Error, Result};
pub use fractal_calculus::{CantorCalculus, ConjugateFunction, GridFunction};
pub use mass_staircase::{Normalization, StaircaseEvaluator, Subdivision};
