//! Variational solver library for Dirichlet problems driven by the
//! variable-exponent double phase operator.
//!
//! The crate provides, in dependency order:
//!
//! - [`mesh`]: tensor grids, nodal fields, midpoint quadrature, truncations
//!   and thresholded nodal components;
//! - [`exponents`] and [`problem`]: variable exponent data and the full
//!   problem configuration;
//! - [`modular`]: modulars, Luxemburg norms and the norm-modular relations;
//! - [`nonlinearity`] and [`energy`]: right-hand side families with closed
//!   antiderivatives, the energy functional, truncated variants and
//!   assembled derivatives;
//! - [`hypotheses`]: numerical certificates for the admissibility
//!   conditions on exponents, weight and source;
//! - [`nehari`]: fibering diagnostics and ray/pair projections onto the
//!   Nehari manifold and its sign-changing subset;
//! - [`solver`]: preconditioned projected descent producing the positive,
//!   negative and sign-changing solutions with their diagnostics.
//!
//! The crate is `no_std` (with `alloc`); file formats, configuration and
//! the command line live in the companion CLI crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod math;

pub mod energy;
pub mod error;
pub mod exponents;
pub mod hypotheses;
pub mod laplacian;
pub mod mesh;
pub mod modular;
pub mod nehari;
pub mod nonlinearity;
pub mod problem;
pub mod solver;

pub use energy::{pairing, EnergyBreakdown, Functional, ResidualVector, Truncation};
pub use error::{Error, Result};
pub use exponents::{ExponentField, WeightField};
pub use hypotheses::{HypothesisReport, Verdict};
pub use mesh::{
    connected_components, default_threshold, gradient, integrate, Grid, NodalComponents,
    QuadratureField, ScalarField, Sign,
};
pub use modular::{norm_1h0, sobolev_norms, LuxemburgNorm, ModularSpec, SobolevNorms};
pub use nehari::{fibering, fibering_profile, project_pair, project_ray, NehariState};
pub use nonlinearity::NonlinearitySpec;
pub use problem::ProblemConfig;
pub use solver::{
    solve_constant_sign, solve_sign_changing, solve_three, Preconditioner, SolveReport,
    SolverConfig, ThreeSolutions,
};
