//! Crate-wide error type.

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A field or intermediate quantity contains NaN or infinity.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// Two operands live on different grids.
    #[error("grid mismatch between operands")]
    GridMismatch,

    /// An operation required a nonzero field.
    #[error("zero field where a nonzero field is required")]
    ZeroField,

    /// A field violates the homogeneous Dirichlet constraint.
    #[error("field has nonzero boundary values")]
    NotDirichlet,

    /// Invalid construction data (grid extents, exponent ranges, ...).
    #[error("invalid {what}: {detail}")]
    Invalid { what: &'static str, detail: String },

    /// The Luxemburg norm bracketing loop hit its iteration cap.
    #[error("luxemburg norm bracketing exceeded {0} iterations")]
    LuxemburgIterationCap(usize),

    /// `nehari_bracket_failure`: the fibering derivative never changed sign,
    /// which signals a nonlinearity without superlinear growth.
    #[error("nehari_bracket_failure: no sign change after {expansions} expansions (t in [{lo:e}, {hi:e}])")]
    NehariBracketFailure { expansions: usize, lo: f64, hi: f64 },

    /// The alternating pair projection did not reach its residual tolerance.
    #[error(
        "pair projection did not converge after {sweeps} sweeps (residuals {residual_plus:e}, {residual_minus:e})"
    )]
    PairProjectionStalled {
        sweeps: usize,
        residual_plus: f64,
        residual_minus: f64,
    },

    /// `sign_violation`: a constant-sign solve converged to a field whose
    /// wrong-sign part exceeds tolerance.
    #[error("sign_violation: wrong-sign part norm {part_norm:e} of total {total_norm:e}")]
    SignViolation { part_norm: f64, total_norm: f64 },

    /// `nodal_collapse`: one part of a sign-changing iterate vanished.
    #[error("nodal_collapse: part norm {part_norm:e} below {threshold:e}; try another initial guess")]
    NodalCollapse { part_norm: f64, threshold: f64 },

    /// The admissibility window is undefined for supercritical growth.
    #[error("admissibility window undefined: r_plus = {r_plus} >= p*_- = {p_star_minus}")]
    WindowUndefined { r_plus: f64, p_star_minus: f64 },

    /// Interpolation between Lebesgue exponents needs l_- < r_+ < p*_-.
    #[error("no interpolation exponent for l_minus = {l_minus}, r_plus = {r_plus}, p_star_minus = {p_star_minus}")]
    InterpolationUndefined {
        l_minus: f64,
        r_plus: f64,
        p_star_minus: f64,
    },

    /// A descent run exhausted its iteration budget.
    #[error("solve did not converge within {iterations} iterations (residual {residual:e}, tolerance {tolerance:e})")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    /// Impossible state: indicates a bug rather than bad input.
    #[error("internal error: {0}")]
    Internal(&'static str),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
