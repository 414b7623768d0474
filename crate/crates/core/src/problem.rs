//! Full problem data: exponents, weight, monotone direction and right-hand
//! side over one grid.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::{ExponentField, WeightField};
use crate::mesh::Grid;
use crate::nonlinearity::NonlinearitySpec;

/// Data of the Dirichlet problem driven by the double phase operator with
/// exponents `p(.) < q(.)`, weight `mu >= 0` and right-hand side `f`.
///
/// Construction only enforces structural consistency (shared grid, nonzero
/// direction). The analytic admissibility conditions are certified
/// separately by the `hypotheses` module, so deliberately inadmissible
/// configurations can still be assembled and probed.
#[derive(Debug, Clone)]
pub struct ProblemConfig {
    pub grid: Grid,
    pub p: ExponentField,
    pub q: ExponentField,
    pub mu: WeightField,
    /// Direction along which `p` is required to be monotone.
    pub direction: Vec<f64>,
    pub nonlinearity: NonlinearitySpec,
}

impl ProblemConfig {
    pub fn new(
        grid: Grid,
        p: ExponentField,
        q: ExponentField,
        mu: WeightField,
        direction: Vec<f64>,
        nonlinearity: NonlinearitySpec,
    ) -> Result<Self> {
        for (name, other) in [
            ("p", p.grid()),
            ("q", q.grid()),
            ("mu", mu.grid()),
            ("nonlinearity", nonlinearity.grid()),
        ] {
            if *other != grid {
                return Err(Error::Invalid {
                    what: "problem config",
                    detail: format!("{name} lives on a different grid"),
                });
            }
        }
        if direction.len() != grid.dim() {
            return Err(Error::Invalid {
                what: "problem config",
                detail: format!(
                    "direction has {} components for a {}-d grid",
                    direction.len(),
                    grid.dim()
                ),
            });
        }
        if direction.iter().all(|&c| c == 0.0) || direction.iter().any(|c| !c.is_finite()) {
            return Err(Error::Invalid {
                what: "problem config",
                detail: String::from("direction must be finite and nonzero"),
            });
        }
        Ok(ProblemConfig {
            grid,
            p,
            q,
            mu,
            direction,
            nonlinearity,
        })
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn p_minus(&self) -> f64 {
        self.p.min()
    }

    pub fn p_plus(&self) -> f64 {
        self.p.max()
    }

    pub fn q_minus(&self) -> f64 {
        self.q.min()
    }

    pub fn q_plus(&self) -> f64 {
        self.q.max()
    }

    /// `p*_- = min_x p*(x)`; infinite when `p_-` reaches the dimension.
    pub fn p_star_minus(&self) -> f64 {
        sobolev_conjugate(self.p_minus(), self.dim())
    }
}

/// `s* = N s / (N - s)` for `s < N`, infinity otherwise.
pub fn sobolev_conjugate(s: f64, dim: usize) -> f64 {
    let n = dim as f64;
    if s < n {
        n * s / (n - s)
    } else {
        f64::INFINITY
    }
}
