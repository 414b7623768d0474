//! The double phase energy, its truncated variants and assembled Gateaux
//! derivatives.
//!
//! The energy of a field is
//!
//! `φ(u) = ∫ (|∇u|^{p(x)}/p(x) + mu(x) |∇u|^{q(x)}/q(x)) dx - ∫ F(x, u) dx`,
//!
//! evaluated by midpoint quadrature on cell gradients and cell-averaged
//! values. The truncated variants replace the source argument by the
//! positive or negative part of the quadrature value, which keeps the
//! discrete functional continuously differentiable (`f(x, 0) = 0`).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{gradient, Grid, ScalarField};
use crate::nonlinearity::CellParams;
use crate::problem::ProblemConfig;

/// Which source truncation the functional carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// Full functional `φ`.
    None,
    /// `φ_+`: source evaluated at `u^+`.
    Positive,
    /// `φ_-`: source evaluated at `-u^-`.
    Negative,
}

impl Truncation {
    #[inline]
    pub(crate) fn apply(self, s: f64) -> f64 {
        match self {
            Truncation::None => s,
            Truncation::Positive => s.max(0.0),
            Truncation::Negative => s.min(0.0),
        }
    }
}

/// The additive pieces of the energy: `φ = i_p + i_q - f_term`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `∫ |∇u|^{p(x)} / p(x) dx`
    pub i_p: f64,
    /// `∫ mu(x) |∇u|^{q(x)} / q(x) dx`
    pub i_q: f64,
    /// `∫ F(x, u) dx` (with the truncation applied)
    pub f_term: f64,
}

impl EnergyBreakdown {
    pub fn phi(&self) -> f64 {
        self.i_p + self.i_q - self.f_term
    }

    /// Magnitude scale used to normalize residual tolerances.
    pub fn scale(&self) -> f64 {
        self.i_p + self.i_q + math::abs(self.f_term)
    }
}

/// Nodal dual vector representing `v ↦ ⟨φ'(u), v⟩`; zero on boundary nodes.
#[derive(Debug, Clone)]
pub struct ResidualVector {
    grid: Grid,
    values: Vec<f64>,
}

impl ResidualVector {
    /// Wrap nodal dual values; boundary entries are zeroed to keep the
    /// Dirichlet invariant.
    pub fn from_field(mut field: ScalarField) -> Self {
        field.zero_boundary();
        ResidualVector {
            grid: field.grid().clone(),
            values: field.values().to_vec(),
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn l2_norm(&self) -> f64 {
        math::sqrt(self.values.iter().map(|v| v * v).sum())
    }

    pub fn to_field(&self) -> ScalarField {
        ScalarField::from_values(&self.grid, self.values.clone()).expect("sizes match")
    }
}

/// Duality pairing of a residual with a test field: sum of nodal products
/// over interior nodes (boundary entries of the residual are zero).
pub fn pairing(rv: &ResidualVector, v: &ScalarField) -> Result<f64> {
    if rv.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(rv
        .values
        .iter()
        .zip(v.values())
        .map(|(&r, &w)| r * w)
        .sum())
}

/// Assembled evaluator of `φ`, `φ_±` and their derivatives for one problem
/// configuration. Construction samples all coefficient fields at the
/// quadrature points once.
#[derive(Debug, Clone)]
pub struct Functional {
    grid: Grid,
    measure: f64,
    q_plus: f64,
    pub(crate) p: Vec<f64>,
    pub(crate) q: Vec<f64>,
    pub(crate) mu: Vec<f64>,
    pub(crate) source: CellParams,
    origins: Vec<usize>,
    corners: Vec<usize>,
    /// Per corner and axis: d(grad_axis)/d(corner value).
    corner_grad_weights: Vec<f64>,
    avg_weight: f64,
    boundary: Vec<bool>,
}

impl Functional {
    pub fn new(cfg: &ProblemConfig) -> Self {
        let grid = cfg.grid.clone();
        let dim = grid.dim();
        let corners = grid.corner_offsets();
        let n_corners = corners.len();
        let mut corner_grad_weights = vec![0.0; n_corners * dim];
        let face_scale = 1.0 / (n_corners / 2) as f64;
        for j in 0..n_corners {
            for a in 0..dim {
                let sign = if j >> a & 1 == 1 { 1.0 } else { -1.0 };
                corner_grad_weights[j * dim + a] = sign * face_scale / grid.spacing()[a];
            }
        }
        Functional {
            measure: grid.cell_measure(),
            q_plus: cfg.q_plus(),
            p: cfg.p.cell_averages(),
            q: cfg.q.cell_averages(),
            mu: cfg.mu.cell_averages(),
            source: cfg.nonlinearity.cell_params(),
            origins: grid.cell_origin_nodes(),
            corners,
            corner_grad_weights,
            avg_weight: 1.0 / n_corners as f64,
            boundary: (0..grid.node_count()).map(|i| grid.is_boundary(i)).collect(),
            grid,
        }
    }

    /// Boundary mask of the grid (true on boundary nodes).
    pub fn boundary_mask(&self) -> &[bool] {
        &self.boundary
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cell_measure(&self) -> f64 {
        self.measure
    }

    pub fn q_plus(&self) -> f64 {
        self.q_plus
    }

    fn check_field(&self, u: &ScalarField) -> Result<()> {
        if u.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("field"));
        }
        Ok(())
    }

    /// Energy breakdown of the requested functional at `u`.
    pub fn energy(&self, u: &ScalarField, trunc: Truncation) -> Result<EnergyBreakdown> {
        self.check_field(u)?;
        let quad = gradient(u);
        let mut i_p = 0.0;
        let mut i_q = 0.0;
        let mut f_term = 0.0;
        for c in 0..quad.cell_count() {
            let gn = quad.gradient_norm(c);
            if gn > 0.0 {
                i_p += math::powf(gn, self.p[c]) / self.p[c];
                i_q += self.mu[c] * math::powf(gn, self.q[c]) / self.q[c];
            }
            f_term += self.source.antiderivative(c, trunc.apply(quad.values()[c]));
        }
        let out = EnergyBreakdown {
            i_p: i_p * self.measure,
            i_q: i_q * self.measure,
            f_term: f_term * self.measure,
        };
        if !out.phi().is_finite() {
            return Err(Error::NonFinite("energy"));
        }
        Ok(out)
    }

    /// `φ(u)` (or the truncated value).
    pub fn phi(&self, u: &ScalarField, trunc: Truncation) -> Result<f64> {
        Ok(self.energy(u, trunc)?.phi())
    }

    /// Dual vector of the derivative of the requested functional at `u`.
    pub fn residual(&self, u: &ScalarField, trunc: Truncation) -> Result<ResidualVector> {
        self.assemble(u, trunc, true, 0.0)
    }

    /// Derivative of the gradient part alone: the double phase operator
    /// applied to `u` as a dual vector.
    pub fn operator_residual(&self, u: &ScalarField) -> Result<ResidualVector> {
        self.assemble(u, Truncation::None, false, 0.0)
    }

    /// Residual with the kernel smoothed as `(|ξ|^2 + ε^2)^{(p-2)/2} ξ`.
    /// Descent steps may use it when `p_- < 2`; reported residuals never do.
    pub fn residual_regularized(
        &self,
        u: &ScalarField,
        trunc: Truncation,
        epsilon: f64,
    ) -> Result<ResidualVector> {
        self.assemble(u, trunc, true, epsilon)
    }

    fn assemble(
        &self,
        u: &ScalarField,
        trunc: Truncation,
        with_source: bool,
        epsilon: f64,
    ) -> Result<ResidualVector> {
        self.check_field(u)?;
        let dim = self.grid.dim();
        let quad = gradient(u);
        let mut out = vec![0.0f64; self.grid.node_count()];
        let eps2 = epsilon * epsilon;

        for (c, &origin) in self.origins.iter().enumerate() {
            let g = quad.gradient(c);
            let gn2: f64 = g.iter().map(|x| x * x).sum();
            // kernel coefficient |ξ|^{p-2} + mu |ξ|^{q-2}, extended by 0 at
            // ξ = 0 (the product with ξ stays continuous for p > 1)
            let coef = if gn2 > 0.0 || eps2 > 0.0 {
                let s2 = gn2 + eps2;
                if s2 > 0.0 {
                    math::powf(s2, 0.5 * (self.p[c] - 2.0))
                        + self.mu[c] * math::powf(s2, 0.5 * (self.q[c] - 2.0))
                } else {
                    0.0
                }
            } else {
                0.0
            };
            let fv = if with_source {
                self.source.f(c, trunc.apply(quad.values()[c]))
            } else {
                0.0
            };
            for (j, &off) in self.corners.iter().enumerate() {
                let mut dot = 0.0;
                for a in 0..dim {
                    dot += coef * g[a] * self.corner_grad_weights[j * dim + a];
                }
                out[origin + off] += self.measure * (dot - fv * self.avg_weight);
            }
        }

        for (v, &b) in out.iter_mut().zip(&self.boundary) {
            if b {
                *v = 0.0;
            }
        }
        Ok(ResidualVector {
            grid: self.grid.clone(),
            values: out,
        })
    }

    /// Minimum of `⟨A(u) - A(v), u - v⟩` over the given pairs; strictly
    /// positive for distinct fields by monotonicity of the operator.
    pub fn monotonicity_sample(&self, pairs: &[(ScalarField, ScalarField)]) -> Result<f64> {
        let mut min = f64::INFINITY;
        for (u, v) in pairs {
            let au = self.operator_residual(u)?;
            let av = self.operator_residual(v)?;
            let mut diff = u.clone();
            diff.add_scaled(-1.0, v)?;
            let value = pairing(&au, &diff)? - pairing(&av, &diff)?;
            min = min.min(value);
        }
        Ok(min)
    }
}
