//! Modular and Luxemburg-norm calculus for variable-exponent and double
//! phase integrands.
//!
//! A modular is `∫ w(x) s(x)^{r(x)} dx` with `s` either the field magnitude
//! or the gradient magnitude at the quadrature points. The Luxemburg norm is
//! the unique `λ > 0` with `modular(u/λ) = 1`; `λ ↦ modular(u/λ)` is
//! continuous and strictly decreasing to zero for nonzero `u`, so the root
//! is found by exponential bracketing around `λ = 1` followed by bisection.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::{cell_averages, ExponentField, WeightField};
use crate::math;
use crate::mesh::{gradient, Grid, ScalarField};
use crate::problem::ProblemConfig;

/// Relative tolerance of the Luxemburg bisection.
pub const LUXEMBURG_REL_TOL: f64 = 1e-10;
/// Iteration cap shared by bracketing and bisection.
pub const LUXEMBURG_MAX_ITER: usize = 200;
/// Below this the modular of the raw field is treated as zero (underflow
/// guard; a genuinely nonzero field has a positive integrand).
pub const MODULAR_UNDERFLOW: f64 = 1e-300;

#[derive(Debug, Clone)]
pub enum ModularKind {
    /// `∫ |u|^{r(x)} dx`
    VarExp { exponent: ExponentField },
    /// `∫ w(x) |u|^{r(x)} dx` (a seminorm when the weight vanishes somewhere)
    WeightedVarExp {
        exponent: ExponentField,
        weight: WeightField,
    },
    /// `∫ (|u|^{p(x)} + mu(x) |u|^{q(x)}) dx`
    DoublePhase {
        p: ExponentField,
        q: ExponentField,
        weight: WeightField,
    },
}

/// A modular together with the carrier it applies to: nodal values or
/// cell gradients.
#[derive(Debug, Clone)]
pub struct ModularSpec {
    kind: ModularKind,
    on_gradient: bool,
}

/// Luxemburg norm value plus the degeneracy flag of weighted seminorms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuxemburgNorm {
    pub value: f64,
    /// Set when a nonzero field has zero modular because it is supported
    /// where the weight vanishes (`seminorm_degenerate`).
    pub seminorm_degenerate: bool,
}

impl ModularSpec {
    pub fn var_exp(exponent: ExponentField) -> Self {
        ModularSpec {
            kind: ModularKind::VarExp { exponent },
            on_gradient: false,
        }
    }

    pub fn weighted_var_exp(exponent: ExponentField, weight: WeightField) -> Self {
        ModularSpec {
            kind: ModularKind::WeightedVarExp { exponent, weight },
            on_gradient: false,
        }
    }

    pub fn double_phase(p: ExponentField, q: ExponentField, weight: WeightField) -> Self {
        ModularSpec {
            kind: ModularKind::DoublePhase { p, q, weight },
            on_gradient: false,
        }
    }

    /// The double phase modular of a problem configuration.
    pub fn double_phase_from(cfg: &ProblemConfig) -> Self {
        Self::double_phase(cfg.p.clone(), cfg.q.clone(), cfg.mu.clone())
    }

    /// Switch the carrier to per-cell gradient magnitudes.
    pub fn on_gradient(mut self) -> Self {
        self.on_gradient = true;
        self
    }

    pub fn is_gradient(&self) -> bool {
        self.on_gradient
    }

    pub fn grid(&self) -> &Grid {
        match &self.kind {
            ModularKind::VarExp { exponent } => exponent.grid(),
            ModularKind::WeightedVarExp { exponent, .. } => exponent.grid(),
            ModularKind::DoublePhase { p, .. } => p.grid(),
        }
    }

    /// Exponents `(lo, hi)` entering the norm-modular sandwich estimates:
    /// `(r_-, r_+)` for variable-exponent modulars, `(p_-, q_+)` for the
    /// double phase modular.
    pub fn sandwich_exponents(&self) -> (f64, f64) {
        match &self.kind {
            ModularKind::VarExp { exponent } | ModularKind::WeightedVarExp { exponent, .. } => {
                (exponent.min(), exponent.max())
            }
            ModularKind::DoublePhase { p, q, .. } => (p.min(), q.max()),
        }
    }

    /// Quadrature-point magnitudes of the carrier.
    fn magnitudes(&self, u: &ScalarField) -> Result<Vec<f64>> {
        if u.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("field"));
        }
        if self.on_gradient {
            let q = gradient(u);
            Ok((0..q.cell_count()).map(|c| q.gradient_norm(c)).collect())
        } else {
            Ok(cell_averages(u.grid(), u.values())
                .into_iter()
                .map(math::abs)
                .collect())
        }
    }

    /// Scaled power terms of the modular at the quadrature points.
    fn terms(&self, magnitudes: &[f64]) -> ModularTerms {
        let grid = self.grid();
        let measure = grid.cell_measure();
        let mut coeff = Vec::new();
        let mut exponent = Vec::new();
        let mut log_mag = Vec::new();
        let mut push_group = |exps: Vec<f64>, weights: Option<Vec<f64>>| {
            for (c, &e) in exps.iter().enumerate() {
                let w = measure * weights.as_ref().map_or(1.0, |w| w[c]);
                coeff.push(w);
                exponent.push(e);
                log_mag.push(if magnitudes[c] > 0.0 {
                    math::ln(magnitudes[c])
                } else {
                    f64::NEG_INFINITY
                });
            }
        };
        match &self.kind {
            ModularKind::VarExp { exponent: r } => push_group(r.cell_averages(), None),
            ModularKind::WeightedVarExp {
                exponent: r,
                weight,
            } => push_group(r.cell_averages(), Some(weight.cell_averages())),
            ModularKind::DoublePhase { p, q, weight } => {
                push_group(p.cell_averages(), None);
                push_group(q.cell_averages(), Some(weight.cell_averages()));
            }
        }
        ModularTerms {
            coeff,
            exponent,
            log_mag,
        }
    }

    /// Midpoint-quadrature value of the modular.
    pub fn modular(&self, u: &ScalarField) -> Result<f64> {
        let mags = self.magnitudes(u)?;
        Ok(self.terms(&mags).eval(0.0))
    }

    pub fn luxemburg_norm(&self, u: &ScalarField) -> Result<f64> {
        Ok(self.luxemburg_norm_detailed(u)?.value)
    }

    /// Luxemburg norm with the seminorm degeneracy flag.
    pub fn luxemburg_norm_detailed(&self, u: &ScalarField) -> Result<LuxemburgNorm> {
        let mags = self.magnitudes(u)?;
        let terms = self.terms(&mags);
        let at_one = terms.eval(0.0);
        if !at_one.is_finite() {
            return Err(Error::NonFinite("modular"));
        }
        if at_one < MODULAR_UNDERFLOW {
            // carrier nonzero but every positively weighted term vanished:
            // the field lives where the weight is zero
            let degenerate = mags.iter().any(|&s| s > 0.0)
                && terms
                    .coeff
                    .iter()
                    .zip(&terms.log_mag)
                    .all(|(&w, &a)| w == 0.0 || a == f64::NEG_INFINITY);
            return Ok(LuxemburgNorm {
                value: 0.0,
                seminorm_degenerate: degenerate,
            });
        }
        if at_one == 1.0 {
            return Ok(LuxemburgNorm {
                value: 1.0,
                seminorm_degenerate: false,
            });
        }

        // exponential bracketing around lambda = 1: the map is strictly
        // decreasing in lambda
        let ln2 = math::ln(2.0);
        let mut lo_ln;
        let mut hi_ln;
        if at_one > 1.0 {
            lo_ln = 0.0;
            hi_ln = ln2;
            let mut n = 0;
            while terms.eval(hi_ln) > 1.0 {
                lo_ln = hi_ln;
                hi_ln += ln2;
                n += 1;
                if n > LUXEMBURG_MAX_ITER {
                    return Err(Error::LuxemburgIterationCap(LUXEMBURG_MAX_ITER));
                }
            }
        } else {
            hi_ln = 0.0;
            lo_ln = -ln2;
            let mut n = 0;
            while terms.eval(lo_ln) < 1.0 {
                hi_ln = lo_ln;
                lo_ln -= ln2;
                n += 1;
                if n > LUXEMBURG_MAX_ITER {
                    return Err(Error::LuxemburgIterationCap(LUXEMBURG_MAX_ITER));
                }
            }
        }

        // bisection in log space to relative tolerance
        let mut n = 0;
        while hi_ln - lo_ln > LUXEMBURG_REL_TOL {
            let mid = 0.5 * (lo_ln + hi_ln);
            if terms.eval(mid) > 1.0 {
                lo_ln = mid;
            } else {
                hi_ln = mid;
            }
            n += 1;
            if n > LUXEMBURG_MAX_ITER {
                return Err(Error::LuxemburgIterationCap(LUXEMBURG_MAX_ITER));
            }
        }
        Ok(LuxemburgNorm {
            value: math::exp(0.5 * (lo_ln + hi_ln)),
            seminorm_degenerate: false,
        })
    }

    /// Evaluate the norm-modular relations for `u`: the three ordering
    /// equivalences, the regime sandwich and the unit-modular identity.
    pub fn norm_modular_relations(&self, u: &ScalarField) -> Result<RelationReport> {
        let detailed = self.luxemburg_norm_detailed(u)?;
        let norm = detailed.value;
        let modular = self.modular(u)?;
        let (e_lo, e_hi) = self.sandwich_exponents();

        let tol = 1e-8;
        let class = |v: f64| -> i8 {
            if v < 1.0 - tol {
                -1
            } else if v > 1.0 + tol {
                1
            } else {
                0
            }
        };
        let cn = class(norm);
        let cm = class(modular);

        // sandwich bounds according to the regime of the norm
        let (lower, upper) = if cn < 0 {
            (math::powf(norm, e_hi), math::powf(norm, e_lo))
        } else if cn > 0 {
            (math::powf(norm, e_lo), math::powf(norm, e_hi))
        } else {
            (1.0, 1.0)
        };
        let slack = |v: f64| tol * (1.0 + math::abs(v));

        let unit_modular = if norm > 0.0 {
            Some(self.modular(&u.scaled(1.0 / norm))?)
        } else {
            None
        };

        Ok(RelationReport {
            norm,
            modular,
            seminorm_degenerate: detailed.seminorm_degenerate,
            unit_modular,
            equivalence_low: (cn == -1) == (cm == -1),
            equivalence_unit: (cn == 0) == (cm == 0),
            equivalence_high: (cn == 1) == (cm == 1),
            sandwich_lower: modular >= lower - slack(lower),
            sandwich_upper: modular <= upper + slack(upper),
            unit_identity: unit_modular.map_or(norm == 0.0, |m| math::abs(m - 1.0) <= 1e-8),
        })
    }
}

/// Power terms `sum_i coeff_i exp(exponent_i (log s_i - log lambda))`;
/// keeping logs makes the repeated bisection evaluations one `exp` per term.
struct ModularTerms {
    coeff: Vec<f64>,
    exponent: Vec<f64>,
    log_mag: Vec<f64>,
}

impl ModularTerms {
    fn eval(&self, ln_lambda: f64) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.coeff.len() {
            let w = self.coeff[i];
            if w == 0.0 {
                continue;
            }
            let a = self.exponent[i] * (self.log_mag[i] - ln_lambda);
            if a == f64::NEG_INFINITY {
                continue;
            }
            acc += w * math::exp(a);
        }
        acc
    }
}

/// Verdicts of the norm-modular relation checks for one field.
#[derive(Debug, Clone, Copy)]
pub struct RelationReport {
    pub norm: f64,
    pub modular: f64,
    pub seminorm_degenerate: bool,
    /// `modular(u / norm)`, expected to be 1.
    pub unit_modular: Option<f64>,
    pub equivalence_low: bool,
    pub equivalence_unit: bool,
    pub equivalence_high: bool,
    pub sandwich_lower: bool,
    pub sandwich_upper: bool,
    pub unit_identity: bool,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.equivalence_low
            && self.equivalence_unit
            && self.equivalence_high
            && self.sandwich_lower
            && self.sandwich_upper
            && self.unit_identity
    }
}

/// The four norms of the ambient Sobolev space for one field.
#[derive(Debug, Clone, Copy)]
pub struct SobolevNorms {
    /// `‖u‖_H` of the nodal values.
    pub value: f64,
    /// `‖∇u‖_H`, which equals the homogeneous norm `‖u‖_{1,H,0}`.
    pub gradient: f64,
    /// `‖u‖_{1,H} = ‖u‖_H + ‖∇u‖_H`.
    pub full: f64,
}

impl SobolevNorms {
    pub fn norm_1h0(&self) -> f64 {
        self.gradient
    }
}

pub fn sobolev_norms(cfg: &ProblemConfig, u: &ScalarField) -> Result<SobolevNorms> {
    let value_spec = ModularSpec::double_phase_from(cfg);
    let grad_spec = ModularSpec::double_phase_from(cfg).on_gradient();
    let value = value_spec.luxemburg_norm(u)?;
    let gradient = grad_spec.luxemburg_norm(u)?;
    Ok(SobolevNorms {
        value,
        gradient,
        full: value + gradient,
    })
}

/// Shorthand for the homogeneous norm `‖u‖_{1,H,0} = ‖∇u‖_H`.
pub fn norm_1h0(cfg: &ProblemConfig, u: &ScalarField) -> Result<f64> {
    ModularSpec::double_phase_from(cfg)
        .on_gradient()
        .luxemburg_norm(u)
}

/// Empirical lower bounds for the Poincare constants over a sample set.
#[derive(Debug, Clone, Copy)]
pub struct PoincareDiagnostic {
    /// max over samples of `ϱ_p(u) / ϱ_p(∇u)`.
    pub modular_ratio_max: f64,
    /// max over samples of `‖u‖_H / ‖∇u‖_H`.
    pub norm_ratio_max: f64,
    pub samples: usize,
}

pub fn poincare_diagnostic(
    cfg: &ProblemConfig,
    samples: &[ScalarField],
) -> Result<PoincareDiagnostic> {
    let p_value = ModularSpec::var_exp(cfg.p.clone());
    let p_gradient = ModularSpec::var_exp(cfg.p.clone()).on_gradient();
    let h_value = ModularSpec::double_phase_from(cfg);
    let h_gradient = ModularSpec::double_phase_from(cfg).on_gradient();

    let mut modular_ratio_max = 0.0f64;
    let mut norm_ratio_max = 0.0f64;
    for u in samples {
        if u.is_zero() {
            return Err(Error::ZeroField);
        }
        if !u.is_dirichlet() {
            return Err(Error::NotDirichlet);
        }
        let grad_modular = p_gradient.modular(u)?;
        let grad_norm = h_gradient.luxemburg_norm(u)?;
        if grad_modular <= 0.0 || grad_norm <= 0.0 {
            // a nonzero Dirichlet field with zero gradient cannot exist on a
            // connected grid
            return Err(Error::Internal("zero gradient for nonzero Dirichlet field"));
        }
        modular_ratio_max = modular_ratio_max.max(p_value.modular(u)? / grad_modular);
        norm_ratio_max = norm_ratio_max.max(h_value.luxemburg_norm(u)? / grad_norm);
    }
    Ok(PoincareDiagnostic {
        modular_ratio_max,
        norm_ratio_max,
        samples: samples.len(),
    })
}
