//! Parametric right-hand side families `f(x, t)` with closed-form
//! antiderivatives `F(x, t)`.
//!
//! Three families cover the test range: a pure power, a sum of two powers,
//! and a piecewise power with logarithmic enhancement beyond `|t| = 1`
//! (distinct exponents on the two tails).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::math;
use crate::mesh::Grid;

#[derive(Debug, Clone, PartialEq)]
pub enum NonlinearitySpec {
    /// `f(x, t) = coeff * |t|^{r(x)-2} t`
    PurePower { r: ExponentField, coeff: f64 },
    /// `f(x, t) = c1 |t|^{r1(x)-2} t + c2 |t|^{r2(x)-2} t`
    PowerSum {
        r1: ExponentField,
        r2: ExponentField,
        c1: f64,
        c2: f64,
    },
    /// Power core `|t|^{a(x)-2} t` on `|t| < 1`, log-enhanced tails
    /// `|t|^{r_i(x)-2} t [1 + log|t|]` for `t >= 1` (`r2`) and `t <= -1`
    /// (`r1`). The growth margin widens the reported growth exponent so the
    /// logarithm stays dominated.
    LogPower {
        r1: ExponentField,
        r2: ExponentField,
        a: ExponentField,
        growth_margin: f64,
    },
}

impl NonlinearitySpec {
    pub fn pure_power(r: ExponentField, coeff: f64) -> Result<Self> {
        if !(coeff > 0.0) || !coeff.is_finite() {
            return Err(Error::Invalid {
                what: "nonlinearity",
                detail: format!("coefficient {coeff} must be positive and finite"),
            });
        }
        Ok(NonlinearitySpec::PurePower { r, coeff })
    }

    pub fn power_sum(r1: ExponentField, r2: ExponentField, c1: f64, c2: f64) -> Result<Self> {
        if r1.grid() != r2.grid() {
            return Err(Error::GridMismatch);
        }
        for c in [c1, c2] {
            if !(c >= 0.0) || !c.is_finite() {
                return Err(Error::Invalid {
                    what: "nonlinearity",
                    detail: format!("coefficient {c} must be nonnegative and finite"),
                });
            }
        }
        if c1 + c2 <= 0.0 {
            return Err(Error::Invalid {
                what: "nonlinearity",
                detail: String::from("at least one coefficient must be positive"),
            });
        }
        Ok(NonlinearitySpec::PowerSum { r1, r2, c1, c2 })
    }

    pub fn log_power(
        r1: ExponentField,
        r2: ExponentField,
        a: ExponentField,
        growth_margin: f64,
    ) -> Result<Self> {
        if r1.grid() != r2.grid() || r1.grid() != a.grid() {
            return Err(Error::GridMismatch);
        }
        if !(growth_margin > 0.0) || !growth_margin.is_finite() {
            return Err(Error::Invalid {
                what: "nonlinearity",
                detail: format!("growth margin {growth_margin} must be positive"),
            });
        }
        Ok(NonlinearitySpec::LogPower {
            r1,
            r2,
            a,
            growth_margin,
        })
    }

    pub fn grid(&self) -> &Grid {
        match self {
            NonlinearitySpec::PurePower { r, .. } => r.grid(),
            NonlinearitySpec::PowerSum { r1, .. } => r1.grid(),
            NonlinearitySpec::LogPower { r1, .. } => r1.grid(),
        }
    }

    /// The exponent `r(x)` of the growth bound `|f| <= C (1 + |t|^{r(x)-1})`.
    pub fn growth_exponent(&self) -> Result<ExponentField> {
        match self {
            NonlinearitySpec::PurePower { r, .. } => Ok(r.clone()),
            NonlinearitySpec::PowerSum { r1, r2, .. } => r1.pointwise_max(r2),
            NonlinearitySpec::LogPower {
                r1,
                r2,
                growth_margin,
                ..
            } => r1.pointwise_max(r2)?.shifted(*growth_margin),
        }
    }

    /// Evaluate `f(x, t)` with exponents interpolated at the point `x`.
    pub fn f(&self, x: &[f64], t: f64) -> f64 {
        match self {
            NonlinearitySpec::PurePower { r, coeff } => f_power(r.interpolate(x), *coeff, t),
            NonlinearitySpec::PowerSum { r1, r2, c1, c2 } => {
                f_power(r1.interpolate(x), *c1, t) + f_power(r2.interpolate(x), *c2, t)
            }
            NonlinearitySpec::LogPower { r1, r2, a, .. } => f_log_power(
                r1.interpolate(x),
                r2.interpolate(x),
                a.interpolate(x),
                t,
            ),
        }
    }

    /// Evaluate the antiderivative `F(x, t)` of `f(x, .)` with `F(x, 0) = 0`.
    pub fn antiderivative(&self, x: &[f64], t: f64) -> f64 {
        match self {
            NonlinearitySpec::PurePower { r, coeff } => big_f_power(r.interpolate(x), *coeff, t),
            NonlinearitySpec::PowerSum { r1, r2, c1, c2 } => {
                big_f_power(r1.interpolate(x), *c1, t) + big_f_power(r2.interpolate(x), *c2, t)
            }
            NonlinearitySpec::LogPower { r1, r2, a, .. } => big_f_log_power(
                r1.interpolate(x),
                r2.interpolate(x),
                a.interpolate(x),
                t,
            ),
        }
    }

    /// Quadrature-point parameter table for assembly loops.
    pub(crate) fn cell_params(&self) -> CellParams {
        match self {
            NonlinearitySpec::PurePower { r, coeff } => CellParams::PurePower {
                r: r.cell_averages(),
                coeff: *coeff,
            },
            NonlinearitySpec::PowerSum { r1, r2, c1, c2 } => CellParams::PowerSum {
                r1: r1.cell_averages(),
                r2: r2.cell_averages(),
                c1: *c1,
                c2: *c2,
            },
            NonlinearitySpec::LogPower { r1, r2, a, .. } => CellParams::LogPower {
                r1: r1.cell_averages(),
                r2: r2.cell_averages(),
                a: a.cell_averages(),
            },
        }
    }
}

/// Per-cell nonlinearity parameters sampled at the quadrature points.
#[derive(Debug, Clone)]
pub(crate) enum CellParams {
    PurePower {
        r: Vec<f64>,
        coeff: f64,
    },
    PowerSum {
        r1: Vec<f64>,
        r2: Vec<f64>,
        c1: f64,
        c2: f64,
    },
    LogPower {
        r1: Vec<f64>,
        r2: Vec<f64>,
        a: Vec<f64>,
    },
}

impl CellParams {
    #[inline]
    pub fn f(&self, cell: usize, t: f64) -> f64 {
        match self {
            CellParams::PurePower { r, coeff } => f_power(r[cell], *coeff, t),
            CellParams::PowerSum { r1, r2, c1, c2 } => {
                f_power(r1[cell], *c1, t) + f_power(r2[cell], *c2, t)
            }
            CellParams::LogPower { r1, r2, a } => f_log_power(r1[cell], r2[cell], a[cell], t),
        }
    }

    #[inline]
    pub fn antiderivative(&self, cell: usize, t: f64) -> f64 {
        match self {
            CellParams::PurePower { r, coeff } => big_f_power(r[cell], *coeff, t),
            CellParams::PowerSum { r1, r2, c1, c2 } => {
                big_f_power(r1[cell], *c1, t) + big_f_power(r2[cell], *c2, t)
            }
            CellParams::LogPower { r1, r2, a } => big_f_log_power(r1[cell], r2[cell], a[cell], t),
        }
    }
}

#[inline]
fn sign_of(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `c |t|^{r-2} t`
#[inline]
fn f_power(r: f64, c: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    c * sign_of(t) * math::powf(math::abs(t), r - 1.0)
}

/// `c |t|^r / r`
#[inline]
fn big_f_power(r: f64, c: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    c * math::powf(math::abs(t), r) / r
}

/// Piecewise log-enhanced power; continuous across `|t| = 1` since
/// `log 1 = 0`.
#[inline]
fn f_log_power(r1: f64, r2: f64, a: f64, t: f64) -> f64 {
    let m = math::abs(t);
    if m < 1.0 {
        f_power(a, 1.0, t)
    } else if t >= 1.0 {
        math::powf(m, r2 - 1.0) * (1.0 + math::ln(m))
    } else {
        -math::powf(m, r1 - 1.0) * (1.0 + math::ln(m))
    }
}

/// Antiderivative of the log-enhanced family. For `|t| >= 1` and tail
/// exponent `r`:
///
/// `F = 1/a + (|t|^r - 1)/r + |t|^r log|t| / r - (|t|^r - 1)/r^2`
#[inline]
fn big_f_log_power(r1: f64, r2: f64, a: f64, t: f64) -> f64 {
    let m = math::abs(t);
    if m <= 1.0 {
        return math::powf(m, a) / a;
    }
    let r = if t >= 1.0 { r2 } else { r1 };
    let mr = math::powf(m, r);
    1.0 / a + (mr - 1.0) / r + mr * math::ln(m) / r - (mr - 1.0) / (r * r)
}
