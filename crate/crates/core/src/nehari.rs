//! Projections onto the Nehari manifold and its sign-changing subset.
//!
//! For a nonzero field `u` the fibering map `k_u(t) = φ(tu)` has a unique
//! interior maximum `t_u` under the standing hypotheses; `t_u u` is the ray
//! projection onto the manifold `{⟨φ'(u), u⟩ = 0}`. The root solve runs on
//! the normalized slope `k_u'(t) / t^{q_+ - 1}`, whose integrand is
//! decreasing in `t`, so bisection between a sign change is globally safe.
//!
//! Sign-changing fields are projected by scaling their parts separately:
//! `(s, t) ↦ s w^+ - t w^-` with both fibering equations zeroed by
//! alternating scalar solves.

use alloc::vec::Vec;

use crate::energy::{pairing, Functional, Truncation};
use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{gradient, ScalarField, Sign};

/// Relative tolerance of the ray-projection bisection.
pub const RAY_REL_TOL: f64 = 1e-10;
/// Residual tolerance of the pair projection, relative to the energy scale.
pub const PAIR_REL_TOL: f64 = 1e-8;
const MAX_EXPANSIONS: usize = 100;
const MAX_SWEEPS: usize = 500;

/// Per-cell data of one ray `t ↦ t u`: gradient magnitudes and truncated
/// quadrature values. All fibering quantities are single passes over this.
pub struct RayCache<'a> {
    fnl: &'a Functional,
    gnorm: Vec<f64>,
    z: Vec<f64>,
}

impl<'a> RayCache<'a> {
    pub fn new(fnl: &'a Functional, u: &ScalarField, trunc: Truncation) -> Result<Self> {
        if u.grid() != fnl.grid() {
            return Err(Error::GridMismatch);
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("field"));
        }
        if u.is_zero() {
            return Err(Error::ZeroField);
        }
        let quad = gradient(u);
        let gnorm = (0..quad.cell_count())
            .map(|c| quad.gradient_norm(c))
            .collect();
        let z = quad.values().iter().map(|&v| trunc.apply(v)).collect();
        Ok(RayCache { fnl, gnorm, z })
    }

    /// `k(t) = φ(tu)` for `t >= 0`.
    pub fn k(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let m = self.fnl.cell_measure();
        let mut acc = 0.0;
        for c in 0..self.gnorm.len() {
            let g = t * self.gnorm[c];
            if g > 0.0 {
                acc += math::powf(g, self.fnl.p[c]) / self.fnl.p[c]
                    + self.fnl.mu[c] * math::powf(g, self.fnl.q[c]) / self.fnl.q[c];
            }
            acc -= self.fnl.source.antiderivative(c, t * self.z[c]);
        }
        acc * m
    }

    /// `k'(t) = ⟨φ'(tu), u⟩` for `t > 0`.
    pub fn k_prime(&self, t: f64) -> f64 {
        let m = self.fnl.cell_measure();
        let mut acc = 0.0;
        for c in 0..self.gnorm.len() {
            let gn = self.gnorm[c];
            if gn > 0.0 {
                let g = t * gn;
                acc += math::powf(g, self.fnl.p[c] - 1.0) * gn
                    + self.fnl.mu[c] * math::powf(g, self.fnl.q[c] - 1.0) * gn;
            }
            let z = self.z[c];
            if z != 0.0 {
                acc -= self.fnl.source.f(c, t * z) * z;
            }
        }
        acc * m
    }

    /// `k'(t) / t^{q_+ - 1}`, assembled cellwise so large `t` cannot
    /// overflow through the operator part.
    pub fn normalized_slope(&self, t: f64) -> f64 {
        let q_plus = self.fnl.q_plus();
        let m = self.fnl.cell_measure();
        let tail = math::powf(t, 1.0 - q_plus);
        let mut acc = 0.0;
        for c in 0..self.gnorm.len() {
            let gn = self.gnorm[c];
            if gn > 0.0 {
                acc += math::powf(t, self.fnl.p[c] - q_plus) * math::powf(gn, self.fnl.p[c])
                    + self.fnl.mu[c]
                        * math::powf(t, self.fnl.q[c] - q_plus)
                        * math::powf(gn, self.fnl.q[c]);
            }
            let z = self.z[c];
            if z != 0.0 {
                acc -= self.fnl.source.f(c, t * z) * z * tail;
            }
        }
        acc * m
    }

    /// Unique root of the fibering derivative: expand a bracket around
    /// `t = 1` until the normalized slope changes sign, then bisect.
    pub fn project(&self) -> Result<f64> {
        let g1 = self.normalized_slope(1.0);
        if g1 == 0.0 {
            return Ok(1.0);
        }
        let mut lo = 1.0f64;
        let mut hi = 1.0f64;
        if g1 > 0.0 {
            let mut ok = false;
            for _ in 0..MAX_EXPANSIONS {
                hi *= 2.0;
                if self.normalized_slope(hi) < 0.0 {
                    ok = true;
                    break;
                }
                lo = hi;
            }
            if !ok {
                return Err(Error::NehariBracketFailure {
                    expansions: MAX_EXPANSIONS,
                    lo: 1.0,
                    hi,
                });
            }
        } else {
            let mut ok = false;
            for _ in 0..MAX_EXPANSIONS {
                lo *= 0.5;
                if self.normalized_slope(lo) > 0.0 {
                    ok = true;
                    break;
                }
                hi = lo;
            }
            if !ok {
                return Err(Error::NehariBracketFailure {
                    expansions: MAX_EXPANSIONS,
                    lo,
                    hi: 1.0,
                });
            }
        }
        let mut n = 0usize;
        while hi - lo > RAY_REL_TOL * lo {
            let mid = 0.5 * (lo + hi);
            if self.normalized_slope(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            n += 1;
            if n > 4 * MAX_EXPANSIONS {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// `(k_u(t), k_u'(t))` of the full functional along the ray of `u`.
pub fn fibering(fnl: &Functional, u: &ScalarField, t: f64) -> Result<(f64, f64)> {
    let cache = RayCache::new(fnl, u, Truncation::None)?;
    Ok((cache.k(t), cache.k_prime(t)))
}

#[derive(Debug, Clone, Copy)]
pub struct FiberingSample {
    pub t: f64,
    pub k: f64,
    pub k_prime: f64,
}

/// Sampled fibering profile along an increasing positive `t` grid.
pub fn fibering_profile(
    fnl: &Functional,
    u: &ScalarField,
    t_grid: &[f64],
) -> Result<Vec<FiberingSample>> {
    let cache = RayCache::new(fnl, u, Truncation::None)?;
    Ok(t_grid
        .iter()
        .map(|&t| FiberingSample {
            t,
            k: cache.k(t),
            k_prime: cache.k_prime(t),
        })
        .collect())
}

/// Ray scaling `t_u` with `t_u u` on the Nehari manifold of the requested
/// functional.
pub fn project_ray(fnl: &Functional, u: &ScalarField, trunc: Truncation) -> Result<f64> {
    RayCache::new(fnl, u, trunc)?.project()
}

/// Per-cell data of the two-parameter family `(s, t) ↦ s w^+ - t w^-`.
pub struct PairCache<'a> {
    fnl: &'a Functional,
    dim: usize,
    /// cell gradients of `w^+` and of `w^-` (both parts nonnegative)
    gp: Vec<f64>,
    gm: Vec<f64>,
    /// cell averages of `w^+` and `w^-`
    ap: Vec<f64>,
    am: Vec<f64>,
}

/// Result of the alternating pair projection.
#[derive(Debug, Clone, Copy)]
pub struct PairScaling {
    pub s: f64,
    pub t: f64,
    /// `⟨φ'(s w^+ - t w^-), w^+⟩` at the solution.
    pub residual_plus: f64,
    /// `⟨φ'(s w^+ - t w^-), -w^-⟩` at the solution.
    pub residual_minus: f64,
    pub sweeps: usize,
}

impl<'a> PairCache<'a> {
    pub fn new(fnl: &'a Functional, w: &ScalarField) -> Result<Self> {
        if w.grid() != fnl.grid() {
            return Err(Error::GridMismatch);
        }
        if !w.is_finite() {
            return Err(Error::NonFinite("field"));
        }
        let wp = w.truncate(Sign::Positive);
        let wm = w.truncate(Sign::Negative);
        if wp.is_zero() || wm.is_zero() {
            return Err(Error::ZeroField);
        }
        let qp = gradient(&wp);
        let qm = gradient(&wm);
        let dim = fnl.grid().dim();
        Ok(PairCache {
            fnl,
            dim,
            gp: (0..qp.cell_count())
                .flat_map(|c| qp.gradient(c).to_vec())
                .collect(),
            gm: (0..qm.cell_count())
                .flat_map(|c| qm.gradient(c).to_vec())
                .collect(),
            ap: qp.values().to_vec(),
            am: qm.values().to_vec(),
        })
    }

    /// Both fibering residuals at `(s, t)`:
    /// `(⟨φ'(v), w^+⟩, ⟨φ'(v), -w^-⟩)` with `v = s w^+ - t w^-`.
    pub fn residuals(&self, s: f64, t: f64) -> (f64, f64) {
        let m = self.fnl.cell_measure();
        let mut r1 = 0.0;
        let mut r2 = 0.0;
        let n_cells = self.ap.len();
        for c in 0..n_cells {
            let base = c * self.dim;
            let mut gn2 = 0.0;
            let mut dot_p = 0.0;
            let mut dot_m = 0.0;
            for a in 0..self.dim {
                let g = s * self.gp[base + a] - t * self.gm[base + a];
                gn2 += g * g;
                dot_p += g * self.gp[base + a];
                dot_m += g * self.gm[base + a];
            }
            if gn2 > 0.0 {
                let gn = math::sqrt(gn2);
                let coef = math::powf(gn, self.fnl.p[c] - 2.0)
                    + self.fnl.mu[c] * math::powf(gn, self.fnl.q[c] - 2.0);
                r1 += coef * dot_p;
                r2 -= coef * dot_m;
            }
            let z = s * self.ap[c] - t * self.am[c];
            let fv = self.fnl.source.f(c, z);
            r1 -= fv * self.ap[c];
            r2 += fv * self.am[c];
        }
        (r1 * m, r2 * m)
    }

    /// Energy magnitude `|I_p| + |I_q| + |F|` at `(s, t)`, the residual
    /// normalization scale.
    pub fn scale(&self, s: f64, t: f64) -> f64 {
        let m = self.fnl.cell_measure();
        let mut i_p = 0.0;
        let mut i_q = 0.0;
        let mut f_term = 0.0;
        for c in 0..self.ap.len() {
            let base = c * self.dim;
            let mut gn2 = 0.0;
            for a in 0..self.dim {
                let g = s * self.gp[base + a] - t * self.gm[base + a];
                gn2 += g * g;
            }
            if gn2 > 0.0 {
                let gn = math::sqrt(gn2);
                i_p += math::powf(gn, self.fnl.p[c]) / self.fnl.p[c];
                i_q += self.fnl.mu[c] * math::powf(gn, self.fnl.q[c]) / self.fnl.q[c];
            }
            f_term += self
                .fnl
                .source
                .antiderivative(c, s * self.ap[c] - t * self.am[c]);
        }
        (i_p + i_q + math::abs(f_term)) * m
    }

    /// `φ(s w^+ - t w^-)`.
    pub fn phi(&self, s: f64, t: f64) -> f64 {
        let m = self.fnl.cell_measure();
        let mut acc = 0.0;
        for c in 0..self.ap.len() {
            let base = c * self.dim;
            let mut gn2 = 0.0;
            for a in 0..self.dim {
                let g = s * self.gp[base + a] - t * self.gm[base + a];
                gn2 += g * g;
            }
            if gn2 > 0.0 {
                let gn = math::sqrt(gn2);
                acc += math::powf(gn, self.fnl.p[c]) / self.fnl.p[c]
                    + self.fnl.mu[c] * math::powf(gn, self.fnl.q[c]) / self.fnl.q[c];
            }
            acc -= self
                .fnl
                .source
                .antiderivative(c, s * self.ap[c] - t * self.am[c]);
        }
        acc * m
    }

    /// Alternating scalar solves of the coupled system, starting from the
    /// decoupled ray projections `(s0, t0)`.
    pub fn solve(&self, s0: f64, t0: f64) -> Result<PairScaling> {
        let q_plus = self.fnl.q_plus();
        let mut s = s0;
        let mut t = t0;
        for sweep in 1..=MAX_SWEEPS {
            // normalized residuals inherit the decreasing structure of the
            // fibering slope in their own variable
            let t_now = t;
            let s_now = s;
            s = bracketed_root(
                |x| self.residuals(x, t_now).0 / math::powf(x, q_plus - 1.0),
                s,
            )?;
            t = bracketed_root(
                |x| self.residuals(s_now, x).1 / math::powf(x, q_plus - 1.0),
                t,
            )?;
            let (r1, r2) = self.residuals(s, t);
            let tol = PAIR_REL_TOL * self.scale(s, t);
            if math::abs(r1) <= tol && math::abs(r2) <= tol {
                return Ok(PairScaling {
                    s,
                    t,
                    residual_plus: r1,
                    residual_minus: r2,
                    sweeps: sweep,
                });
            }
        }
        let (r1, r2) = self.residuals(s, t);
        Err(Error::PairProjectionStalled {
            sweeps: MAX_SWEEPS,
            residual_plus: r1,
            residual_minus: r2,
        })
    }
}

/// Pair scalings `(s, t)` putting both parts of `w` on the Nehari manifold
/// of the coupled field `s w^+ - t w^-`.
pub fn project_pair(fnl: &Functional, w: &ScalarField) -> Result<PairScaling> {
    let cache = PairCache::new(fnl, w)?;
    let wp = w.truncate(Sign::Positive);
    let wm_neg = w.truncate(Sign::Negative).scaled(-1.0);
    let s0 = project_ray(fnl, &wp, Truncation::None)?;
    let t0 = project_ray(fnl, &wm_neg, Truncation::None)?;
    cache.solve(s0, t0)
}

/// Scalar root finder on a decreasing bracket: geometric expansion around
/// `start`, then Illinois-damped regula falsi inside the bracket.
fn bracketed_root(f: impl Fn(f64) -> f64, start: f64) -> Result<f64> {
    let start = if start > 0.0 && start.is_finite() {
        start
    } else {
        1.0
    };
    let f_start = f(start);
    if f_start == 0.0 {
        return Ok(start);
    }
    let mut lo = start;
    let mut hi = start;
    let mut f_lo = f_start;
    let mut f_hi = f_start;
    if f_start > 0.0 {
        let mut ok = false;
        for _ in 0..MAX_EXPANSIONS {
            hi *= 2.0;
            f_hi = f(hi);
            if f_hi < 0.0 {
                ok = true;
                break;
            }
            lo = hi;
            f_lo = f_hi;
        }
        if !ok {
            return Err(Error::NehariBracketFailure {
                expansions: MAX_EXPANSIONS,
                lo: start,
                hi,
            });
        }
    } else {
        let mut ok = false;
        for _ in 0..MAX_EXPANSIONS {
            lo *= 0.5;
            f_lo = f(lo);
            if f_lo > 0.0 {
                ok = true;
                break;
            }
            hi = lo;
            f_hi = f_lo;
        }
        if !ok {
            return Err(Error::NehariBracketFailure {
                expansions: MAX_EXPANSIONS,
                lo,
                hi: start,
            });
        }
    }

    // Illinois: keep the bracket, damp the stagnant side
    let mut side = 0i8;
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi {
            break;
        }
        let denom = f_lo - f_hi;
        let mut x = if denom != 0.0 && denom.is_finite() {
            (lo * (-f_hi) + hi * f_lo) / denom
        } else {
            0.5 * (lo + hi)
        };
        if !(x > lo && x < hi) {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if fx > 0.0 {
            lo = x;
            f_lo = fx;
            if side == 1 {
                f_hi *= 0.5;
            }
            side = 1;
        } else if fx < 0.0 {
            hi = x;
            f_hi = fx;
            if side == -1 {
                f_lo *= 0.5;
            }
            side = -1;
        } else {
            return Ok(x);
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A field together with its Nehari data: scalings and the manifold
/// residuals of the whole field and of both parts.
#[derive(Debug, Clone)]
pub struct NehariState {
    pub field: ScalarField,
    pub ray_scaling: Option<f64>,
    pub pair_scaling: Option<(f64, f64)>,
    /// `⟨φ'(w), w⟩`
    pub residual_whole: f64,
    /// `⟨φ'(w), w^+⟩`
    pub residual_plus: f64,
    /// `⟨φ'(w), -w^-⟩`
    pub residual_minus: f64,
}

impl NehariState {
    /// Project along the ray of `u` under the requested functional.
    pub fn from_ray(fnl: &Functional, u: &ScalarField, trunc: Truncation) -> Result<Self> {
        let t_u = project_ray(fnl, u, trunc)?;
        let field = u.scaled(t_u);
        let mut state = Self::residuals_of(fnl, field, trunc)?;
        state.ray_scaling = Some(t_u);
        Ok(state)
    }

    /// Project the parts of a sign-changing field.
    pub fn from_pair(fnl: &Functional, w: &ScalarField) -> Result<Self> {
        let scaling = project_pair(fnl, w)?;
        let mut field = w.truncate(Sign::Positive).scaled(scaling.s);
        field.add_scaled(-scaling.t, &w.truncate(Sign::Negative))?;
        let mut state = Self::residuals_of(fnl, field, Truncation::None)?;
        state.pair_scaling = Some((scaling.s, scaling.t));
        Ok(state)
    }

    fn residuals_of(fnl: &Functional, field: ScalarField, trunc: Truncation) -> Result<Self> {
        let rv = fnl.residual(&field, trunc)?;
        let plus = field.truncate(Sign::Positive);
        let minus_neg = field.truncate(Sign::Negative).scaled(-1.0);
        Ok(NehariState {
            residual_whole: pairing(&rv, &field)?,
            residual_plus: pairing(&rv, &plus)?,
            residual_minus: pairing(&rv, &minus_neg)?,
            field,
            ray_scaling: None,
            pair_scaling: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::{ExponentField, WeightField};
    use crate::mesh::Grid;
    use crate::nonlinearity::NonlinearitySpec;
    use crate::problem::ProblemConfig;
    use alloc::vec;
    use approx::assert_relative_eq;
    use core::f64::consts::PI;

    fn config(n: usize, p: f64, q: f64, mu: f64, r: f64) -> ProblemConfig {
        let g = Grid::unit_square(n).unwrap();
        ProblemConfig::new(
            g.clone(),
            ExponentField::constant(&g, p).unwrap(),
            ExponentField::constant(&g, q).unwrap(),
            WeightField::constant(&g, mu).unwrap(),
            vec![1.0, 0.0],
            NonlinearitySpec::pure_power(ExponentField::constant(&g, r).unwrap(), 1.0).unwrap(),
        )
        .unwrap()
    }

    fn bump(g: &Grid) -> ScalarField {
        let mut u = ScalarField::from_fn(g, |x| (PI * x[0]).sin() * (PI * x[1]).sin());
        u.zero_boundary();
        u
    }

    /// Discrete `(‖∇u‖_2^2, ‖u‖_4^4)` with the same quadrature as assembly.
    fn semilinear_sums(u: &ScalarField) -> (f64, f64) {
        let quad = gradient(u);
        let m = u.grid().cell_measure();
        let mut grad2 = 0.0;
        let mut quart = 0.0;
        for c in 0..quad.cell_count() {
            let gn = quad.gradient_norm(c);
            grad2 += gn * gn;
            let v = quad.values()[c];
            quart += v * v * v * v;
        }
        (grad2 * m, quart * m)
    }

    #[test]
    fn fibering_at_zero_and_closed_form_slope() {
        let cfg = config(17, 2.0, 2.2, 0.0, 4.0);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        let cache = RayCache::new(&fnl, &u, Truncation::None).unwrap();
        assert_eq!(cache.k(0.0), 0.0);

        let (grad2, quart) = semilinear_sums(&u);
        for &t in &[0.3, 1.0, 2.5] {
            let expect = t * grad2 - t * t * t * quart;
            assert_relative_eq!(cache.k_prime(t), expect, max_relative = 1e-10);
            // normalized slope agrees with the direct quotient
            assert_relative_eq!(
                cache.normalized_slope(t),
                cache.k_prime(t) / math::powf(t, cfg.q_plus() - 1.0),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn fibering_slope_matches_central_differences() {
        let cfg = config(9, 1.8, 2.2, 0.7, 4.0);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        let cache = RayCache::new(&fnl, &u, Truncation::None).unwrap();
        for &t in &[0.5, 1.0, 2.0] {
            let eps = 1e-6 * t;
            let fd = (cache.k(t + eps) - cache.k(t - eps)) / (2.0 * eps);
            assert_relative_eq!(cache.k_prime(t), fd, max_relative = 1e-7);
        }
    }

    #[test]
    fn ray_projection_closed_form_and_scaling_law() {
        let cfg = config(17, 2.0, 2.2, 0.0, 4.0);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        let (grad2, quart) = semilinear_sums(&u);
        let closed = math::sqrt(grad2 / quart);
        let t_u = project_ray(&fnl, &u, Truncation::None).unwrap();
        assert_relative_eq!(t_u, closed, max_relative = 1e-8);

        for &s in &[0.2, 3.0, 17.5] {
            let t_su = project_ray(&fnl, &u.scaled(s), Truncation::None).unwrap();
            assert_relative_eq!(t_su, t_u / s, max_relative = 1e-8);
        }
    }

    #[test]
    fn bracket_failure_for_subcritical_source() {
        // f with growth exactly q_+ and a gradient-dominated field: the
        // normalized slope stays positive for all t
        let cfg = config(17, 2.0, 2.2, 1.0, 2.2);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        match project_ray(&fnl, &u, Truncation::None) {
            Err(Error::NehariBracketFailure { .. }) => {}
            other => panic!("expected bracket failure, got {other:?}"),
        }
    }

    #[test]
    fn fibering_profile_sign_pattern() {
        let cfg = config(17, 1.8, 2.2, 0.5, 4.0);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        let t_u = project_ray(&fnl, &u, Truncation::None).unwrap();
        let grid: Vec<f64> = (0..50)
            .map(|i| t_u * math::powf(10.0, -2.0 + 4.0 * i as f64 / 49.0))
            .collect();
        let profile = fibering_profile(&fnl, &u, &grid).unwrap();
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, s) in profile.iter().enumerate() {
            if s.t < t_u {
                assert!(s.k_prime > 0.0, "k' must be positive before t_u");
            } else {
                assert!(s.k_prime < 0.0, "k' must be negative after t_u");
            }
            if s.k > best.1 {
                best = (i, s.k);
            }
        }
        // the sampled maximum sits at the grid point nearest t_u
        let nearest = grid
            .iter()
            .enumerate()
            .min_by(|a, b| {
                math::abs(a.1 - t_u)
                    .partial_cmp(&math::abs(b.1 - t_u))
                    .unwrap()
            })
            .unwrap()
            .0;
        assert_eq!(best.0, nearest);
        // far beyond the ridge the energy is negative
        assert!(profile.last().unwrap().k < 0.0);
    }

    fn split_bumps(g: &Grid) -> ScalarField {
        // positive bump on [0, 0.5] x [0, 1], negative on [0.625, 1] x [0, 1]
        // with a one-cell dead band between the supports
        ScalarField::from_fn(g, |x| {
            if x[0] <= 0.5 {
                (2.0 * PI * x[0]).sin().max(0.0) * (PI * x[1]).sin()
            } else if x[0] >= 0.625 {
                -((PI * (x[0] - 0.625) / 0.375).sin()) * (PI * x[1]).sin()
            } else {
                0.0
            }
        })
    }

    #[test]
    fn pair_projection_decouples_for_separated_bumps() {
        let cfg = config(17, 2.0, 2.2, 0.0, 4.0);
        let fnl = Functional::new(&cfg);
        let w = split_bumps(&cfg.grid);
        let wp = w.truncate(Sign::Positive);
        let wm = w.truncate(Sign::Negative);
        assert!(!wp.is_zero() && !wm.is_zero());

        // closed forms per part
        let (g2p, q4p) = semilinear_sums(&wp);
        let (g2m, q4m) = semilinear_sums(&wm);
        let s_closed = math::sqrt(g2p / q4p);
        let t_closed = math::sqrt(g2m / q4m);

        let pair = project_pair(&fnl, &w).unwrap();
        assert_relative_eq!(pair.s, s_closed, max_relative = 1e-8);
        assert_relative_eq!(pair.t, t_closed, max_relative = 1e-8);
    }

    #[test]
    fn pair_projection_symmetry_for_odd_fields() {
        // sin(2 pi x1) sin(pi x2) is odd under reflection across x1 = 1/2;
        // with x-independent data both scalings agree
        let cfg = config(17, 1.8, 2.2, 0.6, 4.0);
        let fnl = Functional::new(&cfg);
        let mut w =
            ScalarField::from_fn(&cfg.grid, |x| (2.0 * PI * x[0]).sin() * (PI * x[1]).sin());
        w.zero_boundary();
        let pair = project_pair(&fnl, &w).unwrap();
        assert_relative_eq!(pair.s, pair.t, max_relative = 1e-8);
    }

    #[test]
    fn nehari_state_records_scalings_and_residuals() {
        let cfg = config(17, 1.8, 2.2, 0.5, 4.0);
        let fnl = Functional::new(&cfg);
        let u = bump(&cfg.grid);
        let state = NehariState::from_ray(&fnl, &u, Truncation::None).unwrap();
        let scale = fnl.energy(&state.field, Truncation::None).unwrap().scale();
        assert!(math::abs(state.residual_whole) <= 1e-8 * scale);
        assert!(state.ray_scaling.is_some());

        let mut w =
            ScalarField::from_fn(&cfg.grid, |x| (2.0 * PI * x[0]).sin() * (PI * x[1]).sin());
        w.zero_boundary();
        let state = NehariState::from_pair(&fnl, &w).unwrap();
        let scale = fnl.energy(&state.field, Truncation::None).unwrap().scale();
        assert!(math::abs(state.residual_plus) <= PAIR_REL_TOL * scale);
        assert!(math::abs(state.residual_minus) <= PAIR_REL_TOL * scale);
        // whole-field residual is the sum of the part residuals
        assert_relative_eq!(
            state.residual_whole,
            state.residual_plus + state.residual_minus,
            max_relative = 1e-9,
            epsilon = 1e-12 * scale
        );
    }

    #[test]
    fn zero_field_is_rejected() {
        let cfg = config(9, 1.8, 2.2, 0.5, 4.0);
        let fnl = Functional::new(&cfg);
        let zero = ScalarField::zeros(&cfg.grid);
        assert!(matches!(
            project_ray(&fnl, &zero, Truncation::None),
            Err(Error::ZeroField)
        ));
        assert!(matches!(fibering(&fnl, &zero, 1.0), Err(Error::ZeroField)));
        // a one-signed field cannot be pair projected
        let b = bump(&cfg.grid);
        assert!(matches!(project_pair(&fnl, &b), Err(Error::ZeroField)));
    }
}
