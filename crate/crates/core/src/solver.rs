//! Computation of the three solutions: constant-sign ground states of the
//! truncated functionals and a sign-changing minimizer over the pair
//! manifold, via preconditioned descent with manifold projection after
//! every accepted step.
//!
//! The line search compares values of the *projected* iterates: the ray
//! (or pair) projection is a maximum along its scaling directions, and the
//! projection of the current iterate is the iterate itself, so sufficient
//! decrease on projected values gives monotone energies along the manifold.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::energy::{pairing, EnergyBreakdown, Functional, ResidualVector, Truncation};
use crate::error::{Error, Result};
use crate::hypotheses::{
    check_f_hypotheses, check_h1, default_t_grid, default_x_samples, HypothesisReport,
};
use crate::laplacian::InverseLaplacian;
use crate::math;
use crate::mesh::{connected_components, Grid, ScalarField, Sign};
use crate::modular::{norm_1h0, ModularSpec};
use crate::nehari::{PairCache, RayCache};
use crate::problem::ProblemConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preconditioner {
    /// Raw dual-vector step (mesh dependent; diagnostics only).
    Identity,
    /// Factorized inverse of the discrete Dirichlet Laplacian.
    InverseLaplacian,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub max_iterations: usize,
    /// Relative dual-residual tolerance.
    pub tolerance: f64,
    /// First backtracking trial step.
    pub step0: f64,
    /// Backtracking shrink factor.
    pub shrink: f64,
    /// Sufficient-decrease constant.
    pub armijo: f64,
    pub preconditioner: Preconditioner,
    /// Override for the constant-sign initial guess (negated internally for
    /// the negative solve when it is the default bump).
    pub guess: Option<ScalarField>,
    /// Override for the sign-changing initial guess.
    pub guess_sign_changing: Option<ScalarField>,
    pub seed: u64,
    /// Random restarts after a nodal collapse.
    pub max_restarts: usize,
    /// Nodal-domain threshold relative to `max|u|`.
    pub nodal_threshold_factor: f64,
    /// Use the smoothed kernel in descent directions when `p_- < 2`.
    pub regularized_step: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 20_000,
            tolerance: 1e-6,
            step0: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
            preconditioner: Preconditioner::InverseLaplacian,
            guess: None,
            guess_sign_changing: None,
            seed: 0,
            max_restarts: 3,
            nodal_threshold_factor: 1e-6,
            regularized_step: true,
        }
    }
}

/// Nodal-domain counts at the reported threshold.
#[derive(Debug, Clone, Copy)]
pub struct NodalSummary {
    pub positive: usize,
    pub negative: usize,
    pub threshold: f64,
}

/// Everything recorded about one converged (or stalled) solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub field: ScalarField,
    pub converged: bool,
    pub iterations: usize,
    /// Dual norm of the final residual: `sqrt(⟨r, P r⟩)`.
    pub residual_norm: f64,
    /// Energy magnitude `|I_p| + |I_q| + |F|` normalizing the tolerance.
    pub scale: f64,
    pub tolerance: f64,
    /// Breakdown of the full functional at the final field.
    pub energy: EnergyBreakdown,
    pub phi: f64,
    /// Value of the functional the descent ran on.
    pub phi_truncated: f64,
    /// Nehari residuals `⟨φ'(w), w⟩`, `⟨φ'(w), w^+⟩`, `⟨φ'(w), -w^-⟩`
    /// of the descent functional.
    pub nehari_whole: f64,
    pub nehari_plus: f64,
    pub nehari_minus: f64,
    pub ray_scaling: Option<f64>,
    pub pair_scaling: Option<(f64, f64)>,
    pub nodal: NodalSummary,
    pub sup_norm: f64,
    /// Luxemburg norm in the growth exponent of the source.
    pub growth_norm: f64,
    /// `log ‖u‖_∞ / log ‖u‖_{r(.)}`, the boundedness diagnostic.
    pub growth_ratio: f64,
    /// Functional values of the accepted iterates (monotone).
    pub phi_trace: Vec<f64>,
    pub guess_label: String,
    pub seed: u64,
    pub restarts: usize,
    pub geometry: Option<MountainPassGeometry>,
    pub hypotheses: Option<HypothesisReport>,
}

/// `‖u‖_∞`, `‖u‖_{r(.)}` and their log ratio.
#[derive(Debug, Clone, Copy)]
pub struct LinfDiagnostic {
    pub sup_norm: f64,
    pub growth_norm: f64,
    pub log_ratio: f64,
}

pub fn linf_diagnostic(cfg: &ProblemConfig, u: &ScalarField) -> Result<LinfDiagnostic> {
    let sup = u.sup_norm();
    if sup == 0.0 {
        return Ok(LinfDiagnostic {
            sup_norm: 0.0,
            growth_norm: 0.0,
            log_ratio: 0.0,
        });
    }
    let r = cfg.nonlinearity.growth_exponent()?;
    let growth_norm = ModularSpec::var_exp(r).luxemburg_norm(u)?;
    Ok(LinfDiagnostic {
        sup_norm: sup,
        growth_norm,
        log_ratio: math::ln(sup) / math::ln(growth_norm),
    })
}

/// Uniform random nodal values in `(-1, 1)` on the interior, zero boundary.
pub fn random_dirichlet_field(grid: &Grid, rng: &mut impl Rng) -> ScalarField {
    let mut u = ScalarField::zeros(grid);
    for i in 0..grid.node_count() {
        if !grid.is_boundary(i) {
            u.values_mut()[i] = rng.random_range(-1.0..1.0);
        }
    }
    u
}

/// Product-of-sines bump, the default constant-sign guess.
pub fn default_bump(grid: &Grid) -> ScalarField {
    let extents = grid.extents().to_vec();
    let mut u = ScalarField::from_fn(grid, |x| {
        let mut v = 1.0;
        for (a, &c) in x.iter().enumerate() {
            v *= math::sin(core::f64::consts::PI * c / extents[a]);
        }
        v
    });
    u.zero_boundary();
    u
}

/// Two-lobed guess with nontrivial parts, the default sign-changing seed.
pub fn default_pair_guess(grid: &Grid) -> ScalarField {
    let extents = grid.extents().to_vec();
    let mut u = ScalarField::from_fn(grid, |x| {
        let mut v = math::sin(2.0 * core::f64::consts::PI * x[0] / extents[0]);
        for (a, &c) in x.iter().enumerate().skip(1) {
            v *= math::sin(core::f64::consts::PI * c / extents[a]);
        }
        v
    });
    u.zero_boundary();
    u
}

enum Precond {
    Identity,
    Laplacian(InverseLaplacian),
}

impl Precond {
    fn build(kind: Preconditioner, grid: &Grid) -> Self {
        match kind {
            Preconditioner::Identity => Precond::Identity,
            Preconditioner::InverseLaplacian => Precond::Laplacian(InverseLaplacian::new(grid)),
        }
    }

    fn apply(&self, r: &ResidualVector) -> Result<ScalarField> {
        match self {
            Precond::Identity => Ok(r.to_field()),
            Precond::Laplacian(inv) => inv.apply(r),
        }
    }
}

enum Manifold {
    Ray(Truncation),
    Pair,
}

impl Manifold {
    fn truncation(&self) -> Truncation {
        match self {
            Manifold::Ray(t) => *t,
            Manifold::Pair => Truncation::None,
        }
    }
}

struct ProjectedIterate {
    field: ScalarField,
    phi: f64,
    ray_scaling: Option<f64>,
    pair_scaling: Option<(f64, f64)>,
}

/// Project a trial field onto the manifold and evaluate the descent
/// functional there. Pair projections warm start from the previous
/// scalings.
fn project(
    fnl: &Functional,
    manifold: &Manifold,
    trial: ScalarField,
    warm: Option<(f64, f64)>,
) -> Result<ProjectedIterate> {
    match manifold {
        Manifold::Ray(trunc) => {
            let cache = RayCache::new(fnl, &trial, *trunc)?;
            let t = cache.project()?;
            let phi = cache.k(t);
            Ok(ProjectedIterate {
                field: trial.scaled(t),
                phi,
                ray_scaling: Some(t),
                pair_scaling: None,
            })
        }
        Manifold::Pair => {
            let cache = PairCache::new(fnl, &trial)?;
            let (s0, t0) = match warm {
                Some(st) => st,
                None => {
                    let wp = trial.truncate(Sign::Positive);
                    let wm_neg = trial.truncate(Sign::Negative).scaled(-1.0);
                    (
                        RayCache::new(fnl, &wp, Truncation::None)?.project()?,
                        RayCache::new(fnl, &wm_neg, Truncation::None)?.project()?,
                    )
                }
            };
            let pair = cache.solve(s0, t0)?;
            let mut field = trial.truncate(Sign::Positive).scaled(pair.s);
            field.add_scaled(-pair.t, &trial.truncate(Sign::Negative))?;
            Ok(ProjectedIterate {
                phi: cache.phi(pair.s, pair.t),
                field,
                ray_scaling: None,
                pair_scaling: Some((pair.s, pair.t)),
            })
        }
    }
}

struct DescentOutcome {
    field: ScalarField,
    converged: bool,
    iterations: usize,
    residual_norm: f64,
    scale: f64,
    phi_trace: Vec<f64>,
    ray_scaling: Option<f64>,
    pair_scaling: Option<(f64, f64)>,
}

fn descend(
    fnl: &Functional,
    precond: &Precond,
    scfg: &SolverConfig,
    start: ScalarField,
    manifold: &Manifold,
) -> Result<DescentOutcome> {
    let trunc = manifold.truncation();
    let p_min = fnl.p.iter().fold(f64::INFINITY, |m, &v| m.min(v));

    let mut iterate = project(fnl, manifold, start, None)?;
    let mut trace = alloc::vec![iterate.phi];
    let mut alpha_prev = scfg.step0;
    let mut converged = false;
    let mut iterations = 0usize;
    let mut residual_norm = f64::INFINITY;
    let mut scale = 0.0f64;

    for iter in 0..scfg.max_iterations {
        iterations = iter;
        let breakdown = fnl.energy(&iterate.field, trunc)?;
        scale = breakdown.scale();
        let residual = fnl.residual(&iterate.field, trunc)?;
        let direction_exact = precond.apply(&residual)?;
        residual_norm = math::sqrt(pairing(&residual, &direction_exact)?.max(0.0));
        if residual_norm <= scfg.tolerance * scale {
            converged = true;
            break;
        }

        // descent direction, optionally through the smoothed kernel
        let mut direction = if scfg.regularized_step && p_min < 2.0 {
            let eps = 1e-10 * iterate.field.sup_norm();
            precond.apply(&fnl.residual_regularized(&iterate.field, trunc, eps)?)?
        } else {
            direction_exact.clone()
        };
        let mut slope = pairing(&residual, &direction)?;
        if !(slope > 0.0) || !slope.is_finite() {
            direction = direction_exact;
            slope = residual_norm * residual_norm;
            if !(slope > 0.0) {
                break;
            }
        }

        // backtracking on projected values
        let mut alpha = (4.0 * alpha_prev).min(scfg.step0.max(alpha_prev));
        let mut accepted: Option<(ProjectedIterate, f64)> = None;
        for _ in 0..60 {
            let mut trial = iterate.field.clone();
            trial.add_scaled(-alpha, &direction)?;
            for (v, &b) in trial
                .values_mut()
                .iter_mut()
                .zip(fnl.boundary_mask())
            {
                if b {
                    *v = 0.0;
                }
            }
            match project(fnl, manifold, trial, iterate.pair_scaling) {
                Ok(candidate) => {
                    if candidate.phi.is_finite()
                        && candidate.phi <= iterate.phi - scfg.armijo * alpha * slope
                    {
                        accepted = Some((candidate, alpha));
                        break;
                    }
                }
                // a trial that breaks the projection (collapsed part,
                // lost bracket) just shrinks the step
                Err(Error::ZeroField)
                | Err(Error::NehariBracketFailure { .. })
                | Err(Error::PairProjectionStalled { .. }) => {}
                Err(e) => return Err(e),
            }
            alpha *= scfg.shrink;
        }
        match accepted {
            Some((next, step)) => {
                iterate = next;
                trace.push(iterate.phi);
                alpha_prev = step;
            }
            None => {
                // numerically stationary: no admissible decrease left
                converged = residual_norm <= scfg.tolerance * scale;
                break;
            }
        }
    }

    Ok(DescentOutcome {
        field: iterate.field,
        converged,
        iterations,
        residual_norm,
        scale,
        phi_trace: trace,
        ray_scaling: iterate.ray_scaling,
        pair_scaling: iterate.pair_scaling,
    })
}

fn nodal_summary(u: &ScalarField, factor: f64) -> NodalSummary {
    let sup = u.sup_norm();
    if sup == 0.0 {
        return NodalSummary {
            positive: 0,
            negative: 0,
            threshold: 0.0,
        };
    }
    let threshold = factor * sup;
    let comps = connected_components(u, threshold);
    NodalSummary {
        positive: comps.positive,
        negative: comps.negative,
        threshold,
    }
}

fn build_report(
    cfg: &ProblemConfig,
    fnl: &Functional,
    scfg: &SolverConfig,
    outcome: DescentOutcome,
    trunc: Truncation,
    guess_label: String,
    restarts: usize,
) -> Result<SolveReport> {
    let field = outcome.field;
    let energy = fnl.energy(&field, Truncation::None)?;
    let phi_truncated = fnl.phi(&field, trunc)?;
    let rv = fnl.residual(&field, trunc)?;
    let plus = field.truncate(Sign::Positive);
    let minus_neg = field.truncate(Sign::Negative).scaled(-1.0);
    let linf = linf_diagnostic(cfg, &field)?;
    Ok(SolveReport {
        converged: outcome.converged,
        iterations: outcome.iterations,
        residual_norm: outcome.residual_norm,
        scale: outcome.scale,
        tolerance: scfg.tolerance,
        phi: energy.phi(),
        phi_truncated,
        nehari_whole: pairing(&rv, &field)?,
        nehari_plus: pairing(&rv, &plus)?,
        nehari_minus: pairing(&rv, &minus_neg)?,
        ray_scaling: outcome.ray_scaling,
        pair_scaling: outcome.pair_scaling,
        nodal: nodal_summary(&field, scfg.nodal_threshold_factor),
        sup_norm: field.sup_norm(),
        growth_norm: linf.growth_norm,
        growth_ratio: linf.log_ratio,
        phi_trace: outcome.phi_trace,
        guess_label,
        seed: scfg.seed,
        restarts,
        geometry: None,
        hypotheses: None,
        energy,
        field,
    })
}

/// Ground-state descent on the truncated functional. The converged field
/// must carry the requested sign up to tolerance, otherwise the solve
/// reports a sign violation.
pub fn solve_constant_sign(
    cfg: &ProblemConfig,
    scfg: &SolverConfig,
    sign: Sign,
) -> Result<SolveReport> {
    let fnl = Functional::new(cfg);
    let precond = Precond::build(scfg.preconditioner, &cfg.grid);
    let trunc = match sign {
        Sign::Positive => Truncation::Positive,
        Sign::Negative => Truncation::Negative,
    };
    let (start, label) = match (&scfg.guess, sign) {
        (Some(g), _) => (g.clone(), String::from("custom")),
        (None, Sign::Positive) => (default_bump(&cfg.grid), String::from("bump")),
        (None, Sign::Negative) => (default_bump(&cfg.grid).scaled(-1.0), String::from("-bump")),
    };

    let outcome = descend(&fnl, &precond, scfg, start, &Manifold::Ray(trunc))?;
    let report = build_report(cfg, &fnl, scfg, outcome, trunc, label, 0)?;

    if report.converged {
        let wrong = match sign {
            Sign::Positive => report.field.truncate(Sign::Negative),
            Sign::Negative => report.field.truncate(Sign::Positive),
        };
        let wrong_extreme = wrong.sup_norm();
        if !wrong.is_zero() {
            let part_norm = norm_1h0(cfg, &wrong)?;
            let total_norm = norm_1h0(cfg, &report.field)?;
            if part_norm > 1e-6 * total_norm || wrong_extreme > 1e-8 {
                return Err(Error::SignViolation {
                    part_norm,
                    total_norm,
                });
            }
        }
    }
    Ok(report)
}

/// Descent over the sign-changing pair manifold, with seeded random
/// restarts when one part collapses.
pub fn solve_sign_changing(cfg: &ProblemConfig, scfg: &SolverConfig) -> Result<SolveReport> {
    let fnl = Functional::new(cfg);
    let precond = Precond::build(scfg.preconditioner, &cfg.grid);
    let base = match &scfg.guess_sign_changing {
        Some(g) => g.clone(),
        None => default_pair_guess(&cfg.grid),
    };

    let mut last_error = None;
    for attempt in 0..=scfg.max_restarts {
        let (start, label) = if attempt == 0 {
            (
                base.clone(),
                if scfg.guess_sign_changing.is_some() {
                    String::from("custom")
                } else {
                    String::from("pair")
                },
            )
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(scfg.seed.wrapping_add(attempt as u64));
            let mut perturbed = base.clone();
            let noise = random_dirichlet_field(&cfg.grid, &mut rng);
            perturbed.add_scaled(0.3 * base.sup_norm(), &noise)?;
            (perturbed, format!("pair+restart{attempt}"))
        };

        let outcome = match descend(&fnl, &precond, scfg, start, &Manifold::Pair) {
            Ok(o) => o,
            Err(e @ Error::ZeroField) => {
                last_error = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let report = build_report(
            cfg,
            &fnl,
            scfg,
            outcome,
            Truncation::None,
            label,
            attempt,
        )?;

        // both parts must survive with nontrivial norms
        let total = norm_1h0(cfg, &report.field)?;
        let threshold = 1e-3 * total;
        let mut collapsed = None;
        for sign in [Sign::Positive, Sign::Negative] {
            let part = report.field.truncate(sign);
            let part_norm = if part.is_zero() {
                0.0
            } else {
                norm_1h0(cfg, &part)?
            };
            if part_norm < threshold {
                collapsed = Some(Error::NodalCollapse {
                    part_norm,
                    threshold,
                });
            }
        }
        match collapsed {
            Some(e) => last_error = Some(e),
            None => return Ok(report),
        }
    }
    Err(last_error.unwrap_or(Error::Internal("no sign-changing attempt ran")))
}

/// Sphere probe of the mountain geometry at one radius.
#[derive(Debug, Clone, Copy)]
pub struct SphereProbe {
    pub delta: f64,
    pub min_phi: f64,
    pub min_phi_plus: f64,
    pub min_phi_minus: f64,
    pub samples: usize,
}

/// Energy decay along one ray `t ↦ φ(t u)` on a doubling grid.
#[derive(Debug, Clone)]
pub struct RayProbe {
    pub samples: Vec<(f64, f64)>,
    /// Largest sampled `t` with positive energy (the detected ridge).
    pub ridge_t: f64,
    pub first_negative_t: Option<f64>,
    /// Longest run of successive doublings with negative, decreasing energy.
    pub decreasing_doublings: usize,
}

#[derive(Debug, Clone)]
pub struct MountainPassGeometry {
    pub phi_at_zero: f64,
    pub spheres: Vec<SphereProbe>,
    pub ray: RayProbe,
}

/// Sample the mountain geometry: random Dirichlet fields scaled onto
/// `‖u‖_{1,H,0} = δ` spheres, plus energy decay along the ray of `u_far`.
pub fn mountain_pass_geometry(
    cfg: &ProblemConfig,
    u_far: &ScalarField,
    deltas: &[f64],
    samples: usize,
    seed: u64,
) -> Result<MountainPassGeometry> {
    if u_far.is_zero() {
        return Err(Error::ZeroField);
    }
    let fnl = Functional::new(cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spheres = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let mut min_phi = f64::INFINITY;
        let mut min_plus = f64::INFINITY;
        let mut min_minus = f64::INFINITY;
        for _ in 0..samples {
            let v = random_dirichlet_field(&cfg.grid, &mut rng);
            if v.is_zero() {
                continue;
            }
            let norm = norm_1h0(cfg, &v)?;
            let scaled = v.scaled(delta / norm);
            min_phi = min_phi.min(fnl.phi(&scaled, Truncation::None)?);
            min_plus = min_plus.min(fnl.phi(&scaled, Truncation::Positive)?);
            min_minus = min_minus.min(fnl.phi(&scaled, Truncation::Negative)?);
        }
        spheres.push(SphereProbe {
            delta,
            min_phi,
            min_phi_plus: min_plus,
            min_phi_minus: min_minus,
            samples,
        });
    }

    // doubling ray probe
    let cache = RayCache::new(&fnl, u_far, Truncation::None)?;
    let mut ray_samples = Vec::new();
    let mut t = 0.25;
    let mut ridge_t = 0.0;
    let mut first_negative = None;
    let mut run = 0usize;
    let mut best_run = 0usize;
    let mut prev_phi: Option<f64> = None;
    for _ in 0..40 {
        let phi = cache.k(t);
        ray_samples.push((t, phi));
        if phi > 0.0 {
            ridge_t = t;
        } else if first_negative.is_none() {
            first_negative = Some(t);
        }
        if let Some(prev) = prev_phi {
            if phi < 0.0 && phi < prev {
                run += 1;
                best_run = best_run.max(run);
            } else {
                run = 0;
            }
        }
        prev_phi = Some(phi);
        if best_run >= 6 {
            break;
        }
        t *= 2.0;
    }

    Ok(MountainPassGeometry {
        phi_at_zero: 0.0,
        spheres,
        ray: RayProbe {
            samples: ray_samples,
            ridge_t,
            first_negative_t: first_negative,
            decreasing_doublings: best_run,
        },
    })
}

/// One row of the coercivity table: a field projected onto the manifold
/// with its norm and energy.
#[derive(Debug, Clone, Copy)]
pub struct CoercivityRow {
    pub direction: usize,
    pub scale: f64,
    pub norm: f64,
    pub phi: f64,
}

/// Project perturbations of the given directions onto the manifold and
/// tabulate `(‖.‖_{1,H,0}, φ)`; a diagnostic for growth of the restricted
/// energy, not an asserted invariant.
pub fn coercivity_profile(
    cfg: &ProblemConfig,
    directions: &[ScalarField],
    scales: &[f64],
) -> Result<Vec<CoercivityRow>> {
    let fnl = Functional::new(cfg);
    let extents = cfg.grid.extents().to_vec();
    let mut rows = Vec::new();
    for (i, dir) in directions.iter().enumerate() {
        if dir.is_zero() {
            return Err(Error::ZeroField);
        }
        // higher-frequency modulation bends the ray away from `dir`
        let k = (i + 2) as f64;
        let mut eta = ScalarField::from_fn(&cfg.grid, |x| {
            let mut v = math::sin(k * core::f64::consts::PI * x[0] / extents[0]);
            for (a, &c) in x.iter().enumerate().skip(1) {
                v *= math::sin(core::f64::consts::PI * c / extents[a]);
            }
            v
        });
        eta.zero_boundary();
        for &s in scales {
            let mut v = dir.clone();
            v.add_scaled(s, &eta)?;
            if v.is_zero() {
                continue;
            }
            let cache = RayCache::new(&fnl, &v, Truncation::None)?;
            let t = cache.project()?;
            let projected = v.scaled(t);
            rows.push(CoercivityRow {
                direction: i,
                scale: s,
                norm: norm_1h0(cfg, &projected)?,
                phi: cache.k(t),
            });
        }
    }
    Ok(rows)
}

/// The three solutions with shared hypothesis and geometry diagnostics.
#[derive(Debug, Clone)]
pub struct ThreeSolutions {
    pub positive: SolveReport,
    pub negative: SolveReport,
    pub sign_changing: SolveReport,
    pub hypotheses: HypothesisReport,
    pub geometry: MountainPassGeometry,
}

/// Run the full pipeline: hypothesis checks, geometry diagnostics and the
/// three solves. Hypothesis failures do not abort here; callers decide
/// whether to refuse (the CLI does unless forced).
pub fn solve_three(cfg: &ProblemConfig, scfg: &SolverConfig) -> Result<ThreeSolutions> {
    let mut hypotheses = check_h1(cfg);
    hypotheses.merge(check_f_hypotheses(
        &cfg.nonlinearity,
        cfg,
        &default_t_grid(),
        &default_x_samples(&cfg.grid, 3),
    )?);

    let geometry = mountain_pass_geometry(
        cfg,
        &default_bump(&cfg.grid),
        &[0.1],
        200,
        scfg.seed,
    )?;

    let mut positive = solve_constant_sign(cfg, scfg, Sign::Positive)?;
    let mut negative = solve_constant_sign(cfg, scfg, Sign::Negative)?;
    let mut sign_changing = solve_sign_changing(cfg, scfg)?;
    for report in [&mut positive, &mut negative, &mut sign_changing] {
        report.geometry = Some(geometry.clone());
        report.hypotheses = Some(hypotheses.clone());
    }
    Ok(ThreeSolutions {
        positive,
        negative,
        sign_changing,
        hypotheses,
        geometry,
    })
}
