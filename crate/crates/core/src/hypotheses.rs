//! Numerical certificates for the structural hypotheses on exponents,
//! weight and right-hand side.
//!
//! Every check emits findings with a three-valued verdict. Asymptotic
//! conditions (growth at infinity and at zero) cannot be decided from
//! samples, so their verdicts come from trend heuristics over log-spaced
//! decades and may come back inconclusive. A failed finding always carries
//! a witness sample.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exponents::ExponentField;
use crate::math;
use crate::mesh::{Grid, ScalarField};
use crate::nonlinearity::NonlinearitySpec;
use crate::problem::{sobolev_conjugate, ProblemConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Sample at which a hypothesis failed.
#[derive(Debug, Clone)]
pub struct Witness {
    pub location: Option<Vec<f64>>,
    pub t: Option<f64>,
    pub xi: Option<Vec<f64>>,
    pub detail: String,
}

impl Witness {
    pub fn at(detail: String) -> Self {
        Witness {
            location: None,
            t: None,
            xi: None,
            detail,
        }
    }

    pub fn with_location(mut self, x: &[f64]) -> Self {
        self.location = Some(x.to_vec());
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }

    pub fn with_xi(mut self, xi: &[f64]) -> Self {
        self.xi = Some(xi.to_vec());
        self
    }
}

#[derive(Debug, Clone)]
pub struct Finding {
    pub key: String,
    pub verdict: Verdict,
    pub constants: Vec<(String, f64)>,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl Finding {
    pub fn pass(key: &str) -> Self {
        Finding {
            key: String::from(key),
            verdict: Verdict::Pass,
            constants: Vec::new(),
            witness: None,
            note: None,
        }
    }

    /// Failures must name the sample that broke the hypothesis.
    pub fn fail(key: &str, witness: Witness) -> Self {
        Finding {
            key: String::from(key),
            verdict: Verdict::Fail,
            constants: Vec::new(),
            witness: Some(witness),
            note: None,
        }
    }

    pub fn inconclusive(key: &str, note: &str) -> Self {
        Finding {
            key: String::from(key),
            verdict: Verdict::Inconclusive,
            constants: Vec::new(),
            witness: None,
            note: Some(String::from(note)),
        }
    }

    pub fn with_constant(mut self, name: &str, value: f64) -> Self {
        self.constants.push((String::from(name), value));
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(String::from(note));
        self
    }
}

#[derive(Debug, Clone, Default)]
pub struct HypothesisReport {
    pub findings: Vec<Finding>,
}

impl HypothesisReport {
    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub fn merge(&mut self, other: HypothesisReport) {
        self.findings.extend(other.findings);
    }

    pub fn find(&self, key: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.key == key)
    }

    pub fn verdict(&self, key: &str) -> Option<Verdict> {
        self.find(key).map(|f| f.verdict)
    }

    pub fn constant(&self, key: &str, name: &str) -> Option<f64> {
        self.find(key)?
            .constants
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| *v)
    }

    /// True when any finding failed outright.
    pub fn hard_fail(&self) -> bool {
        self.findings.iter().any(|f| f.verdict == Verdict::Fail)
    }

    pub fn all_pass(&self) -> bool {
        self.findings.iter().all(|f| f.verdict == Verdict::Pass)
    }

    pub fn all_pass_or_inconclusive(&self) -> bool {
        !self.hard_fail()
    }

    /// Flat `key=value` serialization, one verdict per line.
    pub fn key_value_block(&self) -> String {
        let mut out = String::new();
        for f in &self.findings {
            out.push_str(&format!("hypothesis={} verdict={}", f.key, f.verdict.as_str()));
            for (name, value) in &f.constants {
                out.push_str(&format!(" {name}={value:.16e}"));
            }
            if let Some(w) = &f.witness {
                out.push_str(" witness=\"");
                if let Some(x) = &w.location {
                    out.push_str("x=(");
                    for (i, c) in x.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(&format!("{c:.6e}"));
                    }
                    out.push_str(") ");
                }
                if let Some(t) = w.t {
                    out.push_str(&format!("t={t:.6e} "));
                }
                if let Some(xi) = &w.xi {
                    out.push_str("xi=(");
                    for (i, c) in xi.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(&format!("{c:.6e}"));
                    }
                    out.push_str(") ");
                }
                out.push_str(&w.detail);
                out.push('"');
            }
            if let Some(n) = &f.note {
                out.push_str(&format!(" note=\"{n}\""));
            }
            out.push('\n');
        }
        out
    }
}

/// Critical Sobolev exponents of `p`: `p*(x) = N p / (N - p)` and the trace
/// exponent `p_*(x) = (N-1) p / (N - p)`, with an infinite sentinel where
/// `p(x) >= N`.
pub fn critical_exponents(p: &ExponentField, dim: usize) -> (ScalarField, ScalarField) {
    let n = dim as f64;
    let star = p
        .values()
        .iter()
        .map(|&v| sobolev_conjugate(v, dim))
        .collect::<Vec<_>>();
    let trace = p
        .values()
        .iter()
        .map(|&v| if v < n { (n - 1.0) * v / (n - v) } else { f64::INFINITY })
        .collect::<Vec<_>>();
    (
        ScalarField::from_values(p.grid(), star).expect("sizes match"),
        ScalarField::from_values(p.grid(), trace).expect("sizes match"),
    )
}

/// Verify the exponent/weight admissibility block: ranges, ordering,
/// subcriticality and the monotone-direction condition on `p`.
pub fn check_h1(cfg: &ProblemConfig) -> HypothesisReport {
    let mut report = HypothesisReport::default();
    let n = cfg.dim() as f64;
    let grid = &cfg.grid;

    // 1 < p(x) < N nodewise (> 1 is enforced at construction)
    let mut range = Finding::pass("h1.exponent_range")
        .with_constant("p_minus", cfg.p_minus())
        .with_constant("p_plus", cfg.p_plus());
    for (i, &pv) in cfg.p.values().iter().enumerate() {
        if pv >= n {
            range = Finding::fail(
                "h1.exponent_range",
                Witness::at(format!("p={pv} >= N={n}")).with_location(&grid.node_coord(i)),
            )
            .with_constant("p_minus", cfg.p_minus())
            .with_constant("p_plus", cfg.p_plus());
            break;
        }
    }
    report.push(range);

    // p(x) < q(x) nodewise
    let mut order = Finding::pass("h1.exponent_order");
    for (i, (&pv, &qv)) in cfg.p.values().iter().zip(cfg.q.values()).enumerate() {
        if pv >= qv {
            order = Finding::fail(
                "h1.exponent_order",
                Witness::at(format!("p={pv} >= q={qv}")).with_location(&grid.node_coord(i)),
            );
            break;
        }
    }
    report.push(order);

    // q_+ < p*_-
    let q_plus = cfg.q_plus();
    let p_star_minus = cfg.p_star_minus();
    let subcritical = if q_plus < p_star_minus {
        Finding::pass("h1.subcritical")
    } else {
        Finding::fail(
            "h1.subcritical",
            Witness::at(format!("q_plus={q_plus} >= p_star_minus={p_star_minus}")),
        )
    }
    .with_constant("q_plus", q_plus)
    .with_constant("p_star_minus", p_star_minus);
    report.push(subcritical);

    // weight bounds are enforced by construction; record them
    report.push(
        Finding::pass("h1.weight_bounded").with_constant("mu_sup", cfg.mu.max()),
    );

    report.push(monotone_direction_finding(cfg));

    let all = report.all_pass();
    report.push(if all {
        Finding::pass("h1")
    } else if report.hard_fail() {
        Finding::fail("h1", Witness::at(String::from("see h1.* findings")))
    } else {
        Finding::inconclusive("h1", "see h1.* findings")
    });
    report
}

/// Monotonicity of `p` along the configured direction, sampled on
/// grid-aligned rays. The direction must reduce to a small integer step in
/// index space, otherwise the verdict is inconclusive.
fn monotone_direction_finding(cfg: &ProblemConfig) -> Finding {
    let grid = &cfg.grid;
    let dim = grid.dim();
    let key = "h1.monotone_direction";

    // direction in index space
    let d: Vec<f64> = cfg
        .direction
        .iter()
        .zip(grid.spacing())
        .map(|(&l, &h)| l / h)
        .collect();
    let dmax = d.iter().fold(0.0f64, |m, &v| m.max(math::abs(v)));
    let unit: Vec<f64> = d.iter().map(|&v| v / dmax).collect();

    let mut step: Option<Vec<isize>> = None;
    'scale: for m in 1..=16usize {
        let mut k = vec![0isize; dim];
        for a in 0..dim {
            let v = unit[a] * m as f64;
            let r = math::round(v);
            if math::abs(v - r) > 1e-9 * m as f64 {
                continue 'scale;
            }
            k[a] = r as isize;
        }
        if k.iter().any(|&x| x != 0) {
            step = Some(k);
            break;
        }
    }
    let Some(step) = step else {
        return Finding::inconclusive(key, "direction is not resolved by grid-aligned rays");
    };

    let counts = grid.node_counts();
    let tol = 1e-12 * (1.0 + cfg.p.max());
    let n_nodes = grid.node_count();
    let mut idx = vec![0usize; dim];
    let mut rays = 0usize;

    for start in 0..n_nodes {
        grid.unflatten(start, &mut idx);
        // rays begin where stepping backwards leaves the grid
        let origin = (0..dim).any(|a| {
            let prev = idx[a] as isize - step[a];
            prev < 0 || prev >= counts[a] as isize
        });
        if !origin {
            continue;
        }
        rays += 1;
        let mut cur = idx.clone();
        let mut prev_val = cfg.p.values()[start];
        let mut ray_sign = 0i8;
        loop {
            let mut next = cur.clone();
            let mut in_bounds = true;
            for a in 0..dim {
                let v = next[a] as isize + step[a];
                if v < 0 || v >= counts[a] as isize {
                    in_bounds = false;
                    break;
                }
                next[a] = v as usize;
            }
            if !in_bounds {
                break;
            }
            let val = cfg.p.values()[grid.flatten(&next)];
            let delta = val - prev_val;
            if math::abs(delta) > tol {
                let s = if delta > 0.0 { 1i8 } else { -1i8 };
                if ray_sign == 0 {
                    ray_sign = s;
                } else if s != ray_sign {
                    let coord: Vec<f64> = next
                        .iter()
                        .zip(grid.spacing())
                        .map(|(&i, &h)| i as f64 * h)
                        .collect();
                    return Finding::fail(
                        key,
                        Witness::at(format!(
                            "p changes monotonicity along the ray (step {:?})",
                            step
                        ))
                        .with_location(&coord),
                    );
                }
            }
            prev_val = val;
            cur = next;
        }
    }
    Finding::pass(key).with_constant("rays_checked", rays as f64)
}

/// One sample point for the structure inequalities.
#[derive(Debug, Clone)]
pub struct H3Sample {
    pub x: Vec<f64>,
    pub t: f64,
    pub xi: Vec<f64>,
}

/// Seeded sample generator covering several magnitude decades.
pub fn h3_samples(cfg: &ProblemConfig, count: usize, seed: u64) -> Vec<H3Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cfg.dim();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let x: Vec<f64> = (0..dim)
            .map(|a| rng.random_range(0.0..cfg.grid.extents()[a]))
            .collect();
        let t_mag = math::powf(10.0, rng.random_range(-3.0..3.0));
        let t = if rng.random_range(0.0..1.0) < 0.5 {
            t_mag
        } else {
            -t_mag
        };
        let xi_mag = math::powf(10.0, rng.random_range(-3.0..3.0));
        let mut xi: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = math::norm(&xi);
        if norm > 0.0 {
            for c in &mut xi {
                *c *= xi_mag / norm;
            }
        }
        out.push(H3Sample { x, t, xi });
    }
    out
}

/// Instantiate the double phase operator and the right-hand side in the
/// structure inequalities and report the sharp constants on the samples:
/// smallest admissible `alpha_1`, `beta` and largest `alpha_2` (with
/// `alpha_3 = 1`). The coercivity ratio of the double phase operator is
/// the identity, so `alpha_2 = 1` must be reproduced.
pub fn check_h3_structure(cfg: &ProblemConfig, samples: &[H3Sample]) -> Result<HypothesisReport> {
    if samples.is_empty() {
        return Err(Error::Invalid {
            what: "h3 samples",
            detail: String::from("sample set is empty"),
        });
    }
    let r_field = cfg.nonlinearity.growth_exponent()?;
    let mut report = HypothesisReport::default();

    let mut alpha1 = 0.0f64;
    let mut alpha2 = f64::INFINITY;
    let mut beta = 0.0f64;
    let mut window = Finding::pass("h3.exponent_window");
    let mut saw_gradient = false;

    for s in samples {
        let p = cfg.p.interpolate(&s.x);
        let q = cfg.q.interpolate(&s.x);
        let mu = cfg.mu.interpolate(&s.x);
        let r = r_field.interpolate(&s.x);
        let p_star = sobolev_conjugate(p, cfg.dim());
        if window.verdict == Verdict::Pass && !(p < r && r < p_star) {
            window = Finding::fail(
                "h3.exponent_window",
                Witness::at(format!("need p < r < p*: p={p}, r={r}, p*={p_star}"))
                    .with_location(&s.x),
            );
        }

        let xi_norm = math::norm(&s.xi);
        let t_abs = math::abs(s.t);

        // |A| = |xi|^{p-1} + mu |xi|^{q-1} (0 at xi = 0 by convention)
        let a_norm = if xi_norm > 0.0 {
            math::powf(xi_norm, p - 1.0) + mu * math::powf(xi_norm, q - 1.0)
        } else {
            0.0
        };
        let growth_bracket = math::powf(t_abs, r * (p - 1.0) / p)
            + if xi_norm > 0.0 {
                math::powf(xi_norm, p - 1.0) + mu * math::powf(xi_norm, q - 1.0)
            } else {
                0.0
            }
            + 1.0;
        alpha1 = alpha1.max(a_norm / growth_bracket);

        // A . xi over |xi|^p + mu |xi|^q is identically one
        if xi_norm > 0.0 {
            saw_gradient = true;
            let a_dot_xi = math::powf(xi_norm, p) + mu * math::powf(xi_norm, q);
            let homo = math::powf(xi_norm, p) + mu * math::powf(xi_norm, q);
            alpha2 = alpha2.min(a_dot_xi / homo);
        }

        // |B| = |f(x, t)| against beta [ |xi|^{p/r'} + |t|^{r-1} + 1 ]
        let fv = math::abs(cfg.nonlinearity.f(&s.x, s.t));
        let b_bracket = if xi_norm > 0.0 {
            math::powf(xi_norm, p * (r - 1.0) / r)
        } else {
            0.0
        } + math::powf(t_abs, r - 1.0)
            + 1.0;
        beta = beta.max(fv / b_bracket);
    }

    report.push(window);
    report.push(
        Finding::pass("h3.a_growth").with_constant("alpha1", alpha1),
    );
    report.push(if saw_gradient {
        Finding::pass("h3.coercivity")
            .with_constant("alpha2", alpha2)
            .with_constant("alpha3", 1.0)
    } else {
        Finding::inconclusive("h3.coercivity", "all samples have xi = 0")
            .with_constant("alpha3", 1.0)
    });
    report.push(Finding::pass("h3.b_growth").with_constant("beta", beta));
    Ok(report)
}

/// Log-spaced default grid covering `[1e-6, 1e6]` in both signs.
pub fn default_t_grid() -> Vec<f64> {
    let per_decade = 4usize;
    let decades = 12usize;
    let count = decades * per_decade + 1;
    let mut grid = Vec::with_capacity(2 * count);
    for j in (0..count).rev() {
        let mag = math::powf(10.0, -6.0 + j as f64 / per_decade as f64);
        grid.push(-mag);
    }
    for j in 0..count {
        let mag = math::powf(10.0, -6.0 + j as f64 / per_decade as f64);
        grid.push(mag);
    }
    grid
}

/// Deterministic interior sample points (coarse sublattice).
pub fn default_x_samples(grid: &Grid, per_axis: usize) -> Vec<Vec<f64>> {
    let dim = grid.dim();
    let per_axis = per_axis.max(1);
    let mut points = vec![Vec::new()];
    for a in 0..dim {
        let mut next = Vec::new();
        for base in &points {
            for j in 0..per_axis {
                let frac = (j as f64 + 0.5) / per_axis as f64;
                let mut p = base.clone();
                p.push(frac * grid.extents()[a]);
                next.push(p);
            }
        }
        points = next;
    }
    points
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Increasing,
    Decreasing,
    Flat,
    Mixed,
}

fn trend(values: &[f64]) -> Trend {
    let scale = values.iter().fold(0.0f64, |m, &v| m.max(math::abs(v)));
    let tol = 1e-9 * (scale + 1e-300);
    let mut up = 0usize;
    let mut down = 0usize;
    for w in values.windows(2) {
        let d = w[1] - w[0];
        if d > tol {
            up += 1;
        } else if d < -tol {
            down += 1;
        }
    }
    match (up > 0, down > 0) {
        (true, false) => Trend::Increasing,
        (false, true) => Trend::Decreasing,
        (false, false) => Trend::Flat,
        (true, true) => Trend::Mixed,
    }
}

/// Check the growth hypotheses on the right-hand side over a log-spaced
/// `t` grid and a set of spatial samples.
pub fn check_f_hypotheses(
    spec: &NonlinearitySpec,
    cfg: &ProblemConfig,
    t_grid: &[f64],
    x_samples: &[Vec<f64>],
) -> Result<HypothesisReport> {
    if t_grid.is_empty() || x_samples.is_empty() {
        return Err(Error::Invalid {
            what: "f hypothesis samples",
            detail: String::from("empty t grid or sample set"),
        });
    }
    let mut report = HypothesisReport::default();
    let q_plus = cfg.q_plus();
    let r_field = spec.growth_exponent()?;
    let r_plus = r_field.max();
    let p_star_minus = cfg.p_star_minus();

    let mut positives: Vec<f64> = t_grid.iter().copied().filter(|&t| t > 0.0).collect();
    let mut negatives: Vec<f64> = t_grid.iter().copied().filter(|&t| t < 0.0).collect();
    positives.sort_by(|a, b| a.partial_cmp(b).unwrap());
    negatives.sort_by(|a, b| a.partial_cmp(b).unwrap());
    if positives.is_empty() || negatives.is_empty() {
        return Err(Error::Invalid {
            what: "f hypothesis samples",
            detail: String::from("t grid must cover both signs"),
        });
    }
    let t_max = positives.last().copied().unwrap();
    let t_min = positives.first().copied().unwrap();
    let span_ok = t_min <= 1e-6 * (1.0 + 1e-9) && t_max >= 1e6 * (1.0 - 1e-9);

    // f1: continuity in t, probed at the branch-sensitive points
    let mut f1 = Finding::pass("f1");
    'f1: for x in x_samples {
        for &t in &[-1.0f64, 0.0, 1.0, 0.5, -2.0] {
            let base = spec.f(x, t);
            for &d in &[1e-9, -1e-9] {
                let probe = spec.f(x, t + d);
                if math::abs(probe - base) > 1e-5 * (1.0 + math::abs(base)) {
                    f1 = Finding::fail(
                        "f1",
                        Witness::at(format!("jump {:e} at t={t}", probe - base))
                            .with_location(x)
                            .with_t(t),
                    );
                    break 'f1;
                }
            }
        }
    }
    report.push(f1);

    // f2: growth bound |f| <= C (1 + |t|^{r(x)-1}) with r_+ < p*_-
    let mut c_growth = 0.0f64;
    for x in x_samples {
        let r = r_field.interpolate(x);
        for &t in t_grid {
            let bound = 1.0 + math::powf(math::abs(t), r - 1.0);
            c_growth = c_growth.max(math::abs(spec.f(x, t)) / bound);
        }
    }
    report.push(
        if r_plus < p_star_minus {
            Finding::pass("f2")
        } else {
            Finding::fail(
                "f2",
                Witness::at(format!("r_plus={r_plus} >= p_star_minus={p_star_minus}")),
            )
        }
        .with_constant("C", c_growth)
        .with_constant("r_plus", r_plus),
    );

    // f3: F / |s|^{q_+} diverges at +-infinity; heuristic: increasing over
    // the largest decade
    let f3 = limit_finding(
        "f3",
        span_ok,
        x_samples,
        &positives,
        &negatives,
        |x, t| spec.antiderivative(x, t) / math::powf(math::abs(t), q_plus),
        LimitKind::DivergesAtInfinity,
    );
    report.push(f3);

    // f4: F / |s|^{p(x)} vanishes at zero; heuristic: decreasing to below
    // 1e-3 over the smallest decades
    let f4 = limit_finding(
        "f4",
        span_ok,
        x_samples,
        &positives,
        &negatives,
        |x, t| {
            let p = cfg.p.interpolate(x);
            spec.antiderivative(x, t) / math::powf(math::abs(t), p)
        },
        LimitKind::VanishesAtZero,
    );
    report.push(f4);

    // f5: scan the admissibility window for the largest exponents with a
    // positive liminf of (f s - q_+ F) / |s|^l on the largest decade
    match f5_window(cfg.p_minus(), cfg.dim(), r_plus) {
        Err(_) => {
            report.push(Finding::inconclusive(
                "f5",
                "growth exponent is supercritical; window undefined",
            ));
        }
        Ok((lo, hi)) => {
            let scan = |side: &[f64]| -> Option<(f64, f64)> {
                // decade of largest magnitudes on this side
                let mag_max = side
                    .iter()
                    .fold(0.0f64, |m, &t| m.max(math::abs(t)));
                let decade: Vec<f64> = side
                    .iter()
                    .copied()
                    .filter(|&t| math::abs(t) >= mag_max / 10.0)
                    .collect();
                let steps = 64usize;
                for j in (1..steps).rev() {
                    let l = lo + (hi - lo) * j as f64 / steps as f64;
                    let mut k_min = f64::INFINITY;
                    let mut ok = true;
                    'xs: for x in x_samples {
                        let mut vals: Vec<f64> = Vec::with_capacity(decade.len());
                        for &t in &decade {
                            let v = (spec.f(x, t) * t - q_plus * spec.antiderivative(x, t))
                                / math::powf(math::abs(t), l);
                            vals.push(v);
                        }
                        // sort by |t| so the trend reads toward infinity
                        let mut pairs: Vec<(f64, f64)> = decade
                            .iter()
                            .map(|&t| math::abs(t))
                            .zip(vals.iter().copied())
                            .collect();
                        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                        let ordered: Vec<f64> = pairs.iter().map(|p| p.1).collect();
                        let min = ordered.iter().fold(f64::INFINITY, |m, &v| m.min(v));
                        if !(min > 0.0) || matches!(trend(&ordered), Trend::Decreasing | Trend::Mixed)
                        {
                            ok = false;
                            break 'xs;
                        }
                        k_min = k_min.min(min);
                    }
                    if ok {
                        return Some((l, k_min));
                    }
                }
                None
            };
            match (scan(&positives), scan(&negatives)) {
                (Some((l, k_pos)), Some((l_tilde, k_neg))) => {
                    report.push(
                        Finding::pass("f5")
                            .with_constant("l", l)
                            .with_constant("l_tilde", l_tilde)
                            .with_constant("K", k_pos.min(k_neg))
                            .with_constant("window_lo", lo)
                            .with_constant("window_hi", hi),
                    );
                }
                _ => {
                    report.push(
                        Finding::fail(
                            "f5",
                            Witness::at(String::from(
                                "no exponent in the window keeps (f s - q_+ F)/|s|^l positive",
                            ))
                            .with_t(t_max),
                        )
                        .with_constant("window_lo", lo)
                        .with_constant("window_hi", hi),
                    );
                }
            }
        }
    }

    // f6: f(x, t) / |t|^{q_+ - 1} strictly increasing on each sign
    let mut f6 = Finding::pass("f6");
    'f6: for x in x_samples {
        for side in [&negatives, &positives] {
            let mut prev: Option<f64> = None;
            for &t in side.iter() {
                let v = spec.f(x, t) / math::powf(math::abs(t), q_plus - 1.0);
                if let Some(p) = prev {
                    if !(v > p) {
                        f6 = Finding::fail(
                            "f6",
                            Witness::at(format!("quotient not increasing: {p:e} -> {v:e}"))
                                .with_location(x)
                                .with_t(t),
                        );
                        break 'f6;
                    }
                }
                prev = Some(v);
            }
        }
    }
    report.push(f6);

    // f7: f(x,t) t - q_+ F(x,t) >= 0 pointwise
    let mut f7 = Finding::pass("f7");
    'f7: for x in x_samples {
        for &t in t_grid {
            let v = spec.f(x, t) * t - q_plus * spec.antiderivative(x, t);
            let slack = 1e-12 * (1.0 + math::abs(spec.f(x, t) * t));
            if v < -slack {
                f7 = Finding::fail(
                    "f7",
                    Witness::at(format!("f t - q_+ F = {v:e}"))
                        .with_location(x)
                        .with_t(t),
                );
                break 'f7;
            }
        }
    }
    report.push(f7);

    // sampled constants of the derived bounds: F > -M and the epsilon
    // split |F| <= eps/p |t|^p + C_eps |t|^r at eps = 1
    let mut min_f = f64::INFINITY;
    let mut c_upper = 0.0f64;
    let mut c_lower = 0.0f64;
    for x in x_samples {
        let p = cfg.p.interpolate(x);
        let r = r_field.interpolate(x);
        for &t in t_grid {
            let big_f = spec.antiderivative(x, t);
            min_f = min_f.min(big_f);
            let ta = math::abs(t);
            if ta >= 1e-3 {
                c_upper = c_upper
                    .max((math::abs(big_f) - math::powf(ta, p) / p) / math::powf(ta, r));
                c_lower = c_lower.max(math::powf(ta, q_plus) / q_plus - big_f);
            }
        }
    }
    report.push(
        Finding::pass("f.bounded_below").with_constant("M", (-min_f).max(0.0)),
    );
    report.push(
        Finding::pass("f.eps_split")
            .with_constant("C_eps_upper", c_upper.max(0.0))
            .with_constant("C_eps_lower", c_lower.max(0.0)),
    );

    Ok(report)
}

enum LimitKind {
    DivergesAtInfinity,
    VanishesAtZero,
}

fn limit_finding(
    key: &str,
    span_ok: bool,
    x_samples: &[Vec<f64>],
    positives: &[f64],
    negatives: &[f64],
    ratio: impl Fn(&[f64], f64) -> f64,
    kind: LimitKind,
) -> Finding {
    if !span_ok {
        return Finding::inconclusive(key, "t grid does not span [1e-6, 1e6]");
    }
    let mut verdict = Verdict::Pass;
    let mut witness: Option<Witness> = None;
    let mut note: Option<String> = None;

    for x in x_samples {
        for side in [positives, negatives] {
            let mags: Vec<f64> = side.iter().map(|&t| math::abs(t)).collect();
            let mag_max = mags.iter().fold(0.0f64, |m, &v| m.max(v));
            let mag_min = mags.iter().fold(f64::INFINITY, |m, &v| m.min(v));
            // values ordered by increasing |t|
            let mut pairs: Vec<(f64, f64)> = side
                .iter()
                .map(|&t| (math::abs(t), ratio(x, t)))
                .collect();
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

            match kind {
                LimitKind::DivergesAtInfinity => {
                    let decade: Vec<f64> = pairs
                        .iter()
                        .filter(|(m, _)| *m >= mag_max / 10.0)
                        .map(|&(_, v)| v)
                        .collect();
                    match trend(&decade) {
                        Trend::Increasing => {}
                        Trend::Flat | Trend::Decreasing => {
                            verdict = Verdict::Fail;
                            witness = Some(
                                Witness::at(String::from(
                                    "ratio does not grow over the largest decade",
                                ))
                                .with_location(x)
                                .with_t(mag_max),
                            );
                        }
                        Trend::Mixed => {
                            if verdict == Verdict::Pass {
                                verdict = Verdict::Inconclusive;
                                note = Some(String::from("non-monotone trend at infinity"));
                            }
                        }
                    }
                }
                LimitKind::VanishesAtZero => {
                    // smallest two decades, read toward t -> 0
                    let mut small: Vec<f64> = pairs
                        .iter()
                        .filter(|(m, _)| *m <= mag_min * 100.0)
                        .map(|&(_, v)| v)
                        .collect();
                    small.reverse();
                    let last = small.last().copied().unwrap_or(f64::INFINITY);
                    match trend(&small) {
                        Trend::Mixed => {
                            if verdict == Verdict::Pass {
                                verdict = Verdict::Inconclusive;
                                note = Some(String::from("non-monotone trend at zero"));
                            }
                        }
                        Trend::Increasing => {
                            verdict = Verdict::Fail;
                            witness = Some(
                                Witness::at(String::from("ratio grows toward t = 0"))
                                    .with_location(x)
                                    .with_t(mag_min),
                            );
                        }
                        Trend::Decreasing | Trend::Flat => {
                            if !(last < 1e-3) {
                                verdict = Verdict::Fail;
                                witness = Some(
                                    Witness::at(format!("ratio {last:e} not below 1e-3 at t -> 0"))
                                        .with_location(x)
                                        .with_t(mag_min),
                                );
                            }
                        }
                    }
                }
            }
            if verdict == Verdict::Fail {
                let mut finding = Finding::fail(key, witness.unwrap());
                if let Some(n) = note {
                    finding = finding.with_note(&n);
                }
                return finding;
            }
        }
    }
    match verdict {
        Verdict::Pass => Finding::pass(key),
        Verdict::Inconclusive => Finding::inconclusive(key, note.as_deref().unwrap_or("")),
        Verdict::Fail => unreachable!(),
    }
}

/// The admissibility window `((r_+ - p_-) N / p_-, r_+)` for the exponents
/// of the superlinearity quotient; nonempty whenever `r_+ < p*_-`.
pub fn f5_window(p_minus: f64, dim: usize, r_plus: f64) -> Result<(f64, f64)> {
    let p_star_minus = sobolev_conjugate(p_minus, dim);
    if r_plus >= p_star_minus {
        return Err(Error::WindowUndefined {
            r_plus,
            p_star_minus,
        });
    }
    let lo = (r_plus - p_minus) * dim as f64 / p_minus;
    Ok((lo, r_plus))
}

/// Solution of `1/r_+ = t/p*_- + (1-t)/l_-` along with `t r_+` and, when
/// `p_-` is supplied, the comparison `t r_+ < p_-`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationExponent {
    pub t: f64,
    pub t_r_plus: f64,
    pub below_p_minus: Option<bool>,
}

pub fn interpolation_exponent(
    r_plus: f64,
    p_star_minus: f64,
    l_minus: f64,
    p_minus: Option<f64>,
) -> Result<InterpolationExponent> {
    if !(l_minus < r_plus && r_plus < p_star_minus) {
        return Err(Error::InterpolationUndefined {
            l_minus,
            r_plus,
            p_star_minus,
        });
    }
    let t = (1.0 / r_plus - 1.0 / l_minus) / (1.0 / p_star_minus - 1.0 / l_minus);
    let t_r_plus = t * r_plus;
    Ok(InterpolationExponent {
        t,
        t_r_plus,
        below_p_minus: p_minus.map(|pm| t_r_plus < pm),
    })
}

/// Sampled estimate of the log-Hoelder constant: the maximum of
/// `|e(x) - e(y)| |log |x - y||` over node pairs closer than 1/2.
pub fn log_holder_diagnostic(e: &ExponentField) -> f64 {
    let grid = e.grid();
    assert!(
        grid.spacing().iter().all(|&h| h < 0.5),
        "grid spacing must be below 1/2"
    );
    let n = grid.node_count();
    // all pairs on desk-size grids, strided subsample beyond
    let stride = if n <= 2500 { 1 } else { n / 2500 + 1 };
    let nodes: Vec<usize> = (0..n).step_by(stride).collect();
    let coords: Vec<Vec<f64>> = nodes.iter().map(|&i| grid.node_coord(i)).collect();
    let mut best = 0.0f64;
    for (a, &i) in nodes.iter().enumerate() {
        for (b, &j) in nodes.iter().enumerate().skip(a + 1) {
            let mut d2 = 0.0;
            for (ca, cb) in coords[a].iter().zip(&coords[b]) {
                d2 += (ca - cb) * (ca - cb);
            }
            let d = math::sqrt(d2);
            if d <= 0.0 || d >= 0.5 {
                continue;
            }
            let gap = math::abs(e.values()[i] - e.values()[j]);
            best = best.max(gap * math::abs(math::ln(d)));
        }
    }
    best
}
