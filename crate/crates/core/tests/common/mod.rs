//! Shared helpers for the integration suites: seeded fields, reference
//! configurations and independent quadrature oracles.
#![allow(dead_code)]

use double_phase_core::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random combination of low sine modes; exactly zero on the boundary and
/// smooth enough for finite-difference work.
pub fn random_smooth_field(grid: &Grid, rng: &mut ChaCha8Rng, modes: usize) -> ScalarField {
    use core::f64::consts::PI;
    let lx = grid.extents()[0];
    let ly = grid.extents()[1];
    let coeffs: Vec<f64> = (0..modes * modes)
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    let mut u = ScalarField::from_fn(grid, |x| {
        let mut acc = 0.0;
        for k in 0..modes {
            for l in 0..modes {
                acc += coeffs[k * modes + l]
                    * (PI * (k + 1) as f64 * x[0] / lx).sin()
                    * (PI * (l + 1) as f64 * x[1] / ly).sin();
            }
        }
        acc
    });
    u.zero_boundary();
    u
}

/// Constant-exponent configuration on the unit square.
pub fn const_config(n: usize, p: f64, q: f64, mu: f64, r: f64) -> ProblemConfig {
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

/// The reference double phase configuration: p = 1.8, q = 2.2, mu = x1,
/// f = |t|^2 t.
pub fn reference_config(n: usize) -> ProblemConfig {
    let g = Grid::unit_square(n).unwrap();
    ProblemConfig::new(
        g.clone(),
        ExponentField::constant(&g, 1.8).unwrap(),
        ExponentField::constant(&g, 2.2).unwrap(),
        WeightField::from_fn(&g, |x| x[0]).unwrap(),
        vec![1.0, 0.0],
        NonlinearitySpec::pure_power(ExponentField::constant(&g, 4.0).unwrap(), 1.0).unwrap(),
    )
    .unwrap()
}

/// Plain recursive adaptive Simpson quadrature (test oracle).
pub fn simpson_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: usize) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, m);
        let right = simpson(f, m, b);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            left + right + (left + right - whole) / 15.0
        } else {
            rec(f, a, m, left, 0.5 * tol, depth - 1) + rec(f, m, b, right, 0.5 * tol, depth - 1)
        }
    }
    let whole = simpson(f, a, b);
    rec(f, a, b, whole, tol, depth)
}
