//! Norm-modular relation properties, Luxemburg oracles and Poincare
//! diagnostics.

mod common;

use common::*;
use double_phase_core::modular::poincare_diagnostic;
use double_phase_core::*;

fn kinds(g: &Grid) -> Vec<(&'static str, ModularSpec)> {
    let r = ExponentField::from_fn(g, |x| 2.0 + 0.5 * x[0]).unwrap();
    let w = WeightField::from_fn(g, |x| 0.25 + 0.75 * x[1]).unwrap();
    let p = ExponentField::from_fn(g, |x| 1.6 + 0.2 * x[0]).unwrap();
    let q = ExponentField::from_fn(g, |x| 2.2 + 0.3 * x[1]).unwrap();
    let mu = WeightField::from_fn(g, |x| x[0]).unwrap();
    vec![
        ("var_exp", ModularSpec::var_exp(r.clone())),
        ("weighted", ModularSpec::weighted_var_exp(r, w)),
        (
            "double_phase",
            ModularSpec::double_phase(p.clone(), q.clone(), mu.clone()),
        ),
        (
            "double_phase_gradient",
            ModularSpec::double_phase(p, q, mu).on_gradient(),
        ),
    ]
}

#[test]
fn unit_modular_identity_and_sandwiches_in_all_regimes() {
    let g = Grid::unit_square(17).unwrap();
    let mut r = rng(1001);
    for (name, spec) in kinds(&g) {
        for regime in [0.5, 1.0, 2.0] {
            for _ in 0..30 {
                let u = random_smooth_field(&g, &mut r, 3);
                if u.is_zero() {
                    continue;
                }
                let base = spec.luxemburg_norm(&u).unwrap();
                assert!(base > 0.0, "{name}: positive norm for nonzero field");
                let scaled = u.scaled(regime / base);
                let report = spec.norm_modular_relations(&scaled).unwrap();
                assert!(
                    report.all_hold(),
                    "{name} regime {regime}: {report:?}"
                );
                let unit = report.unit_modular.unwrap();
                assert!((unit - 1.0).abs() <= 1e-8, "{name}: unit modular {unit}");
            }
        }
    }
}

#[test]
fn sandwich_instances_with_pinned_exponents() {
    // p_- = 1.5, q_+ = 2.2: at norm 1/2 the modular sits in
    // [0.5^2.2, 0.5^1.5], at norm 2 in [2^1.5, 2^2.2]
    let g = Grid::unit_square(17).unwrap();
    let spec = ModularSpec::double_phase(
        ExponentField::constant(&g, 1.5).unwrap(),
        ExponentField::constant(&g, 2.2).unwrap(),
        WeightField::from_fn(&g, |x| x[0]).unwrap(),
    );
    let mut r = rng(88);
    for _ in 0..10 {
        let u = random_smooth_field(&g, &mut r, 3);
        if u.is_zero() {
            continue;
        }
        let base = spec.luxemburg_norm(&u).unwrap();

        let half = u.scaled(0.5 / base);
        let m = spec.modular(&half).unwrap();
        assert!(0.5f64.powf(2.2) - 1e-9 <= m && m <= 0.5f64.powf(1.5) + 1e-9);

        let two = u.scaled(2.0 / base);
        let m = spec.modular(&two).unwrap();
        assert!(2.0f64.powf(1.5) - 1e-8 <= m && m <= 2.0f64.powf(2.2) + 1e-8);
    }
}

#[test]
fn scaling_drives_norm_and_modular_together() {
    // s -> 0 sends both to zero, s -> infinity sends both to infinity
    let g = Grid::unit_square(17).unwrap();
    let mut r = rng(7);
    let spec = ModularSpec::double_phase(
        ExponentField::constant(&g, 1.8).unwrap(),
        ExponentField::constant(&g, 2.2).unwrap(),
        WeightField::from_fn(&g, |x| x[0]).unwrap(),
    );
    let u = random_smooth_field(&g, &mut r, 3);
    let mut prev_norm = f64::INFINITY;
    let mut prev_modular = f64::INFINITY;
    for k in 0..8 {
        let s = 2.0f64.powi(-k);
        let norm = spec.luxemburg_norm(&u.scaled(s)).unwrap();
        let modular = spec.modular(&u.scaled(s)).unwrap();
        assert!(norm < prev_norm && modular < prev_modular);
        prev_norm = norm;
        prev_modular = modular;
    }
    assert!(prev_norm < 1e-2 && prev_modular < 1e-2);

    let mut up_norm = 0.0;
    let mut up_modular = 0.0;
    for k in 0..8 {
        let s = 2.0f64.powi(k);
        let norm = spec.luxemburg_norm(&u.scaled(s)).unwrap();
        let modular = spec.modular(&u.scaled(s)).unwrap();
        assert!(norm > up_norm && modular > up_modular);
        up_norm = norm;
        up_modular = modular;
    }
    assert!(up_norm > 1e2);
}

#[test]
fn double_phase_modular_decomposes_exactly() {
    let g = Grid::unit_square(17).unwrap();
    let p = ExponentField::from_fn(&g, |x| 1.5 + 0.3 * x[0]).unwrap();
    let q = ExponentField::from_fn(&g, |x| 2.1 + 0.4 * x[1]).unwrap();
    let mu = WeightField::from_fn(&g, |x| x[0] * x[1]).unwrap();
    let dp = ModularSpec::double_phase(p.clone(), q.clone(), mu.clone());
    let vp = ModularSpec::var_exp(p);
    let wq = ModularSpec::weighted_var_exp(q, mu);
    let mut r = rng(5);
    for _ in 0..20 {
        let u = random_smooth_field(&g, &mut r, 3);
        let whole = dp.modular(&u).unwrap();
        let parts = vp.modular(&u).unwrap() + wq.modular(&u).unwrap();
        assert!((whole - parts).abs() <= 1e-12 * (1.0 + whole.abs()));
    }
}

#[test]
fn double_phase_reduces_to_twice_the_var_exp_modular() {
    // q = p and mu = 1 collapse the double phase integrand to 2 |u|^p
    let g = Grid::unit_square(17).unwrap();
    let p = ExponentField::from_fn(&g, |x| 1.7 + 0.4 * x[0]).unwrap();
    let dp = ModularSpec::double_phase(
        p.clone(),
        p.clone(),
        WeightField::constant(&g, 1.0).unwrap(),
    );
    let vp = ModularSpec::var_exp(p);
    let mut r = rng(6);
    let u = random_smooth_field(&g, &mut r, 3);
    let lhs = dp.modular(&u).unwrap();
    let rhs = 2.0 * vp.modular(&u).unwrap();
    assert!((lhs - rhs).abs() <= 1e-13 * (1.0 + lhs.abs()));
}

#[test]
fn luxemburg_norm_matches_continuum_oracle_for_unit_field() {
    // r(x) = 2 + x1 and u = 1 on the unit square: the modular at lambda = 1
    // is exactly |domain| = 1, so the discrete and continuum norms agree
    let g = Grid::unit_square(33).unwrap();
    let spec = ModularSpec::var_exp(ExponentField::from_fn(&g, |x| 2.0 + x[0]).unwrap());
    let lib = spec
        .luxemburg_norm(&ScalarField::constant(&g, 1.0))
        .unwrap();

    // independent continuum oracle: high-resolution 1-D quadrature of
    // lambda -> int_0^1 (1/lambda)^{2+x} dx plus bisection
    let modular_at = |lambda: f64| -> f64 {
        simpson_adaptive(
            &|x: f64| (1.0 / lambda).powf(2.0 + x),
            0.0,
            1.0,
            1e-14,
            40,
        )
    };
    let mut lo = 0.5f64;
    let mut hi = 2.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if modular_at(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    let oracle = 0.5 * (lo + hi);
    assert!(
        (lib - oracle).abs() <= 1e-8,
        "library {lib:.12e} vs oracle {oracle:.12e}"
    );
}

#[test]
fn sobolev_norms_of_tent_field() {
    // tent in x1 has |grad| = 1 on every cell; with constant exponents the
    // gradient norm solves (1/l)^p + mu (1/l)^q = 1
    let g = Grid::unit_square(17).unwrap();
    let cfg = const_config(17, 2.0, 3.0, 1.0, 4.0);
    let tent = ScalarField::from_fn(&g, |x| x[0].min(1.0 - x[0]));
    let norms = sobolev_norms(&cfg, &tent).unwrap();

    let modular_at = |l: f64| (1.0 / l).powi(2) + (1.0 / l).powi(3);
    let mut lo = 1.0;
    let mut hi = 4.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if modular_at(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let expected = 0.5 * (lo + hi);
    assert!((norms.gradient - expected).abs() <= 1e-8);
    assert!((norms.full - (norms.value + norms.gradient)).abs() <= 1e-14);
    assert!(norms.full >= norms.norm_1h0());

    let zero = ScalarField::zeros(&g);
    let norms = sobolev_norms(&cfg, &zero).unwrap();
    assert_eq!((norms.value, norms.gradient, norms.full), (0.0, 0.0, 0.0));
}

#[test]
fn poincare_ratio_peaks_at_the_first_eigenfunction() {
    use std::f64::consts::PI;
    let cfg = const_config(33, 2.0, 2.2, 0.0, 4.0);
    let g = &cfg.grid;
    let mut eigen = ScalarField::from_fn(g, |x| (PI * x[0]).sin() * (PI * x[1]).sin());
    eigen.zero_boundary();
    let diag = poincare_diagnostic(&cfg, &[eigen.clone()]).unwrap();
    // Rayleigh quotient of the first Dirichlet eigenfunction: 1/(2 pi^2)
    let exact = 1.0 / (2.0 * PI * PI);
    assert!(
        (diag.modular_ratio_max - exact).abs() <= 0.02 * exact,
        "ratio {} vs {exact}",
        diag.modular_ratio_max
    );

    // scaling invariance for constant p
    let diag2 = poincare_diagnostic(&cfg, &[eigen.scaled(2.0)]).unwrap();
    assert!((diag2.modular_ratio_max - diag.modular_ratio_max).abs() <= 1e-10);

    // random fields never beat the eigenfunction by more than 5%
    let mut r = rng(2024);
    let samples: Vec<ScalarField> = (0..50)
        .map(|_| random_smooth_field(g, &mut r, 4))
        .filter(|u| !u.is_zero())
        .collect();
    let rand_diag = poincare_diagnostic(&cfg, &samples).unwrap();
    assert!(rand_diag.modular_ratio_max <= 1.05 * diag.modular_ratio_max);
}
