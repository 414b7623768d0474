//! Manifold-projection invariants: idempotence, membership, maximality,
//! the monotone slope reformulation and pair refinement.

mod common;

use common::*;
use double_phase_core::nehari::{PairCache, RayCache};
use double_phase_core::*;

#[test]
fn projection_is_idempotent_and_lands_on_the_manifold() {
    let cfg = reference_config(17);
    let fnl = Functional::new(&cfg);
    let mut r = rng(404);
    for _ in 0..30 {
        let u = random_smooth_field(&cfg.grid, &mut r, 3);
        if u.is_zero() {
            continue;
        }
        let t_u = project_ray(&fnl, &u, Truncation::None).unwrap();
        let projected = u.scaled(t_u);

        // membership: |<phi'(t_u u), t_u u>| below the energy scale
        let scale = fnl.energy(&projected, Truncation::None).unwrap().scale();
        let rv = fnl.residual(&projected, Truncation::None).unwrap();
        let membership = pairing(&rv, &projected).unwrap();
        assert!(membership.abs() <= 1e-8 * scale, "membership {membership:e}");

        // idempotence: re-projection returns the unit scaling
        let again = project_ray(&fnl, &projected, Truncation::None).unwrap();
        assert!((again - 1.0).abs() <= 1e-8);

        // positivity of the manifold energy
        let phi = fnl.phi(&projected, Truncation::None).unwrap();
        assert!(phi > 0.0);

        // maximality along the ray
        let cache = RayCache::new(&fnl, &u, Truncation::None).unwrap();
        for k in -6..=6i32 {
            let t = t_u * 2.0f64.powi(k);
            if (t - t_u).abs() > 1e-9 * t_u {
                assert!(cache.k(t) <= phi + 1e-10 * phi.abs());
            }
        }
    }
}

#[test]
fn normalized_slope_is_strictly_decreasing() {
    let mut r = rng(777);
    for draw in 0..100 {
        let p = 1.2 + 0.7 * ((draw % 8) as f64 / 8.0);
        let q = p + 0.15 + 0.9 * ((draw % 5) as f64 / 5.0);
        let q = q.min(2.9);
        let mu = (draw % 3) as f64;
        let r_exp = q + 0.4 + (draw % 4) as f64 * 0.3;
        let cfg = const_config(9, p, q, mu, r_exp);
        let fnl = Functional::new(&cfg);
        let u = random_smooth_field(&cfg.grid, &mut r, 3);
        if u.is_zero() {
            continue;
        }
        let cache = RayCache::new(&fnl, &u, Truncation::None).unwrap();
        let mut prev = f64::INFINITY;
        for i in 0..50 {
            let t = 10.0f64.powf(-2.0 + 4.0 * i as f64 / 49.0);
            let g = cache.normalized_slope(t);
            assert!(
                g < prev,
                "slope not strictly decreasing at draw {draw}, t = {t}"
            );
            prev = g;
        }
    }
}

#[test]
fn pair_projection_refines_the_decoupled_initialization() {
    let cfg = reference_config(17);
    let fnl = Functional::new(&cfg);
    let mut r = rng(99);
    let mut tried = 0;
    for _ in 0..20 {
        let w = random_smooth_field(&cfg.grid, &mut r, 3);
        if w.truncate(Sign::Positive).is_zero() || w.truncate(Sign::Negative).is_zero() {
            continue;
        }
        tried += 1;
        let cache = PairCache::new(&fnl, &w).unwrap();
        let s0 = project_ray(&fnl, &w.truncate(Sign::Positive), Truncation::None).unwrap();
        let t0 = project_ray(
            &fnl,
            &w.truncate(Sign::Negative).scaled(-1.0),
            Truncation::None,
        )
        .unwrap();
        let (r1_init, r2_init) = cache.residuals(s0, t0);
        let init_worst = r1_init.abs().max(r2_init.abs());

        let pair = cache.solve(s0, t0).unwrap();
        let final_worst = pair.residual_plus.abs().max(pair.residual_minus.abs());
        assert!(
            final_worst <= init_worst + 1e-14,
            "coupled solve must not be worse than its initialization: {init_worst:e} -> {final_worst:e}"
        );
        // converged pair states carry positive energy
        let mut field = w.truncate(Sign::Positive).scaled(pair.s);
        field
            .add_scaled(-pair.t, &w.truncate(Sign::Negative))
            .unwrap();
        assert!(fnl.phi(&field, Truncation::None).unwrap() > 0.0);
    }
    assert!(tried >= 10, "not enough sign-changing samples");
}

#[test]
fn truncated_ray_projection_matches_signed_fields() {
    // for a nonnegative field the positive-truncated functional sees the
    // same ray as the full one
    let cfg = reference_config(17);
    let fnl = Functional::new(&cfg);
    let bump = solver::default_bump(&cfg.grid);
    let t_full = project_ray(&fnl, &bump, Truncation::None).unwrap();
    let t_plus = project_ray(&fnl, &bump, Truncation::Positive).unwrap();
    assert!((t_full - t_plus).abs() <= 1e-10 * t_full);

    // and the negative-truncated functional sees the mirrored ray
    let t_minus = project_ray(&fnl, &bump.scaled(-1.0), Truncation::Negative).unwrap();
    assert!((t_minus - t_full).abs() <= 1e-8 * t_full);
}
