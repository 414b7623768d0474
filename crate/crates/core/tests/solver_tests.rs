//! End-to-end solver behavior beyond the unit suites.

mod common;

use common::*;
use double_phase_core::*;

#[test]
fn sup_norm_is_stable_under_refinement() {
    // bounded-solution evidence: the converged positive solution keeps its
    // amplitude within 5% when the grid is refined
    let scfg = SolverConfig::default();
    let coarse = solve_constant_sign(&const_config(33, 2.0, 2.2, 0.0, 4.0), &scfg, Sign::Positive)
        .unwrap();
    let fine = solve_constant_sign(&const_config(65, 2.0, 2.2, 0.0, 4.0), &scfg, Sign::Positive)
        .unwrap();
    assert!(coarse.converged && fine.converged);
    let rel = (coarse.sup_norm - fine.sup_norm).abs() / fine.sup_norm;
    assert!(rel <= 0.05, "sup norms {} vs {}", coarse.sup_norm, fine.sup_norm);
}

#[test]
fn solve_three_bundles_reports_and_diagnostics() {
    let cfg = reference_config(17);
    let scfg = SolverConfig::default();
    let three = solve_three(&cfg, &scfg).unwrap();
    assert!(three.positive.converged);
    assert!(three.negative.converged);
    assert!(three.sign_changing.converged);
    assert!(three.hypotheses.all_pass_or_inconclusive());
    assert!(three.geometry.spheres[0].min_phi > 0.0);
    // every report carries the shared diagnostics
    assert!(three.positive.geometry.is_some());
    assert!(three.sign_changing.hypotheses.is_some());
    // energies are ordered
    assert!(three.sign_changing.phi > three.positive.phi.max(three.negative.phi));
    // reports name their guesses for replay
    assert_eq!(three.positive.guess_label, "bump");
    assert_eq!(three.sign_changing.guess_label, "pair");
}

#[test]
fn solves_are_deterministic_for_fixed_seed() {
    let cfg = reference_config(17);
    let scfg = SolverConfig::default();
    let a = solve_sign_changing(&cfg, &scfg).unwrap();
    let b = solve_sign_changing(&cfg, &scfg).unwrap();
    assert_eq!(a.field.values(), b.field.values());
    assert_eq!(a.iterations, b.iterations);
    assert_eq!(a.residual_norm.to_bits(), b.residual_norm.to_bits());
}

#[test]
fn part_energies_of_the_sign_changing_solution() {
    // both parts carry positive energy and their sum matches phi(w0) up to
    // the measured splitting defect of the interface cells
    let cfg = reference_config(17);
    let scfg = SolverConfig::default();
    let report = solve_sign_changing(&cfg, &scfg).unwrap();
    let fnl = Functional::new(&cfg);
    let w = &report.field;
    let phi_plus = fnl
        .phi(&w.truncate(Sign::Positive), Truncation::None)
        .unwrap();
    let phi_minus = fnl
        .phi(&w.truncate(Sign::Negative).scaled(-1.0), Truncation::None)
        .unwrap();
    assert!(phi_plus > 0.0 && phi_minus > 0.0);
    let defect = (report.phi - phi_plus - phi_minus).abs();
    assert!(
        defect <= 0.05 * report.phi,
        "splitting defect {defect:e} too large against phi {:e}",
        report.phi
    );
}

#[test]
fn double_phase_constant_sign_solve_converges() {
    let cfg = reference_config(33);
    let scfg = SolverConfig::default();
    let report = solve_constant_sign(&cfg, &scfg, Sign::Positive).unwrap();
    assert!(report.converged);
    assert!(report.residual_norm <= scfg.tolerance * report.scale);
    let min = report
        .field
        .values()
        .iter()
        .fold(f64::INFINITY, |m, &v| m.min(v));
    assert!(min >= -1e-8);
    assert_eq!(report.nodal.positive, 1);
    assert_eq!(report.nodal.negative, 0);
}
