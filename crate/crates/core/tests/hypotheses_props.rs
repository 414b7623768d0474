//! Randomized sweeps over the admissibility arithmetic.

mod common;

use common::*;
use double_phase_core::hypotheses::{f5_window, interpolation_exponent};
use rand::Rng;

#[test]
fn window_is_nonempty_for_admissible_triples() {
    let mut r = rng(314);
    for _ in 0..1000 {
        let n = if r.random_range(0.0..1.0) < 0.8 { 2 } else { 3 };
        let p_minus = r.random_range(1.05..(n as f64 - 0.05));
        let p_star = n as f64 * p_minus / (n as f64 - p_minus);
        let r_plus = r.random_range(p_minus..p_star * 0.999);
        let (lo, hi) = f5_window(p_minus, n, r_plus).unwrap();
        assert!(lo < hi, "empty window for p_-={p_minus}, N={n}, r_+={r_plus}");
        assert_eq!(hi, r_plus);
    }
}

#[test]
fn interpolation_identity_and_window_flag() {
    let mut r = rng(2718);
    for _ in 0..1000 {
        let n = 2usize;
        let p_minus = r.random_range(1.05..1.95);
        let p_star = 2.0 * p_minus / (2.0 - p_minus);
        // r_+ above p_- so the window has an interior, below critical
        let r_plus = r.random_range(p_minus * 1.01..p_star * 0.99);
        let (lo, hi) = f5_window(p_minus, n, r_plus).unwrap();
        // l_- strictly inside the window
        let l_minus = lo.max(1.0 + 1e-9) + r.random_range(0.01..0.99) * (hi - lo.max(1.0 + 1e-9));
        if !(l_minus < r_plus) {
            continue;
        }
        let ie = interpolation_exponent(r_plus, p_star, l_minus, Some(p_minus)).unwrap();
        // substituting t back reproduces 1/r_+
        let back = ie.t / p_star + (1.0 - ie.t) / l_minus;
        assert!((back - 1.0 / r_plus).abs() <= 1e-12);
        assert!(ie.t > 0.0 && ie.t < 1.0);
        // inside the window the interpolated power stays below p_-
        assert_eq!(
            ie.below_p_minus,
            Some(true),
            "flag false inside window: p_-={p_minus} r_+={r_plus} l_-={l_minus} t r_+={}",
            ie.t_r_plus
        );
    }
}
