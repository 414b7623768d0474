//! Property tests for grids, quadrature, truncations and components.

mod common;

use common::*;
use double_phase_core::*;
use proptest::prelude::*;
use std::collections::BTreeMap;

proptest! {
    #[test]
    fn truncation_reconstructs_and_is_idempotent(values in prop::collection::vec(-10.0f64..10.0, 25)) {
        let g = Grid::unit_square(5).unwrap();
        let u = ScalarField::from_values(&g, values).unwrap();
        let plus = u.truncate(Sign::Positive);
        let minus = u.truncate(Sign::Negative);
        for i in 0..u.values().len() {
            // u = u+ - u- and |u| = u+ + u- nodewise
            prop_assert_eq!(u.values()[i], plus.values()[i] - minus.values()[i]);
            prop_assert_eq!(u.values()[i].abs(), plus.values()[i] + minus.values()[i]);
            prop_assert!(plus.values()[i] >= 0.0 && minus.values()[i] >= 0.0);
        }
        // idempotence
        let again = plus.truncate(Sign::Positive);
        prop_assert_eq!(plus.values(), again.values());
    }

    #[test]
    fn quadrature_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, seed in 0u64..500) {
        let g = Grid::unit_square(9).unwrap();
        let mut r = rng(seed);
        let u = random_smooth_field(&g, &mut r, 3);
        let v = random_smooth_field(&g, &mut r, 3);
        let gu = gradient(&u).values().to_vec();
        let gv = gradient(&v).values().to_vec();
        let combo: Vec<f64> = gu.iter().zip(&gv).map(|(x, y)| a * x + b * y).collect();
        let lhs = integrate(&g, &combo).unwrap();
        let rhs = a * integrate(&g, &gu).unwrap() + b * integrate(&g, &gv).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs().max(rhs.abs())));
    }
}

#[test]
fn gradients_of_parts_share_only_interface_cells() {
    // the overlap measure of supp grad(u+) and supp grad(u-) is carried by
    // sign-change interface cells and halves under refinement
    let overlap_measure = |n: usize| -> f64 {
        let g = Grid::unit_square(n).unwrap();
        // zero crossing at x1 = 13/24, strictly inside a cell column
        let mut u = ScalarField::from_fn(&g, |x| {
            (std::f64::consts::PI * x[0]).sin()
                * (std::f64::consts::PI * x[1]).sin()
                * (x[0] - 13.0 / 24.0)
        });
        u.zero_boundary();
        let gp = gradient(&u.truncate(Sign::Positive));
        let gm = gradient(&u.truncate(Sign::Negative));
        let mut overlap = 0usize;
        for c in 0..gp.cell_count() {
            if gp.gradient_norm(c) > 0.0 && gm.gradient_norm(c) > 0.0 {
                overlap += 1;
            }
        }
        overlap as f64 * g.cell_measure()
    };
    let coarse = overlap_measure(17);
    let fine = overlap_measure(33);
    assert!(coarse > 0.0, "sign-changing field must have an interface");
    assert!(
        fine <= coarse / 1.5,
        "interface measure should shrink under refinement: {coarse} -> {fine}"
    );
}

#[test]
fn two_separated_bumps_against_flood_fill_oracle() {
    let g = Grid::unit_square(33).unwrap();
    let bump = |x: &[f64], cx: f64, cy: f64| -> f64 {
        let d2 = (x[0] - cx).powi(2) + (x[1] - cy).powi(2);
        (0.15f64.powi(2) - d2).max(0.0)
    };
    let u = ScalarField::from_fn(&g, |x| bump(x, 0.25, 0.5) + bump(x, 0.75, 0.5));
    let comps = connected_components(&u, 1e-9);
    assert_eq!((comps.positive, comps.negative), (2, 0));

    // independent oracle: depth-first flood fill from the highest index down
    let oracle = flood_fill_oracle(&g, u.values(), 1e-9);
    assert_eq!(comps.positive + comps.negative, oracle.len());
    // the partitions agree up to label renaming
    let mut mapping: BTreeMap<i32, usize> = BTreeMap::new();
    for (node, &label) in comps.labels.iter().enumerate() {
        if label == 0 {
            continue;
        }
        let oracle_comp = oracle
            .iter()
            .position(|set| set.contains(&node))
            .expect("node labeled by library but not by oracle");
        match mapping.get(&label) {
            Some(&c) => assert_eq!(c, oracle_comp),
            None => {
                mapping.insert(label, oracle_comp);
            }
        }
    }
}

/// DFS flood fill visiting nodes in reverse order; returns the component
/// node sets of both signs.
fn flood_fill_oracle(g: &Grid, vals: &[f64], threshold: f64) -> Vec<std::collections::BTreeSet<usize>> {
    let n = g.node_count();
    let counts = g.node_counts().to_vec();
    let strides = g.node_strides();
    let sign_of = |v: f64| -> i8 {
        if v > threshold {
            1
        } else if v < -threshold {
            -1
        } else {
            0
        }
    };
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in (0..n).rev() {
        if seen[start] || sign_of(vals[start]) == 0 {
            continue;
        }
        let s = sign_of(vals[start]);
        let mut set = std::collections::BTreeSet::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(node) = stack.pop() {
            set.insert(node);
            let mut idx = vec![0usize; g.dim()];
            g.unflatten(node, &mut idx);
            for a in 0..g.dim() {
                for dir in [-1isize, 1] {
                    let i = idx[a] as isize + dir;
                    if i < 0 || i as usize >= counts[a] {
                        continue;
                    }
                    let nb = (node as isize + dir * strides[a] as isize) as usize;
                    if !seen[nb] && sign_of(vals[nb]) == s {
                        seen[nb] = true;
                        stack.push(nb);
                    }
                }
            }
        }
        comps.push(set);
    }
    comps
}

#[test]
fn component_labels_form_a_partition() {
    // deterministic counts and a labeling consistent with adjacency,
    // independent of scan order by construction
    let g = Grid::unit_square(21).unwrap();
    let mut r = rng(42);
    let u = random_smooth_field(&g, &mut r, 4);
    let threshold = default_threshold(&u);
    let comps = connected_components(&u, threshold);
    let strides = g.node_strides();
    let counts = g.node_counts().to_vec();
    for node in 0..g.node_count() {
        let v = u.values()[node];
        let label = comps.labels[node];
        if v > threshold {
            assert!(label > 0);
        } else if v < -threshold {
            assert!(label < 0);
        } else {
            assert_eq!(label, 0);
        }
        // neighbors in the same excursion set share the label
        let mut idx = vec![0usize; 2];
        g.unflatten(node, &mut idx);
        for a in 0..2 {
            if idx[a] + 1 < counts[a] {
                let nb = node + strides[a];
                let same_set = (u.values()[node] > threshold && u.values()[nb] > threshold)
                    || (u.values()[node] < -threshold && u.values()[nb] < -threshold);
                if same_set {
                    assert_eq!(comps.labels[node], comps.labels[nb]);
                }
            }
        }
    }
}
