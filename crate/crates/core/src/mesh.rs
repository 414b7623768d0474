//! Rectangular tensor-product grids, nodal scalar fields, cell-midpoint
//! gradients and quadrature, truncations and nodal components.
//!
//! All quadrature in the crate uses one point per cell: fields enter as the
//! mean of the cell's corner values, gradients as the bilinear-element
//! gradient at the cell center. This is exact for affine fields and O(h^2)
//! for smooth ones.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Sign selector for truncations and constant-sign solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

/// Uniform rectangular grid on `[0, L_1] x ... x [0, L_N]`.
///
/// Nodes are indexed per axis by `0..count`, flattened row-major with the
/// last axis fastest. Every node with an extremal index on some axis is a
/// boundary node.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    extents: Vec<f64>,
    counts: Vec<usize>,
    spacing: Vec<f64>,
}

impl Grid {
    pub fn new(extents: &[f64], counts: &[usize]) -> Result<Self> {
        if extents.len() != counts.len() {
            return Err(Error::Invalid {
                what: "grid",
                detail: String::from("extents and node counts differ in length"),
            });
        }
        if extents.len() < 2 {
            return Err(Error::Invalid {
                what: "grid",
                detail: format!("dimension {} < 2", extents.len()),
            });
        }
        for (&ext, &n) in extents.iter().zip(counts) {
            if !(ext > 0.0) || !ext.is_finite() {
                return Err(Error::Invalid {
                    what: "grid",
                    detail: format!("extent {ext} is not positive and finite"),
                });
            }
            if n < 3 {
                return Err(Error::Invalid {
                    what: "grid",
                    detail: format!("node count {n} < 3"),
                });
            }
        }
        let spacing = extents
            .iter()
            .zip(counts)
            .map(|(&ext, &n)| ext / (n - 1) as f64)
            .collect();
        Ok(Grid {
            extents: extents.to_vec(),
            counts: counts.to_vec(),
            spacing,
        })
    }

    /// Unit square with `n` nodes per axis.
    pub fn unit_square(n: usize) -> Result<Self> {
        Grid::new(&[1.0, 1.0], &[n, n])
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn extents(&self) -> &[f64] {
        &self.extents
    }

    pub fn node_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn node_count(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.counts.iter().map(|&n| n - 1).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.counts.iter().map(|&n| n - 1).product()
    }

    /// Measure of one cell (uniform across the grid).
    pub fn cell_measure(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Measure of the whole domain.
    pub fn domain_measure(&self) -> f64 {
        self.extents.iter().product()
    }

    /// Row-major strides over nodes, last axis fastest.
    pub fn node_strides(&self) -> Vec<usize> {
        let dim = self.dim();
        let mut strides = vec![1usize; dim];
        for a in (0..dim.saturating_sub(1)).rev() {
            strides[a] = strides[a + 1] * self.counts[a + 1];
        }
        strides
    }

    pub fn flatten(&self, idx: &[usize]) -> usize {
        let strides = self.node_strides();
        idx.iter().zip(&strides).map(|(&i, &s)| i * s).sum()
    }

    pub fn unflatten(&self, mut flat: usize, idx: &mut [usize]) {
        let strides = self.node_strides();
        for (i, &s) in idx.iter_mut().zip(&strides) {
            *i = flat / s;
            flat %= s;
        }
    }

    pub fn node_coord(&self, flat: usize) -> Vec<f64> {
        let mut idx = vec![0usize; self.dim()];
        self.unflatten(flat, &mut idx);
        idx.iter()
            .zip(&self.spacing)
            .map(|(&i, &h)| i as f64 * h)
            .collect()
    }

    pub fn is_boundary(&self, flat: usize) -> bool {
        let mut idx = vec![0usize; self.dim()];
        self.unflatten(flat, &mut idx);
        idx.iter()
            .zip(&self.counts)
            .any(|(&i, &n)| i == 0 || i == n - 1)
    }

    /// Node-flat offsets of the `2^N` corners of a cell relative to its
    /// origin corner (the node with the smallest indices).
    pub fn corner_offsets(&self) -> Vec<usize> {
        let dim = self.dim();
        let strides = self.node_strides();
        (0..1usize << dim)
            .map(|mask| {
                (0..dim)
                    .filter(|a| mask >> a & 1 == 1)
                    .map(|a| strides[a])
                    .sum()
            })
            .collect()
    }

    /// Node-flat index of the origin corner of every cell, in cell order.
    pub fn cell_origin_nodes(&self) -> Vec<usize> {
        let dim = self.dim();
        let strides = self.node_strides();
        let cell_counts = self.cell_counts();
        let n_cells = self.cell_count();
        let mut origins = Vec::with_capacity(n_cells);
        let mut idx = vec![0usize; dim];
        for _ in 0..n_cells {
            origins.push(idx.iter().zip(&strides).map(|(&i, &s)| i * s).sum());
            // advance the multi-index, last axis fastest
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < cell_counts[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        origins
    }

    /// Center coordinates of cell `cell_flat`, written into `out`.
    pub fn cell_center(&self, cell_flat: usize, out: &mut [f64]) {
        let dim = self.dim();
        let cell_counts = self.cell_counts();
        let mut rem = cell_flat;
        let mut stride: usize = cell_counts.iter().product();
        for a in 0..dim {
            stride /= cell_counts[a];
            let i = rem / stride;
            rem %= stride;
            out[a] = (i as f64 + 0.5) * self.spacing[a];
        }
    }

    /// Multilinear interpolation of nodal `values` at point `x` (clamped to
    /// the domain).
    pub fn interpolate(&self, values: &[f64], x: &[f64]) -> f64 {
        let dim = self.dim();
        debug_assert_eq!(values.len(), self.node_count());
        debug_assert_eq!(x.len(), dim);
        let strides = self.node_strides();
        let mut base = 0usize;
        let mut frac = vec![0.0f64; dim];
        for a in 0..dim {
            let max_i = self.counts[a] - 2;
            let t = (x[a] / self.spacing[a]).clamp(0.0, (self.counts[a] - 1) as f64);
            let i = (t as usize).min(max_i);
            frac[a] = t - i as f64;
            base += i * strides[a];
        }
        let mut acc = 0.0;
        for mask in 0..1usize << dim {
            let mut w = 1.0;
            let mut off = 0usize;
            for a in 0..dim {
                if mask >> a & 1 == 1 {
                    w *= frac[a];
                    off += strides[a];
                } else {
                    w *= 1.0 - frac[a];
                }
            }
            acc += w * values[base + off];
        }
        acc
    }
}

/// Nodal scalar field over a [`Grid`]. Plain value semantics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn zeros(grid: &Grid) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![0.0; grid.node_count()],
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![c; grid.node_count()],
        }
    }

    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Invalid {
                what: "field",
                detail: format!(
                    "value count {} does not match node count {}",
                    values.len(),
                    grid.node_count()
                ),
            });
        }
        Ok(ScalarField {
            grid: grid.clone(),
            values,
        })
    }

    /// Build a field by evaluating `f` at every node coordinate.
    pub fn from_fn(grid: &Grid, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let dim = grid.dim();
        let n = grid.node_count();
        let mut idx = vec![0usize; dim];
        let mut x = vec![0.0f64; dim];
        let mut values = Vec::with_capacity(n);
        for flat in 0..n {
            grid.unflatten(flat, &mut idx);
            for a in 0..dim {
                x[a] = idx[a] as f64 * grid.spacing()[a];
            }
            values.push(f(&x));
        }
        ScalarField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// True when all boundary nodes carry the value zero.
    pub fn is_dirichlet(&self) -> bool {
        (0..self.values.len()).all(|i| !self.grid.is_boundary(i) || self.values[i] == 0.0)
    }

    pub fn zero_boundary(&mut self) {
        for i in 0..self.values.len() {
            if self.grid.is_boundary(i) {
                self.values[i] = 0.0;
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(math::abs(v)))
    }

    pub fn scaled(&self, s: f64) -> Self {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| s * v).collect(),
        }
    }

    pub fn scale_in_place(&mut self, s: f64) {
        for v in &mut self.values {
            *v *= s;
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, s: f64, other: &ScalarField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        for (v, &o) in self.values.iter_mut().zip(&other.values) {
            *v += s * o;
        }
        Ok(())
    }

    /// Nodal truncation: `Positive` gives `max(u, 0)`, `Negative` gives
    /// `max(-u, 0)`, so `u = u+ - u-` and `|u| = u+ + u-` hold nodewise.
    pub fn truncate(&self, sign: Sign) -> ScalarField {
        let values = self
            .values
            .iter()
            .map(|&v| match sign {
                Sign::Positive => v.max(0.0),
                Sign::Negative => (-v).max(0.0),
            })
            .collect();
        ScalarField {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn interpolate(&self, x: &[f64]) -> f64 {
        self.grid.interpolate(&self.values, x)
    }
}

/// Per-cell gradients and averaged values of a scalar field, one quadrature
/// point per cell.
#[derive(Debug, Clone)]
pub struct QuadratureField {
    grid: Grid,
    /// Cell-major gradient components, `dim` entries per cell.
    gradients: Vec<f64>,
    /// Cell-averaged field values.
    values: Vec<f64>,
    /// Uniform cell measure.
    measure: f64,
}

impl QuadratureField {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn cell_count(&self) -> usize {
        self.values.len()
    }

    pub fn gradient(&self, cell: usize) -> &[f64] {
        let d = self.grid.dim();
        &self.gradients[cell * d..(cell + 1) * d]
    }

    pub fn gradient_norm(&self, cell: usize) -> f64 {
        math::norm(self.gradient(cell))
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cell_measure(&self) -> f64 {
        self.measure
    }

    /// Midpoint-rule integral of the cell-averaged values.
    pub fn integrate(&self) -> Result<f64> {
        integrate(&self.grid, &self.values)
    }
}

/// Cell-midpoint gradient and average of `u`: the bilinear-element gradient
/// at the cell center, exact for affine fields.
pub fn gradient(u: &ScalarField) -> QuadratureField {
    let grid = u.grid();
    let dim = grid.dim();
    let n_cells = grid.cell_count();
    let origins = grid.cell_origin_nodes();
    let corners = grid.corner_offsets();
    let n_corners = corners.len();
    let vals = u.values();

    let mut gradients = vec![0.0f64; n_cells * dim];
    let mut averages = vec![0.0f64; n_cells];
    // 2^(N-1) corner pairs per axis
    let face_scale = 1.0 / (n_corners / 2) as f64;
    let avg_scale = 1.0 / n_corners as f64;

    for (c, &origin) in origins.iter().enumerate() {
        let mut avg = 0.0;
        for (j, &off) in corners.iter().enumerate() {
            let v = vals[origin + off];
            avg += v;
            for a in 0..dim {
                let signed = if j >> a & 1 == 1 { v } else { -v };
                gradients[c * dim + a] += signed;
            }
        }
        averages[c] = avg * avg_scale;
        for a in 0..dim {
            gradients[c * dim + a] *= face_scale / grid.spacing()[a];
        }
    }

    QuadratureField {
        grid: grid.clone(),
        gradients,
        values: averages,
        measure: grid.cell_measure(),
    }
}

/// Midpoint quadrature: sum of cell value times cell measure. Rejects
/// non-finite data, which signals a corrupted field.
pub fn integrate(grid: &Grid, cell_values: &[f64]) -> Result<f64> {
    if cell_values.len() != grid.cell_count() {
        return Err(Error::GridMismatch);
    }
    let mut acc = 0.0;
    for &v in cell_values {
        if !v.is_finite() {
            return Err(Error::NonFinite("integrand"));
        }
        acc += v;
    }
    Ok(acc * grid.cell_measure())
}

/// Labels of the thresholded nodal components of a field.
///
/// `labels[i]` is `0` outside both excursion sets, `+k` on the k-th
/// component of `{u > threshold}` and `-k` on the k-th component of
/// `{u < -threshold}`. Components are connected through the `2N`
/// axis neighbours; label numbering follows node scan order.
#[derive(Debug, Clone)]
pub struct NodalComponents {
    pub labels: Vec<i32>,
    pub positive: usize,
    pub negative: usize,
    pub threshold: f64,
}

/// Default relative threshold for nodal components: `1e-6 * max|u|`.
pub fn default_threshold(u: &ScalarField) -> f64 {
    1e-6 * u.sup_norm()
}

pub fn connected_components(u: &ScalarField, threshold: f64) -> NodalComponents {
    assert!(threshold > 0.0, "threshold must be positive");
    let grid = u.grid();
    let dim = grid.dim();
    let counts = grid.node_counts().to_vec();
    let strides = grid.node_strides();
    let vals = u.values();
    let n = vals.len();

    // +1 above threshold, -1 below -threshold, 0 in the dead band
    let sign_of = |v: f64| -> i8 {
        if v > threshold {
            1
        } else if v < -threshold {
            -1
        } else {
            0
        }
    };

    let mut labels = vec![0i32; n];
    let mut positive = 0usize;
    let mut negative = 0usize;
    let mut queue: alloc::collections::VecDeque<usize> = alloc::collections::VecDeque::new();
    let mut idx = vec![0usize; dim];

    for start in 0..n {
        if labels[start] != 0 {
            continue;
        }
        let s = sign_of(vals[start]);
        if s == 0 {
            continue;
        }
        let label = if s > 0 {
            positive += 1;
            positive as i32
        } else {
            negative += 1;
            -(negative as i32)
        };
        labels[start] = label;
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            grid.unflatten(node, &mut idx);
            for a in 0..dim {
                for dir in [-1isize, 1] {
                    let i = idx[a] as isize + dir;
                    if i < 0 || i as usize >= counts[a] {
                        continue;
                    }
                    let nb = (node as isize + dir * strides[a] as isize) as usize;
                    if labels[nb] == 0 && sign_of(vals[nb]) == s {
                        labels[nb] = label;
                        queue.push_back(nb);
                    }
                }
            }
        }
    }

    NodalComponents {
        labels,
        positive,
        negative,
        threshold,
    }
}
