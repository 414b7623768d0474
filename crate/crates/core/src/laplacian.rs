//! Direct inverse of the constant-coefficient discrete Dirichlet Laplacian
//! on a tensor grid, used as a Sobolev-gradient preconditioner.
//!
//! The 1-D second-difference matrix with Dirichlet ends has eigenvectors
//! `sin(i j pi / (m+1))` and eigenvalues `4 sin^2(j pi / (2(m+1))) / h^2`;
//! the N-dimensional operator diagonalizes in the tensor product of those
//! bases. One apply costs a dense sine transform per axis, which is cheap
//! at desk-scale grids and factorizes once per grid.

use alloc::vec;
use alloc::vec::Vec;

use crate::energy::ResidualVector;
use crate::error::{Error, Result};
use crate::math;
use crate::mesh::{Grid, ScalarField};

#[derive(Debug, Clone)]
pub struct InverseLaplacian {
    grid: Grid,
    /// interior extents per axis
    dims: Vec<usize>,
    /// symmetric sine eigenvector matrix per axis, row-major m x m
    mats: Vec<Vec<f64>>,
    /// eigenvalues per axis
    eigs: Vec<Vec<f64>>,
    /// product of the 2/(m+1) orthogonality factors
    norm: f64,
    /// node-flat indices of the interior nodes in tensor order
    interior: Vec<usize>,
}

impl InverseLaplacian {
    pub fn new(grid: &Grid) -> Self {
        let dim = grid.dim();
        let dims: Vec<usize> = grid.node_counts().iter().map(|&n| n - 2).collect();
        let mut mats = Vec::with_capacity(dim);
        let mut eigs = Vec::with_capacity(dim);
        let mut norm = 1.0;
        for a in 0..dim {
            let m = dims[a];
            let h = grid.spacing()[a];
            let denom = (m + 1) as f64;
            let mut mat = vec![0.0; m * m];
            for i in 0..m {
                for j in 0..m {
                    mat[i * m + j] =
                        math::sin((i + 1) as f64 * (j + 1) as f64 * core::f64::consts::PI / denom);
                }
            }
            let eig: Vec<f64> = (0..m)
                .map(|j| {
                    let s = math::sin((j + 1) as f64 * core::f64::consts::PI / (2.0 * denom));
                    4.0 * s * s / (h * h)
                })
                .collect();
            mats.push(mat);
            eigs.push(eig);
            norm *= 2.0 / denom;
        }

        // interior nodes in row-major tensor order
        let count: usize = dims.iter().product();
        let mut interior = Vec::with_capacity(count);
        let mut idx = vec![0usize; dim];
        let strides = grid.node_strides();
        for _ in 0..count {
            let node: usize = idx
                .iter()
                .zip(&strides)
                .map(|(&i, &s)| (i + 1) * s)
                .sum();
            interior.push(node);
            for a in (0..dim).rev() {
                idx[a] += 1;
                if idx[a] < dims[a] {
                    break;
                }
                idx[a] = 0;
            }
        }

        InverseLaplacian {
            grid: grid.clone(),
            dims,
            mats,
            eigs,
            norm,
            interior,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Solve `(cell measure) * L d = r` for the direction `d`, zero on the
    /// boundary. The measure factor makes the solve behave like a discrete
    /// Riesz map for the dual vector `r`.
    pub fn apply(&self, r: &ResidualVector) -> Result<ScalarField> {
        if r.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let mut data: Vec<f64> = self.interior.iter().map(|&i| r.values()[i]).collect();

        for a in 0..self.dims.len() {
            self.apply_axis(&mut data, a);
        }
        // divide by the eigenvalue sum of the tensor Laplacian
        let mut idx = vec![0usize; self.dims.len()];
        for v in data.iter_mut() {
            let lambda: f64 = idx.iter().zip(&self.eigs).map(|(&j, e)| e[j]).sum();
            *v /= lambda;
            for a in (0..self.dims.len()).rev() {
                idx[a] += 1;
                if idx[a] < self.dims[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        for a in 0..self.dims.len() {
            self.apply_axis(&mut data, a);
        }

        let scale = self.norm / self.grid.cell_measure();
        let mut out = ScalarField::zeros(&self.grid);
        for (slot, &node) in self.interior.iter().enumerate() {
            out.values_mut()[node] = data[slot] * scale;
        }
        Ok(out)
    }

    fn apply_axis(&self, data: &mut [f64], axis: usize) {
        let m = self.dims[axis];
        let mat = &self.mats[axis];
        let stride: usize = self.dims[axis + 1..].iter().product();
        let outer: usize = self.dims[..axis].iter().product();
        let block = stride * m;
        let mut line = vec![0.0; m];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * block + s;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[base + i * stride];
                }
                for i in 0..m {
                    let mut acc = 0.0;
                    for (j, &lv) in line.iter().enumerate() {
                        acc += mat[i * m + j] * lv;
                    }
                    data[base + i * stride] = acc;
                }
            }
        }
    }
}
