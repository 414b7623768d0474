//! Variable exponent and weight data on a grid.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mesh::{Grid, ScalarField};

/// Nodal samples of an exponent function with cached extrema.
///
/// Values must be finite and strictly greater than one (membership in
/// `C_+`); the cached min and max are the subscripted `r_-`, `r_+`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentField {
    grid: Grid,
    values: Vec<f64>,
    min: f64,
    max: f64,
}

impl ExponentField {
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Invalid {
                what: "exponent field",
                detail: format!(
                    "value count {} does not match node count {}",
                    values.len(),
                    grid.node_count()
                ),
            });
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in &values {
            if !v.is_finite() || v <= 1.0 {
                return Err(Error::Invalid {
                    what: "exponent field",
                    detail: format!("exponent value {v} is not a finite number > 1"),
                });
            }
            min = min.min(v);
            max = max.max(v);
        }
        Ok(ExponentField {
            grid: grid.clone(),
            values,
            min,
            max,
        })
    }

    pub fn from_fn(grid: &Grid, f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let field = ScalarField::from_fn(grid, f);
        Self::from_values(grid, field.values().to_vec())
    }

    pub fn constant(grid: &Grid, c: f64) -> Result<Self> {
        Self::from_fn(grid, |_| c)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `r_-`, the minimum over the closed domain.
    pub fn min(&self) -> f64 {
        self.min
    }

    /// `r_+`, the maximum over the closed domain.
    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn interpolate(&self, x: &[f64]) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    /// Mean of the corner values per cell, the quadrature-point sample.
    pub fn cell_averages(&self) -> Vec<f64> {
        cell_averages(&self.grid, &self.values)
    }

    /// Nodewise maximum of two exponent fields on the same grid.
    pub fn pointwise_max(&self, other: &ExponentField) -> Result<ExponentField> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| a.max(b))
            .collect();
        ExponentField::from_values(&self.grid, values)
    }

    /// Nodewise shift by a constant (used for growth margins).
    pub fn shifted(&self, delta: f64) -> Result<ExponentField> {
        let values = self.values.iter().map(|&v| v + delta).collect();
        ExponentField::from_values(&self.grid, values)
    }
}

/// Nonnegative bounded weight samples (the modulating coefficient).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    grid: Grid,
    values: Vec<f64>,
    max: f64,
}

impl WeightField {
    pub fn from_values(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.node_count() {
            return Err(Error::Invalid {
                what: "weight field",
                detail: format!(
                    "value count {} does not match node count {}",
                    values.len(),
                    grid.node_count()
                ),
            });
        }
        let mut max = 0.0f64;
        for &v in &values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Invalid {
                    what: "weight field",
                    detail: format!("weight value {v} is not a finite number >= 0"),
                });
            }
            max = max.max(v);
        }
        Ok(WeightField {
            grid: grid.clone(),
            values,
            max,
        })
    }

    pub fn from_fn(grid: &Grid, f: impl FnMut(&[f64]) -> f64) -> Result<Self> {
        let field = ScalarField::from_fn(grid, f);
        Self::from_values(grid, field.values().to_vec())
    }

    pub fn constant(grid: &Grid, c: f64) -> Result<Self> {
        Self::from_fn(grid, |_| c)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Essential sup of the weight.
    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn interpolate(&self, x: &[f64]) -> f64 {
        self.grid.interpolate(&self.values, x)
    }

    pub fn cell_averages(&self) -> Vec<f64> {
        cell_averages(&self.grid, &self.values)
    }
}

pub(crate) fn cell_averages(grid: &Grid, values: &[f64]) -> Vec<f64> {
    let origins = grid.cell_origin_nodes();
    let corners = grid.corner_offsets();
    let scale = 1.0 / corners.len() as f64;
    origins
        .iter()
        .map(|&o| corners.iter().map(|&off| values[o + off]).sum::<f64>() * scale)
        .collect()
}
