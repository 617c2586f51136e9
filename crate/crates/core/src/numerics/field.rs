use std::sync::Arc;

use super::grid::Grid2D;
use crate::error::{Error, Result};

/// Real values on the masked nodes of a grid; unmasked slots hold NaN.
#[derive(Clone, Debug)]
pub struct ScalarField {
    grid: Arc<Grid2D>,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn from_fn(grid: &Arc<Grid2D>, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                if grid.is_masked(k) {
                    let (x, y) = grid.coords(k);
                    f(x, y)
                } else {
                    f64::NAN
                }
            })
            .collect();
        ScalarField { grid: grid.clone(), values }
    }

    /// Builds a field from per-node values; unmasked entries are overwritten with NaN.
    pub fn from_values(grid: &Arc<Grid2D>, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "field has {} values, grid has {} nodes",
                values.len(),
                grid.len()
            )));
        }
        for (k, v) in values.iter_mut().enumerate() {
            if !grid.is_masked(k) {
                *v = f64::NAN;
            }
        }
        Ok(ScalarField { grid: grid.clone(), values })
    }

    pub fn constant(grid: &Arc<Grid2D>, c: f64) -> Self {
        Self::from_fn(grid, |_, _| c)
    }

    /// Node-wise map over masked nodes; the closure receives `(k, value)`.
    pub fn map_indexed(&self, f: impl Fn(usize, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| if self.grid.is_masked(k) { f(k, v) } else { f64::NAN })
            .collect();
        ScalarField { grid: self.grid.clone(), values }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        self.map_indexed(|_, v| f(v))
    }

    /// Builds a field node by node from an index closure on the same grid.
    pub fn generate(grid: &Arc<Grid2D>, f: impl Fn(usize) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| if grid.is_masked(k) { f(k) } else { f64::NAN })
            .collect();
        ScalarField { grid: grid.clone(), values }
    }

    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.same_grid(other)?;
        Ok(self.map_indexed(|k, v| f(v, other.values[k])))
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn same_grid(&self, other: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || *self.grid == *other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, k: usize) -> f64 {
        self.values[k]
    }

    pub fn at_ij(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    pub fn anchor_value(&self) -> f64 {
        self.values[self.grid.anchor()]
    }

    /// Same field shifted so the anchor value is zero.
    pub fn anchored(&self) -> Self {
        let c = self.anchor_value();
        self.map(|v| v - c)
    }

    pub fn masked_values(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.masked_indices().map(move |k| self.values[k])
    }

    pub fn max_abs(&self) -> f64 {
        self.masked_values().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.masked_values().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.masked_values().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the first masked node with a non-finite value.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.grid.masked_indices().find(|&k| !self.values[k].is_finite())
    }

    /// The same values on a grid with an identical layout but a different
    /// mask or anchor (e.g. after re-anchoring).
    pub fn with_grid(&self, grid: &Arc<Grid2D>) -> Result<Self> {
        if grid.nx() != self.grid.nx() || grid.ny() != self.grid.ny() {
            return Err(Error::GridMismatch);
        }
        Self::from_values(grid, self.values.clone())
    }
}

/// A pair of scalar fields on one grid.
#[derive(Clone, Debug)]
pub struct VectorField2 {
    pub v1: ScalarField,
    pub v2: ScalarField,
}

impl VectorField2 {
    pub fn new(v1: ScalarField, v2: ScalarField) -> Result<Self> {
        v1.same_grid(&v2)?;
        Ok(VectorField2 { v1, v2 })
    }

    pub fn from_fn(grid: &Arc<Grid2D>, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        VectorField2 {
            v1: ScalarField::from_fn(grid, |x, y| f(x, y).0),
            v2: ScalarField::from_fn(grid, |x, y| f(x, y).1),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        self.v1.grid()
    }

    /// `max |V|` over masked nodes (Euclidean length).
    pub fn max_norm(&self) -> f64 {
        self.grid()
            .masked_indices()
            .map(|k| self.v1.at(k).hypot(self.v2.at(k)))
            .fold(0.0, f64::max)
    }

    pub fn sub(&self, other: &VectorField2) -> Result<Self> {
        Ok(VectorField2 {
            v1: self.v1.sub(&other.v1)?,
            v2: self.v2.sub(&other.v2)?,
        })
    }

    /// Componentwise max of `|v1|, |v2|` at each node.
    pub fn max_component_abs(&self) -> ScalarField {
        self.v1.map_indexed(|k, a| a.abs().max(self.v2.at(k).abs()))
    }
}
