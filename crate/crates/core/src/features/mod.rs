//! Dataset feature matrices: ablation levels, standardization, energy-based
//! shrinkage and the binary feature-matrix file.

mod ablation;
mod file;
mod shrink;
mod standardize;

pub use ablation::{ablate, AblationLevel};
pub use file::{load_features, read_features, save_features, write_features, FEATURE_MAGIC, FEATURE_VERSION};
pub use shrink::{column_energies, shrink_select, DEFAULT_ENERGY_FRACTION};
pub use standardize::{standardize, Standardization};

use crate::error::{Error, Result};
use crate::Scalar;

/// `n x d` feature values (row-major) with column paths and row labels.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    values: Vec<T>,
    rows: usize,
    paths: Vec<String>,
    labels: Vec<String>,
    pub standardization: Option<Standardization<T>>,
    /// Kept column indices into the matrix this one was selected from.
    pub shrinkage_mask: Option<Vec<usize>>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(values: Vec<T>, paths: Vec<String>, labels: Vec<String>) -> Result<Self> {
        let d = paths.len();
        let n = labels.len();
        if values.len() != n * d {
            return Err(Error::Dimension {
                expected: n * d,
                found: values.len(),
            });
        }
        Ok(FeatureMatrix {
            values,
            rows: n,
            paths,
            labels,
            standardization: None,
            shrinkage_mask: None,
        })
    }

    /// Builds a matrix from rows that all share `paths`.
    pub fn from_rows(rows: Vec<Vec<T>>, paths: Vec<String>, labels: Vec<String>) -> Result<Self> {
        let d = paths.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::Dimension {
                expected: d,
                found: bad.len(),
            });
        }
        Self::new(rows.into_iter().flatten().collect(), paths, labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.paths.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn paths(&self) -> &[String] {
        &self.paths
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> &[T] {
        let d = self.cols();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.cols() + j]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Rows `indices`, in that order. Statistics and mask are carried over.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.cols());
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        FeatureMatrix {
            values,
            rows: indices.len(),
            paths: self.paths.clone(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
            standardization: self.standardization.clone(),
            shrinkage_mask: self.shrinkage_mask.clone(),
        }
    }

    /// Keeps the columns in `mask` (strictly increasing). The recorded mask refers
    /// to the columns of the first unselected ancestor.
    pub fn select_columns(&self, mask: &[usize]) -> Result<Self> {
        if mask.windows(2).any(|w| w[0] >= w[1]) || mask.last().is_some_and(|&j| j >= self.cols()) {
            return Err(Error::Shape(format!(
                "column mask must be strictly increasing and below {}",
                self.cols()
            )));
        }
        let mut values = Vec::with_capacity(self.rows * mask.len());
        for i in 0..self.rows {
            let row = self.row(i);
            values.extend(mask.iter().map(|&j| row[j]));
        }
        let recorded = match &self.shrinkage_mask {
            Some(prev) => mask.iter().map(|&j| prev[j]).collect(),
            None => mask.to_vec(),
        };
        Ok(FeatureMatrix {
            values,
            rows: self.rows,
            paths: mask.iter().map(|&j| self.paths[j].clone()).collect(),
            labels: self.labels.clone(),
            standardization: self.standardization.as_ref().map(|s| s.select(mask)),
            shrinkage_mask: Some(recorded),
        })
    }

    /// Index of the first non-finite entry, as `(row, col)`.
    pub fn first_non_finite(&self) -> Option<(usize, usize)> {
        let d = self.cols().max(1);
        self.values.iter().position(|v| !v.is_finite()).map(|k| (k / d, k % d))
    }
}
