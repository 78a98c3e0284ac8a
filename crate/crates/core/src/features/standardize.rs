use super::FeatureMatrix;
use crate::error::{Error, Result};
use crate::Scalar;

/// Per-column mean and population standard deviation.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization<T> {
    pub means: Vec<T>,
    pub stds: Vec<T>,
}

impl<T: Scalar> Standardization<T> {
    /// Fits column statistics. Constant columns get their common value as mean
    /// and a standard deviation of 1, so they standardize to exact zeros.
    pub fn fit(x: &FeatureMatrix<T>) -> Result<Self> {
        let n = x.rows();
        if n < 2 {
            return Err(Error::Shape(format!("standardization needs at least 2 rows (got {n})")));
        }
        let nf = T::from_usize_lossy(n);
        let mut means = Vec::with_capacity(x.cols());
        let mut stds = Vec::with_capacity(x.cols());
        for j in 0..x.cols() {
            let col = x.column(j);
            if col.iter().all(|&v| v == col[0]) {
                means.push(col[0]);
                stds.push(T::one());
                continue;
            }
            let mean = col.iter().fold(T::zero(), |a, &v| a + v) / nf;
            let var = col.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean)) / nf;
            let std = var.sqrt();
            means.push(mean);
            stds.push(if std > T::zero() { std } else { T::one() });
        }
        Ok(Standardization { means, stds })
    }

    pub fn select(&self, mask: &[usize]) -> Self {
        Standardization {
            means: mask.iter().map(|&j| self.means[j]).collect(),
            stds: mask.iter().map(|&j| self.stds[j]).collect(),
        }
    }

    /// `(v - mean) / std` for one row.
    pub fn apply_row(&self, row: &[T]) -> Result<Vec<T>> {
        if row.len() != self.means.len() {
            return Err(Error::Dimension {
                expected: self.means.len(),
                found: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(&v, (&m, &s))| (v - m) / s)
            .collect())
    }

    /// Statistics of applying `self` and then `next`.
    fn then(&self, next: &Self) -> Self {
        Standardization {
            means: self
                .means
                .iter()
                .zip(&self.stds)
                .zip(&next.means)
                .map(|((&m, &s), &m2)| m + s * m2)
                .collect(),
            stds: self.stds.iter().zip(&next.stds).map(|(&s, &s2)| s * s2).collect(),
        }
    }
}

/// Standardizes every column to zero mean and unit population variance, or
/// applies `stats` fitted elsewhere (e.g. on a training fold).
pub fn standardize<T: Scalar>(x: &FeatureMatrix<T>, stats: Option<&Standardization<T>>) -> Result<FeatureMatrix<T>> {
    let fitted;
    let stats = match stats {
        Some(s) => s,
        None => {
            fitted = Standardization::fit(x)?;
            &fitted
        }
    };
    let mut values = Vec::with_capacity(x.values().len());
    for i in 0..x.rows() {
        values.extend(stats.apply_row(x.row(i))?);
    }
    let mut out = FeatureMatrix::new(values, x.paths().to_vec(), x.labels().to_vec())?;
    out.shrinkage_mask = x.shrinkage_mask.clone();
    out.standardization = Some(match &x.standardization {
        Some(prev) => prev.then(stats),
        None => stats.clone(),
    });
    Ok(out)
}
