use super::FeatureMatrix;
use crate::error::{Error, Result};
use crate::Scalar;

pub const DEFAULT_ENERGY_FRACTION: f64 = 0.5;

/// Mean squared value of every column. Squares are summed in ascending order,
/// so the result does not depend on the row order.
pub fn column_energies<T: Scalar>(x: &FeatureMatrix<T>) -> Vec<T> {
    let n = T::from_usize_lossy(x.rows().max(1));
    (0..x.cols())
        .map(|j| {
            let mut sq: Vec<T> = x.column(j).iter().map(|&v| v * v).collect();
            sq.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
            sq.iter().fold(T::zero(), |a, &v| a + v) / n
        })
        .collect()
}

/// Shortest set of highest-energy columns holding at least `energy_fraction` of
/// the total energy, returned in increasing column order.
///
/// Columns are ranked by energy (descending, ties by index). A fraction of 1 or
/// more keeps every column with non-zero energy. Must run on raw values.
pub fn shrink_select<T: Scalar>(x: &FeatureMatrix<T>, energy_fraction: f64) -> Result<Vec<usize>> {
    if x.standardization.is_some() {
        return Err(Error::AlreadyStandardized);
    }
    if !(energy_fraction.is_finite() && energy_fraction >= 0.0) {
        return Err(Error::Config(format!(
            "energy fraction must be a non-negative number (got {energy_fraction})"
        )));
    }
    if let Some((row, col)) = x.first_non_finite() {
        return Err(Error::NonFinite { row, col });
    }
    let energy = column_energies(x);
    let mut order: Vec<usize> = (0..energy.len()).collect();
    order.sort_by(|&a, &b| {
        energy[b]
            .partial_cmp(&energy[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let total = order.iter().fold(T::zero(), |a, &j| a + energy[j]);
    if total <= T::zero() {
        log::warn!("all feature columns have zero energy; shrinkage keeps nothing");
        return Ok(Vec::new());
    }
    let mut kept = Vec::new();
    if energy_fraction >= 1.0 {
        kept.extend(order.iter().copied().filter(|&j| energy[j] > T::zero()));
    } else {
        let target = T::lit(energy_fraction) * total;
        let mut acc = T::zero();
        for &j in &order {
            if acc >= target {
                break;
            }
            acc = acc + energy[j];
            kept.push(j);
        }
    }
    kept.sort_unstable();
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_energies(e: &[f64]) -> FeatureMatrix<f64> {
        let row: Vec<f64> = e.iter().map(|v| v.sqrt()).collect();
        let paths = (0..e.len()).map(|j| format!("c{j}")).collect();
        FeatureMatrix::from_rows(vec![row.clone(), row], paths, vec!["a".into(), "b".into()]).unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(shrink_select(&with_energies(&[4.0, 3.0, 2.0, 1.0]), 0.5).unwrap(), vec![0, 1]);
        assert_eq!(shrink_select(&with_energies(&[1.0, 3.0, 4.0, 2.0]), 0.5).unwrap(), vec![1, 2]);
        assert_eq!(shrink_select(&with_energies(&[1.0; 4]), 0.5).unwrap(), vec![0, 1]);
        assert_eq!(shrink_select(&with_energies(&[1.0, 0.0, 2.0]), 1.0).unwrap(), vec![0, 2]);
        assert_eq!(shrink_select(&with_energies(&[0.0, 0.0]), 0.5).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn rejects_standardized_input() {
        let x = super::super::standardize(&with_energies(&[1.0, 2.0]), None);
        // two identical rows: every column is constant
        let x = x.unwrap();
        assert!(matches!(shrink_select(&x, 0.5), Err(Error::AlreadyStandardized)));
    }
}
