//! Cyclic Jacobi eigensolver for small dense symmetric matrices.

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::Scalar;

pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen<T> {
    pub values: Vec<T>,
    /// `vectors[i]` belongs to `values[i]`.
    pub vectors: Vec<Vec<T>>,
}

/// Diagonalizes a real symmetric matrix with threshold cyclic Jacobi sweeps.
///
/// Pivots are visited in row-major order of the strict upper triangle. Each
/// eigenvector is scaled so that its largest-magnitude entry is positive (the
/// first such entry on ties). Equal eigenvalues keep the order in which the
/// rotations leave them on the diagonal.
pub fn symmetric_eigendecomposition<T: Scalar>(
    m: &SquareMatrix<T>,
    tol: T,
) -> Result<SymmetricEigen<T>> {
    let n = m.size();
    let asym = m.max_asymmetry();
    if asym > tol {
        return Err(Error::NotSymmetric {
            asymmetry: asym.to_f64_lossy(),
        });
    }
    let mut a = m.clone();
    for i in 0..n {
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)]) / T::lit(2.0);
            a[(i, j)] = avg;
            a[(j, i)] = avg;
        }
    }
    let mut v = SquareMatrix::<T>::identity(n);
    let frob = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(T::zero(), |acc, ij| acc + a[ij] * a[ij])
        .sqrt();
    let target = T::epsilon() * frob;

    let off_norm = |a: &SquareMatrix<T>| {
        let mut s = T::zero();
        for i in 0..n {
            for j in i + 1..n {
                s = s + a[(i, j)] * a[(i, j)];
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        let off = off_norm(&a);
        if off <= target || off.is_zero() {
            converged = true;
            break;
        }
        // skip small pivots in the first sweeps
        let threshold = if sweeps < 3 {
            T::lit(0.2) * off / T::from_usize_lossy(n * n)
        } else {
            T::zero()
        };
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= threshold || apq.is_zero() {
                    continue;
                }
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
    }
    if !converged {
        let off = off_norm(&a);
        if off > target {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off.to_f64_lossy(),
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .partial_cmp(&a[(j, j)])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values: Vec<T> = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors: Vec<Vec<T>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<T> = (0..n).map(|i| v[(i, k)]).collect();
            canonical_sign(&mut col);
            col
        })
        .collect();

    for (lambda, vec) in values.iter().zip(&vectors) {
        let residual = m.eigen_residual(*lambda, vec);
        if residual > tol {
            return Err(Error::Residual {
                residual: residual.to_f64_lossy(),
                tol: tol.to_f64_lossy(),
                context: format!("Jacobi eigenpair lambda = {lambda}"),
            });
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

fn rotate<T: Scalar>(a: &mut SquareMatrix<T>, v: &mut SquareMatrix<T>, p: usize, q: usize) {
    let n = a.size();
    let two = T::lit(2.0);
    let apq = a[(p, q)];
    let theta = (a[(q, q)] - a[(p, p)]) / (two * apq);
    let t = {
        let mag = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
        if theta < T::zero() {
            -mag
        } else {
            mag
        }
    };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    let tau = s / (T::one() + c);

    a[(p, p)] = a[(p, p)] - t * apq;
    a[(q, q)] = a[(q, q)] + t * apq;
    a[(p, q)] = T::zero();
    a[(q, p)] = T::zero();
    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[(r, p)];
        let arq = a[(r, q)];
        let new_rp = arp - s * (arq + tau * arp);
        let new_rq = arq + s * (arp - tau * arq);
        a[(r, p)] = new_rp;
        a[(p, r)] = new_rp;
        a[(r, q)] = new_rq;
        a[(q, r)] = new_rq;
    }
    for r in 0..n {
        let vrp = v[(r, p)];
        let vrq = v[(r, q)];
        v[(r, p)] = vrp - s * (vrq + tau * vrp);
        v[(r, q)] = vrq + s * (vrp - tau * vrq);
    }
}

/// Flips `v` so that its largest-magnitude entry is positive.
fn canonical_sign<T: Scalar>(v: &mut [T]) {
    let max = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
    let slack = max * T::lit(1e-12);
    if let Some(lead) = v.iter().find(|x| x.abs() >= max - slack) {
        if *lead < T::zero() {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn swap_matrix() {
        let m = SquareMatrix::from_rows(&[vec![0.0f64, 1.0], vec![1.0, 0.0]]);
        let eig = symmetric_eigendecomposition(&m, 1e-12).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // largest entry positive
        for v in &eig.vectors {
            let lead = v.iter().cloned().fold(0.0f64, |m, x| if x.abs() > m.abs() + 1e-12 { x } else { m });
            assert!(lead > 0.0);
        }
    }

    #[test]
    fn identity_keeps_standard_basis() {
        let eig = symmetric_eigendecomposition(&SquareMatrix::<f64>::identity(3), 1e-12).unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0, 1.0]);
        assert_eq!(eig.vectors[0], vec![1.0, 0.0, 0.0]);
        assert_eq!(eig.vectors[2], vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = SquareMatrix::from_rows(&[vec![0.0f64, 1.0], vec![0.5, 0.0]]);
        assert!(matches!(
            symmetric_eigendecomposition(&m, 1e-12),
            Err(Error::NotSymmetric { .. })
        ));
    }

    #[test]
    fn orthonormal_and_deterministic() {
        let rows: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..7).map(|j| ((i * j) as f64).sin() + ((i + j) as f64).cos()).collect())
            .collect();
        let m = SquareMatrix::from_rows(&rows);
        let a = symmetric_eigendecomposition(&m, 1e-10).unwrap();
        let b = symmetric_eigendecomposition(&m, 1e-10).unwrap();
        assert_eq!(a, b);
        for i in 0..7 {
            for j in 0..7 {
                let dot: f64 = a.vectors[i].iter().zip(&a.vectors[j]).map(|(x, y)| x * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-12);
            }
        }
        assert!(a.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn works_in_single_precision() {
        let m = SquareMatrix::from_rows(&[
            vec![3.0f32, 2.0, 2.0],
            vec![2.0, 3.0, 2.0],
            vec![2.0, 2.0, 3.0],
        ]);
        let eig = symmetric_eigendecomposition(&m, 1e-4).unwrap();
        assert!((eig.values[2] - 7.0).abs() < 1e-5);
    }
}
