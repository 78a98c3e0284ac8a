//! Canonical eigenprogression basis of the Tonnetz Laplacian.
//!
//! The Laplacian commutes with pitch translation `p -> p + 1 (mod 12)`, so it is
//! block-diagonalized by the Fourier modes `exp(2 pi i w p / 12) u[q]`. For each
//! pitch frequency `w` the 2x2 Hermitian quality block is diagonalized in closed
//! form. Frequencies `w` and `12 - w` are conjugate and span the same real
//! eigenspace, so only `w = 0..=6` are kept. For `w` in `{0, 6}` the eigenvector
//! is real and is used as is; otherwise its real and imaginary parts are an
//! orthogonal pair of real eigenvectors which form the complex wavelet.

use std::cmp::Ordering;

use num_complex::Complex;

use super::{symmetric_eigendecomposition, vertex_index, TonnetzLaplacian, PITCH_CLASSES};
use crate::error::{Error, Result};
use crate::Scalar;

/// Eigenvalues closer than this are treated as equal.
pub const EIGENVALUE_GROUPING_TOL: f64 = 1e-8;

/// One wavelet of the basis; `values[vertex_index(p, q)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenprogression<T> {
    pub index: usize,
    pub eigenvalue: T,
    pub frequency: usize,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> Eigenprogression<T> {
    pub fn at(&self, p: usize, q: usize) -> Complex<T> {
        self.values[vertex_index(p, q)]
    }

    pub fn real_part(&self) -> Vec<T> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn imag_part(&self) -> Vec<T> {
        self.values.iter().map(|v| v.im).collect()
    }

    /// True when the wavelet spans a 2-dimensional real eigenspace.
    pub fn is_complex(&self) -> bool {
        self.values.iter().any(|v| !v.im.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenprogressionBasis<T> {
    pub wavelets: Vec<Eigenprogression<T>>,
}

fn eigen_2x2<T: Scalar>(a: T, b: Complex<T>, d: T) -> [(T, [Complex<T>; 2]); 2] {
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let diff = (a - d) * half;
    let r = (diff * diff + b.norm_sqr()).sqrt();
    if b.norm() <= T::epsilon() * (a.abs() + d.abs() + T::one()) {
        return if a <= d {
            [(a, [one, zero]), (d, [zero, one])]
        } else {
            [(d, [zero, one]), (a, [one, zero])]
        };
    }
    let mut out = [(T::zero(), [zero, zero]); 2];
    for (slot, lambda) in out.iter_mut().zip([mean - r, mean + r]) {
        let mut u = [b, Complex::new(lambda - a, T::zero())];
        let norm = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        u.iter_mut().for_each(|x| *x = *x / norm);
        // fix the phase: first non-negligible component real positive
        let lead = if u[0].norm() > T::lit(1e-12) { u[0] } else { u[1] };
        let phase = lead.conj() / lead.norm();
        u.iter_mut().for_each(|x| *x = *x * phase);
        *slot = (lambda, u);
    }
    out
}

fn residual<T: Scalar>(l: &TonnetzLaplacian<T>, lambda: T, v: &[T]) -> T {
    l.matrix.eigen_residual(lambda, v)
}

/// Builds the canonical basis and checks every wavelet against `tol`.
pub fn eigenprogression_basis<T: Scalar>(
    l: &TonnetzLaplacian<T>,
    tol: T,
) -> Result<EigenprogressionBasis<T>> {
    let m = &l.matrix;
    let n = 2 * PITCH_CLASSES;
    if m.size() != n {
        return Err(Error::Shape(format!("Tonnetz Laplacian must be {n}x{n}")));
    }
    let twelve = T::from_usize_lossy(PITCH_CLASSES);
    let mode = |w: usize, p: usize| {
        let k = (w * p) % PITCH_CLASSES;
        Complex::from_polar(T::one(), T::TAU() * T::from_usize_lossy(k) / twelve)
    };

    let mut block_spectrum = Vec::with_capacity(n);
    let mut wavelets = Vec::new();
    for w in 0..PITCH_CLASSES {
        // B[q][q'] = sum_p' L[(0,q),(p',q')] exp(2 pi i w p' / 12)
        let mut block = [[Complex::new(T::zero(), T::zero()); 2]; 2];
        for (q, row) in block.iter_mut().enumerate() {
            for (q2, entry) in row.iter_mut().enumerate() {
                for p2 in 0..PITCH_CLASSES {
                    let lv = m[(vertex_index(0, q), vertex_index(p2, q2))];
                    *entry = *entry + mode(w, p2) * lv;
                }
            }
        }
        let pairs = eigen_2x2(block[0][0].re, block[0][1], block[1][1].re);
        block_spectrum.extend(pairs.iter().map(|(lambda, _)| *lambda));
        if w > PITCH_CLASSES / 2 {
            continue;
        }
        let real_mode = w == 0 || 2 * w == PITCH_CLASSES;
        for (lambda, u) in pairs {
            let mut values = vec![Complex::new(T::zero(), T::zero()); n];
            for p in 0..PITCH_CLASSES {
                for q in 0..2 {
                    values[vertex_index(p, q)] = mode(w, p) * u[q];
                }
            }
            let scale = if real_mode {
                // drop rounding noise in the imaginary part of real modes
                values.iter_mut().for_each(|v| v.im = T::zero());
                T::one() / twelve.sqrt()
            } else {
                // Re and Im each carry half the energy of the unit Fourier mode
                T::lit(2.0).sqrt() / twelve.sqrt()
            };
            values.iter_mut().for_each(|v| *v = *v * scale);
            wavelets.push(Eigenprogression {
                index: 0,
                eigenvalue: lambda,
                frequency: w,
                values,
            });
        }
    }

    let grouping = T::lit(EIGENVALUE_GROUPING_TOL);
    wavelets.sort_by(|a, b| {
        if (a.eigenvalue - b.eigenvalue).abs() <= grouping {
            a.frequency.cmp(&b.frequency)
        } else {
            a.eigenvalue.partial_cmp(&b.eigenvalue).unwrap_or(Ordering::Equal)
        }
    });
    for (i, w) in wavelets.iter_mut().enumerate() {
        w.index = i;
    }

    // cross-check the block spectrum against a direct diagonalization
    let direct = symmetric_eigendecomposition(m, tol)?;
    block_spectrum.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    for (a, b) in block_spectrum.iter().zip(&direct.values) {
        if (*a - *b).abs() > grouping {
            return Err(Error::Residual {
                residual: (*a - *b).abs().to_f64_lossy(),
                tol: EIGENVALUE_GROUPING_TOL,
                context: "block spectrum differs from direct eigendecomposition".into(),
            });
        }
    }

    let basis = EigenprogressionBasis { wavelets };
    basis.validate(l, tol)?;
    Ok(basis)
}

impl<T: Scalar> EigenprogressionBasis<T> {
    pub fn len(&self) -> usize {
        self.wavelets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavelets.is_empty()
    }

    /// Largest eigen-residual over the real and imaginary parts of all wavelets.
    pub fn max_residual(&self, l: &TonnetzLaplacian<T>) -> T {
        self.wavelets
            .iter()
            .flat_map(|w| {
                [
                    residual(l, w.eigenvalue, &w.real_part()),
                    residual(l, w.eigenvalue, &w.imag_part()),
                ]
            })
            .fold(T::zero(), T::max)
    }

    /// Checks eigen-residuals, unit norms of both parts and their orthogonality.
    pub fn validate(&self, l: &TonnetzLaplacian<T>, tol: T) -> Result<()> {
        for w in &self.wavelets {
            let re = w.real_part();
            let im = w.imag_part();
            for (part, name) in [(&re, "real"), (&im, "imaginary")] {
                let r = residual(l, w.eigenvalue, part);
                if r > tol {
                    return Err(Error::Residual {
                        residual: r.to_f64_lossy(),
                        tol: tol.to_f64_lossy(),
                        context: format!("{name} part of eigenprogression {}", w.index),
                    });
                }
            }
            let norm = |v: &[T]| v.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
            let dot = re.iter().zip(&im).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
            let norm_ok = (norm(&re) - T::one()).abs() <= tol
                && (!w.is_complex() || (norm(&im) - T::one()).abs() <= tol);
            if !norm_ok || dot.abs() > tol {
                return Err(Error::Residual {
                    residual: dot.abs().to_f64_lossy(),
                    tol: tol.to_f64_lossy(),
                    context: format!("normalization of eigenprogression {}", w.index),
                });
            }
        }
        Ok(())
    }

    /// Replaces wavelet `k` by `exp(i phi)` times itself, optionally conjugated first.
    ///
    /// This is another admissible choice of orthonormal pair for the same eigenspace.
    pub fn rebased(&self, k: usize, phi: T, conjugate: bool) -> Self {
        let mut out = self.clone();
        let rot = Complex::from_polar(T::one(), phi);
        for v in &mut out.wavelets[k].values {
            let base = if conjugate { v.conj() } else { *v };
            *v = base * rot;
        }
        out
    }

    /// Rows `(beta2, lambda, omega, p, q, re, im)` as CSV text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta2,lambda,omega,p,q,re,im\n");
        for w in &self.wavelets {
            for p in 0..PITCH_CLASSES {
                for q in 0..2 {
                    let v = w.at(p, q);
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        w.index, w.eigenvalue, w.frequency, p, q, v.re, v.im
                    ));
                }
            }
        }
        out
    }
}
