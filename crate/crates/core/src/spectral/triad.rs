use num_complex::Complex;

use super::SquareMatrix;
use crate::error::{Error, Result};
use crate::Scalar;

/// Triad quality; the discriminant is the `q` index of the transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quality {
    Minor = 0,
    Major = 1,
}

impl Quality {
    pub const ALL: [Quality; 2] = [Quality::Minor, Quality::Major];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(q: usize) -> Option<Quality> {
        match q {
            0 => Some(Quality::Minor),
            1 => Some(Quality::Major),
            _ => None,
        }
    }

    /// Semitone offsets of the triad above its root.
    pub fn intervals(self) -> [usize; 3] {
        match self {
            Quality::Minor => [0, 3, 7],
            Quality::Major => [0, 4, 7],
        }
    }
}

/// Eigentriad frequencies (representatives of Z_3), in the canonical order.
pub const BETA1_VALUES: [i8; 3] = [-1, 0, 1];

/// Laplacian of the complete graph induced on a triad's three pitches.
#[derive(Debug, Clone, PartialEq)]
pub struct TriadOperator<T> {
    pub quality: Quality,
    pub support: [usize; 3],
    /// 3x3 block on the support (diagonal 3, off-diagonal 2).
    pub matrix: SquareMatrix<T>,
}

pub fn triad_operator<T: Scalar>(quality: Quality) -> TriadOperator<T> {
    let support = quality.intervals();
    let size = T::lit(support.len() as f64);
    let mut matrix = SquareMatrix::zeros(3);
    for i in 0..3 {
        for j in 0..3 {
            // |I_q| on the support, minus the adjacency of the induced complete graph
            let adjacent = if i != j { T::one() } else { T::zero() };
            matrix[(i, j)] = size - adjacent;
        }
    }
    TriadOperator {
        quality,
        support,
        matrix,
    }
}

impl<T: Scalar> TriadOperator<T> {
    /// The operator embedded in a `pitches x pitches` matrix (zero off the support).
    pub fn embedded(&self, pitches: usize) -> SquareMatrix<T> {
        let mut m = SquareMatrix::zeros(pitches);
        for (i, &pi) in self.support.iter().enumerate() {
            for (j, &pj) in self.support.iter().enumerate() {
                m[(pi, pj)] = self.matrix[(i, j)];
            }
        }
        m
    }

    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        self.embedded(v.len()).mul_complex_vec(v)
    }
}

/// 3-point DFT atom placed on a triad's pitches.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigentriad<T> {
    pub beta1: i8,
    pub quality: Quality,
    pub values: Vec<Complex<T>>,
}

/// Value `exp(2 pi i beta1 n / 3)` at pitch `I_q[n]`, `n = 1, 2, 3`.
pub fn eigentriad<T: Scalar>(beta1: i8, quality: Quality, pitches: usize) -> Result<Eigentriad<T>> {
    if !BETA1_VALUES.contains(&beta1) {
        return Err(Error::Config(format!("beta1 must be -1, 0 or +1 (got {beta1})")));
    }
    if pitches < 12 {
        return Err(Error::Config(format!("eigentriads need at least 12 pitches (got {pitches})")));
    }
    let mut values = vec![Complex::new(T::zero(), T::zero()); pitches];
    for (i, &p) in quality.intervals().iter().enumerate() {
        let n = (i + 1) as i64;
        // reduce the phase index mod 3 so that beta1 n / 3 is exact for n = 3
        let k = (i64::from(beta1) * n).rem_euclid(3);
        let phase = T::TAU() * T::lit(k as f64) / T::lit(3.0);
        values[p] = Complex::from_polar(T::one(), phase);
    }
    Ok(Eigentriad {
        beta1,
        quality,
        values,
    })
}
