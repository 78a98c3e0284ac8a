use num_complex::Complex;

use super::temporal::circular;
use crate::Scalar;

pub const GAMMA2_VALUES: [i8; 3] = [-1, 0, 1];

/// Gabor wavelet over octaves of the pitch spiral, indexed by octave `0..O`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpiralGabor<T> {
    pub gamma2: i8,
    pub values: Vec<Complex<T>>,
}

/// Signed circular octave offset of octave `o` among `octaves`: in `(-O/2, O/2]`.
pub fn signed_offset(o: usize, octaves: usize) -> i64 {
    circular(o, octaves)
}

/// For `gamma2 = +-1`: `exp(-c^2 / (2 sigma^2)) exp(i gamma2 xi c)` at signed
/// offset `c`, so the value at `c = 0` is 1. For `gamma2 = 0`: all ones.
pub fn spiral_gabor<T: Scalar>(gamma2: i8, octaves: usize, sigma: T, xi: T) -> SpiralGabor<T> {
    let g = T::lit(f64::from(gamma2));
    let two = T::lit(2.0);
    let values = (0..octaves)
        .map(|o| {
            if gamma2 == 0 {
                return Complex::new(T::one(), T::zero());
            }
            let c = T::lit(signed_offset(o, octaves) as f64);
            let env = (-(g * g * c * c) / (two * sigma * sigma)).exp();
            Complex::from_polar(env, g * xi * c)
        })
        .collect();
    SpiralGabor { gamma2, values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const XI: f64 = 2.0 * PI / 3.0;

    #[test]
    fn zero_frequency_is_constant() {
        let s = spiral_gabor::<f64>(0, 11, 0.1, XI);
        assert_eq!(s.values.len(), 11);
        assert!(s.values.iter().all(|v| *v == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn envelope_values() {
        let s = spiral_gabor::<f64>(1, 11, 0.1, XI);
        assert_eq!(s.values[0], Complex::new(1.0, 0.0));
        assert!((s.values[1].norm() - (-50f64).exp()).abs() < 1e-30);
        assert!((s.values[10].norm() - (-50f64).exp()).abs() < 1e-30);
    }

    #[test]
    fn opposite_spin_is_conjugate() {
        let up = spiral_gabor::<f64>(1, 11, 0.1, XI);
        let down = spiral_gabor::<f64>(-1, 11, 0.1, XI);
        for (a, b) in up.values.iter().zip(&down.values) {
            assert!((a.conj() - b).norm() < 1e-300);
        }
    }

    #[test]
    fn offsets_are_centered() {
        let offs: Vec<i64> = (0..11).map(|o| signed_offset(o, 11)).collect();
        assert_eq!(offs, vec![0, 1, 2, 3, 4, 5, -5, -4, -3, -2, -1]);
    }
}
