use num_complex::Complex;

use super::{signed_offset, spiral_gabor, temporal_gabor, Coupling, SpiralGabor, TemporalGabor, TransformConfig};
use crate::error::{Error, Result};
use crate::spectral::{EigenprogressionBasis, PITCH_CLASSES};
use crate::Scalar;

/// Index of one separable second-order filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProgFilter {
    pub j2: usize,
    pub beta2: usize,
    pub gamma2: i8,
}

/// Pitch-quality part `h[p, q] = psi_beta2[p mod 12, q] * spiral_gamma2[octave(p)]`,
/// stored `values[q * pitches + p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgPitchFilter<T> {
    pub beta2: usize,
    pub gamma2: i8,
    pub values: Vec<Complex<T>>,
}

/// Second-order filters `psi_j2[t] * h_(beta2, gamma2)[p, q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProgFilterbank<T> {
    pub pitches: usize,
    pub coupling: Coupling,
    pub eigenvalues: Vec<T>,
    pub temporal: Vec<TemporalGabor<T>>,
    pub spirals: Vec<SpiralGabor<T>>,
    /// Ordered with `beta2` outer and `gamma2` inner.
    pub pitch_filters: Vec<ProgPitchFilter<T>>,
    /// Ordered with `j2` outer, then `beta2`, then `gamma2`.
    pub filters: Vec<ProgFilter>,
}

pub fn build_prog_filterbank<T: Scalar>(
    config: &TransformConfig,
    basis: &EigenprogressionBasis<T>,
    pitches: usize,
) -> Result<ProgFilterbank<T>> {
    if pitches == 0 || pitches % PITCH_CLASSES != 0 {
        return Err(Error::PitchNotMultipleOf12(pitches));
    }
    let octaves = pitches / PITCH_CLASSES;
    let sigma = T::lit(config.sigma);
    let xi = T::lit(config.xi);
    let temporal = (0..config.j2_scales)
        .map(|j| temporal_gabor(j, config.frames, sigma, xi))
        .collect::<Result<Vec<_>>>()?;
    let gammas = config.gamma2_sorted();
    let spirals: Vec<SpiralGabor<T>> = gammas
        .iter()
        .map(|&g| spiral_gabor(g, octaves, sigma, xi))
        .collect();

    let mut pitch_filters = Vec::with_capacity(basis.len() * spirals.len());
    for w in &basis.wavelets {
        for s in &spirals {
            let mut values = vec![Complex::new(T::zero(), T::zero()); 2 * pitches];
            for q in 0..2 {
                for p in 0..pitches {
                    values[q * pitches + p] = w.at(p % PITCH_CLASSES, q) * s.values[p / PITCH_CLASSES];
                }
            }
            pitch_filters.push(ProgPitchFilter {
                beta2: w.index,
                gamma2: s.gamma2,
                values,
            });
        }
    }

    let mut filters = Vec::new();
    for j2 in 0..config.j2_scales {
        for w in &basis.wavelets {
            for &gamma2 in &gammas {
                filters.push(ProgFilter {
                    j2,
                    beta2: w.index,
                    gamma2,
                });
            }
        }
    }
    Ok(ProgFilterbank {
        pitches,
        coupling: config.j2_coupling,
        eigenvalues: basis.wavelets.iter().map(|w| w.eigenvalue).collect(),
        temporal,
        spirals,
        pitch_filters,
        filters,
    })
}

impl<T: Scalar> ProgFilterbank<T> {
    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn beta2_count(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn gamma2_values(&self) -> Vec<i8> {
        self.spirals.iter().map(|s| s.gamma2).collect()
    }

    pub fn j2_scales(&self) -> usize {
        self.temporal.len()
    }

    pub fn octaves(&self) -> usize {
        self.pitches / PITCH_CLASSES
    }

    pub fn pitch_filter(&self, beta2: usize, gamma2: i8) -> &ProgPitchFilter<T> {
        let g = self.spirals.iter().position(|s| s.gamma2 == gamma2).expect("gamma2 in filterbank");
        &self.pitch_filters[beta2 * self.spirals.len() + g]
    }

    /// Filter value at `(t, p, q)`.
    pub fn value(&self, filter: &ProgFilter, t: usize, p: usize, q: usize) -> Complex<T> {
        self.temporal[filter.j2].values[t]
            * self.pitch_filter(filter.beta2, filter.gamma2).values[q * self.pitches + p]
    }

    /// Second-order scales paired with first-order scale `j1`.
    pub fn j2_range(&self, j1: usize) -> std::ops::Range<usize> {
        self.coupling.j2_range(j1, self.j2_scales())
    }

    /// Octave offset of pitch `p` on the spiral, in `(-O/2, O/2]`.
    pub fn octave_offset(&self, p: usize) -> i64 {
        signed_offset(p / PITCH_CLASSES, self.octaves())
    }
}
