use num_complex::Complex;

use super::{temporal_gabor, TemporalGabor, TransformConfig};
use crate::error::Result;
use crate::spectral::{eigentriad, Eigentriad, Quality, BETA1_VALUES};
use crate::Scalar;

/// Index of one separable first-order filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TriadFilter {
    pub j1: usize,
    pub beta1: i8,
    pub quality: Quality,
}

/// First-order filters `psi_j1[t] * eigentriad_(beta1, q)[p]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriadFilterbank<T> {
    pub temporal: Vec<TemporalGabor<T>>,
    /// Indexed `[beta1 index * 2 + q]`.
    pub atoms: Vec<Eigentriad<T>>,
    /// Ordered with `j1` outer, `beta1` middle, `q` inner.
    pub filters: Vec<TriadFilter>,
}

pub fn beta1_index(beta1: i8) -> usize {
    (beta1 + 1) as usize
}

pub fn build_triad_filterbank<T: Scalar>(config: &TransformConfig, pitches: usize) -> Result<TriadFilterbank<T>> {
    let temporal = (0..config.j1_scales)
        .map(|j| temporal_gabor(j, config.frames, T::lit(config.sigma), T::lit(config.xi)))
        .collect::<Result<Vec<_>>>()?;
    let mut atoms = Vec::with_capacity(6);
    for beta1 in BETA1_VALUES {
        for q in Quality::ALL {
            atoms.push(eigentriad(beta1, q, pitches)?);
        }
    }
    let mut filters = Vec::with_capacity(config.j1_scales * 6);
    for j1 in 0..config.j1_scales {
        for beta1 in BETA1_VALUES {
            for quality in Quality::ALL {
                filters.push(TriadFilter { j1, beta1, quality });
            }
        }
    }
    Ok(TriadFilterbank {
        temporal,
        atoms,
        filters,
    })
}

impl<T: Scalar> TriadFilterbank<T> {
    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn j1_scales(&self) -> usize {
        self.temporal.len()
    }

    pub fn frames(&self) -> usize {
        self.temporal.first().map_or(0, |g| g.values.len())
    }

    pub fn pitches(&self) -> usize {
        self.atoms.first().map_or(0, |a| a.values.len())
    }

    pub fn atom(&self, beta1: i8, quality: Quality) -> &Eigentriad<T> {
        &self.atoms[beta1_index(beta1) * 2 + quality.index()]
    }

    /// Filter value at `(t, p)`.
    pub fn value(&self, filter: &TriadFilter, t: usize, p: usize) -> Complex<T> {
        self.temporal[filter.j1].values[t] * self.atom(filter.beta1, filter.quality).values[p]
    }
}
