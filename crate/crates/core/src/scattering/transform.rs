use serde::Serialize;

use super::first_order::{s1, FirstOrderPlan, S1Matrix};
use super::second_order::{S2Vector, SecondOrderLayout, SecondOrderPlan};
use crate::error::{Error, Result};
use crate::filterbank::{build_prog_filterbank, build_triad_filterbank, TransformConfig};
use crate::pianoroll::PianoRoll;
use crate::spectral::{eigenprogression_basis, tonnetz_laplacian, EigenprogressionBasis};
use crate::Scalar;

/// Residual bound for the eigenprogression basis used by the transform.
pub const BASIS_TOL: f64 = 1e-10;

/// Filterbank dimensions recorded next to every transformed piece.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformMetadata {
    pub config_fingerprint: String,
    pub frames: usize,
    pub pitch_pad: usize,
    pub j1_scales: usize,
    pub j2_scales: usize,
    pub j2_coupling: &'static str,
    pub beta2_count: usize,
    pub eigenvalues: Vec<f64>,
    pub gamma2: Vec<i8>,
    pub s1_dim: usize,
    pub s2_dim: usize,
    /// `(j1, beta1)` slices with no coupled `j2`.
    pub omitted_slices: Vec<(usize, i8)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformOutput<T> {
    pub s1: S1Matrix<T>,
    pub s2: S2Vector<T>,
}

/// First- and second-order plans for one configuration, reusable across pieces.
#[derive(Debug, Clone)]
pub struct Transformer<T: Scalar> {
    config: TransformConfig,
    basis: EigenprogressionBasis<T>,
    first: FirstOrderPlan<T>,
    second: SecondOrderPlan<T>,
}

impl<T: Scalar> Transformer<T> {
    pub fn new(config: &TransformConfig) -> Result<Self> {
        config.validate()?;
        let basis = eigenprogression_basis(&tonnetz_laplacian(), T::lit(BASIS_TOL))?;
        Self::with_basis(config, basis)
    }

    /// Same as [`Transformer::new`] with a caller-supplied eigenprogression basis.
    pub fn with_basis(config: &TransformConfig, basis: EigenprogressionBasis<T>) -> Result<Self> {
        config.validate()?;
        let triad = build_triad_filterbank(config, config.pitch_pad)?;
        let prog = build_prog_filterbank(config, &basis, config.pitch_pad)?;
        Ok(Transformer {
            config: config.clone(),
            first: FirstOrderPlan::new(&triad)?,
            second: SecondOrderPlan::new(&prog)?,
            basis,
        })
    }

    pub fn config(&self) -> &TransformConfig {
        &self.config
    }

    pub fn basis(&self) -> &EigenprogressionBasis<T> {
        &self.basis
    }

    pub fn first_order(&self) -> &FirstOrderPlan<T> {
        &self.first
    }

    pub fn second_order(&self) -> &SecondOrderPlan<T> {
        &self.second
    }

    pub fn layout(&self) -> SecondOrderLayout {
        self.second.layout(self.config.j1_scales)
    }

    pub fn metadata(&self) -> TransformMetadata {
        let layout = self.layout();
        TransformMetadata {
            config_fingerprint: self.config.fingerprint(),
            frames: self.config.frames,
            pitch_pad: self.config.pitch_pad,
            j1_scales: self.config.j1_scales,
            j2_scales: self.config.j2_scales,
            j2_coupling: self.config.j2_coupling.as_str(),
            beta2_count: layout.beta2_count,
            eigenvalues: self.basis.wavelets.iter().map(|w| w.eigenvalue.to_f64_lossy()).collect(),
            gamma2: layout.gamma2_values.clone(),
            s1_dim: self.config.j1_scales * 3,
            s2_dim: layout.dimension(),
            omitted_slices: layout.omitted_slices(),
        }
    }

    /// Pads an unpadded roll (`frames x pitches`) to the transform's pitch axis.
    pub fn prepare(&self, roll: &PianoRoll<T>) -> Result<PianoRoll<T>> {
        let c = &self.config;
        if roll.frames() != c.frames {
            return Err(Error::Shape(format!(
                "roll has {} frames, config expects {}",
                roll.frames(),
                c.frames
            )));
        }
        if roll.pitches() == c.pitch_pad {
            return Ok(roll.clone());
        }
        if roll.pitches() != c.pitches {
            return Err(Error::Shape(format!(
                "roll has {} pitches, config expects {} (or {} padded)",
                roll.pitches(),
                c.pitches,
                c.pitch_pad
            )));
        }
        roll.pad_pitches(c.pitch_pad)
    }

    pub fn transform(&self, roll: &PianoRoll<T>) -> Result<TransformOutput<T>> {
        let x = self.prepare(roll)?;
        let u = self.first.u1(&x)?;
        let s1 = s1(&u);
        let s2 = self.second.s2(&u)?;
        Ok(TransformOutput { s1, s2 })
    }
}
