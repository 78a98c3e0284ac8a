use serde::{Deserialize, Serialize};

use super::GAMMA2_VALUES;
use crate::error::{Error, Result};

/// Which second-order temporal scales are paired with a first-order scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// `j2 > j1` only.
    #[default]
    Coarser,
    /// Every `j2` for every `j1`.
    All,
}

impl Coupling {
    pub fn j2_range(self, j1: usize, j2_scales: usize) -> std::ops::Range<usize> {
        match self {
            Coupling::Coarser => (j1 + 1).min(j2_scales)..j2_scales,
            Coupling::All => 0..j2_scales,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Coupling::Coarser => "coarser",
            Coupling::All => "all",
        }
    }
}

/// Shape and filter parameters shared by the first- and second-order transforms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransformConfig {
    pub frames: usize,
    pub pitches: usize,
    pub pitch_pad: usize,
    pub j1_scales: usize,
    pub j2_scales: usize,
    pub j2_coupling: Coupling,
    pub sigma: f64,
    pub xi: f64,
    pub gamma2_set: Vec<i8>,
}

impl Default for TransformConfig {
    fn default() -> Self {
        TransformConfig {
            frames: 1024,
            pitches: 128,
            pitch_pad: 132,
            j1_scales: 8,
            j2_scales: 8,
            j2_coupling: Coupling::Coarser,
            sigma: 0.1,
            xi: 2.0 * std::f64::consts::PI / 3.0,
            gamma2_set: GAMMA2_VALUES.to_vec(),
        }
    }
}

impl TransformConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.frames < 2 || !self.frames.is_power_of_two() {
            return bad(format!("frames must be a power of two >= 2 (got {})", self.frames));
        }
        if self.pitches == 0 {
            return bad("pitches must be positive".into());
        }
        if self.pitch_pad % 12 != 0 || self.pitch_pad == 0 {
            return Err(Error::PitchNotMultipleOf12(self.pitch_pad));
        }
        if self.pitch_pad < self.pitches {
            return bad(format!(
                "pitch_pad ({}) must be at least pitches ({})",
                self.pitch_pad, self.pitches
            ));
        }
        if self.j1_scales == 0 || self.j2_scales == 0 {
            return bad("j1_scales and j2_scales must be positive".into());
        }
        if self.j1_scales > 30 || self.j2_scales > 30 {
            return bad("at most 30 temporal scales are supported".into());
        }
        if !(self.sigma.is_finite() && self.sigma > 0.0) {
            return bad(format!("sigma must be positive (got {})", self.sigma));
        }
        if !self.xi.is_finite() {
            return bad("xi must be finite".into());
        }
        if self.xi.abs() > std::f64::consts::PI {
            return Err(Error::Inadmissible {
                frequency: self.xi.abs(),
            });
        }
        if self.gamma2_set.is_empty() {
            return bad("gamma2_set must not be empty".into());
        }
        let mut seen = Vec::new();
        for g in &self.gamma2_set {
            if !GAMMA2_VALUES.contains(g) || seen.contains(g) {
                return bad(format!("gamma2_set entries must be distinct values of -1, 0, 1 (got {:?})", self.gamma2_set));
            }
            seen.push(*g);
        }
        Ok(())
    }

    /// Number of octaves covered by the padded pitch axis.
    pub fn octaves(&self) -> usize {
        self.pitch_pad / 12
    }

    /// `gamma2_set` in canonical (ascending) order.
    pub fn gamma2_sorted(&self) -> Vec<i8> {
        let mut g = self.gamma2_set.clone();
        g.sort_unstable();
        g
    }

    /// Stable text fingerprint of every field that influences the features.
    pub fn fingerprint(&self) -> String {
        format!(
            "frames={};pitches={};pitch_pad={};j1={};j2={};coupling={};sigma={:e};xi={:e};gamma2={:?}",
            self.frames,
            self.pitches,
            self.pitch_pad,
            self.j1_scales,
            self.j2_scales,
            self.j2_coupling.as_str(),
            self.sigma,
            self.xi,
            self.gamma2_sorted()
        )
    }
}
