use serde::Serialize;

use super::TemporalGabor;
use crate::Scalar;

/// Diagnostics for one temporal scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityRow {
    pub j: usize,
    pub center_frequency: f64,
    /// Envelope standard deviation in samples.
    pub envelope_width: f64,
    pub sub_sample_envelope: bool,
    /// Center frequency above pi.
    pub inadmissible: bool,
}

pub fn admissibility_report<T: Scalar>(temporal: &[TemporalGabor<T>]) -> Vec<AdmissibilityRow> {
    temporal
        .iter()
        .map(|g| {
            let center = g.center_frequency().abs().to_f64_lossy();
            let width = g.envelope_width().to_f64_lossy();
            AdmissibilityRow {
                j: g.j,
                center_frequency: center,
                envelope_width: width,
                sub_sample_envelope: width < 1.0,
                inadmissible: center > std::f64::consts::PI,
            }
        })
        .collect()
}
