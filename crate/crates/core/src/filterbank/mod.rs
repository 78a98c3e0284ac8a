//! Temporal and spiral Gabor wavelets and the separable filterbanks built from them.

mod config;
mod prog;
mod report;
mod spiral;
mod temporal;
mod triad;

pub use config::{Coupling, TransformConfig};
pub use prog::{build_prog_filterbank, ProgFilter, ProgFilterbank, ProgPitchFilter};
pub use report::{admissibility_report, AdmissibilityRow};
pub use spiral::{signed_offset, spiral_gabor, SpiralGabor, GAMMA2_VALUES};
pub use temporal::{temporal_gabor, TemporalGabor};
pub use triad::{build_triad_filterbank, TriadFilter, TriadFilterbank};
