use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Error kinds raised while decoding a Standard MIDI File.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MidiErrorKind {
    #[error("missing MThd header chunk")]
    MissingHeader,
    #[error("malformed header chunk: {0}")]
    MalformedHeader(String),
    #[error("unsupported SMF format {0}")]
    UnsupportedFormat(u16),
    #[error("SMPTE time division is not supported")]
    UnsupportedDivision,
    #[error("truncated variable-length quantity")]
    TruncatedVlq,
    #[error("unexpected end of data")]
    UnexpectedEof,
    #[error("expected MTrk chunk")]
    MissingTrack,
    #[error("data byte without running status")]
    NoRunningStatus,
    #[error("invalid status byte {0:#04x}")]
    InvalidStatus(u8),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("MIDI parse error at byte offset {offset}: {kind}")]
    Midi { offset: usize, kind: MidiErrorKind },

    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("exactly two classes required (found {found})")]
    ClassCount { found: usize },

    #[error("missing input file {0}")]
    MissingFile(PathBuf),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("eigen-residual {residual:e} exceeds tolerance {tol:e} ({context})")]
    Residual {
        residual: f64,
        tol: f64,
        context: String,
    },

    #[error("inadmissible wavelet: center frequency {frequency} exceeds pi")]
    Inadmissible { frequency: f64 },

    #[error("pitch dimension must be a multiple of 12 (got {0})")]
    PitchNotMultipleOf12(usize),

    #[error("unsupported FFT length {0}")]
    FftLength(usize),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{0}")]
    Format(String),

    #[error("unsupported file version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },

    #[error("checksum mismatch (file truncated or corrupted)")]
    Checksum,

    #[error("feature selection must run on raw features, but standardization was already applied")]
    AlreadyStandardized,

    #[error("training requires both classes to be present")]
    SingleClass,

    #[error("non-finite value in features (row {row}, column {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn midi(offset: usize, kind: MidiErrorKind) -> Self {
        Error::Midi { offset, kind }
    }
}
