//! Model files: magic `EPSV`, version, `d`, C, bias, `d` weights (f64 LE), the
//! two class names, `d` feature paths, trailing CRC32.

use std::fs;
use std::path::Path;

use super::train::{LinearSvmModel, TrainDiagnostics};
use crate::binfmt::{Decoder, Encoder};
use crate::error::Result;
use crate::Scalar;

pub const MODEL_MAGIC: &[u8; 4] = b"EPSV";
pub const MODEL_VERSION: u32 = 1;

pub fn write_model<T: Scalar>(m: &LinearSvmModel<T>) -> Result<Vec<u8>> {
    let mut e = Encoder::new(MODEL_MAGIC, MODEL_VERSION);
    e.u32(m.weights.len())?;
    e.f64(m.c);
    e.f64(m.bias.to_f64_lossy());
    for w in &m.weights {
        e.f64(w.to_f64_lossy());
    }
    for c in &m.classes {
        e.str(c)?;
    }
    for p in &m.paths {
        e.str(p)?;
    }
    Ok(e.finish())
}

/// Reads a model. Training diagnostics are not stored and come back empty.
pub fn read_model<T: Scalar>(bytes: &[u8]) -> Result<LinearSvmModel<T>> {
    let mut r = Decoder::open(bytes, MODEL_MAGIC, MODEL_VERSION, "SVM model")?;
    let d = r.u32()?;
    let c = r.f64()?;
    let bias = T::lit(r.f64()?);
    let weights = (0..d).map(|_| r.f64().map(T::lit)).collect::<Result<Vec<_>>>()?;
    let classes = [r.str()?, r.str()?];
    let paths = (0..d).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    r.done()?;
    Ok(LinearSvmModel {
        weights,
        bias,
        c,
        classes,
        paths,
        diagnostics: TrainDiagnostics {
            epochs: 0,
            converged: true,
            max_violation: 0.0,
            dual_objective: Vec::new(),
            alphas: Vec::new(),
        },
    })
}

pub fn save_model<T: Scalar>(m: &LinearSvmModel<T>, path: &Path) -> Result<()> {
    fs::write(path, write_model(m)?)?;
    Ok(())
}

pub fn load_model<T: Scalar>(path: &Path) -> Result<LinearSvmModel<T>> {
    read_model(&fs::read(path)?)
}
