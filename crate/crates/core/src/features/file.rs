//! Feature-matrix files: magic `EPFM`, version, `n`, `d`, path table, label
//! table, `n * d` f64 values row-major, a flags byte followed by the optional
//! statistics (means, stds) and mask blocks, and a trailing CRC32.

use std::fs;
use std::path::Path;

use super::{FeatureMatrix, Standardization};
use crate::binfmt::{Decoder, Encoder};
use crate::error::Result;
use crate::Scalar;

pub const FEATURE_MAGIC: &[u8; 4] = b"EPFM";
pub const FEATURE_VERSION: u32 = 1;

const HAS_STATS: u8 = 1;
const HAS_MASK: u8 = 2;

pub fn write_features<T: Scalar>(x: &FeatureMatrix<T>) -> Result<Vec<u8>> {
    let mut e = Encoder::new(FEATURE_MAGIC, FEATURE_VERSION);
    e.u32(x.rows())?;
    e.u32(x.cols())?;
    for p in x.paths() {
        e.str(p)?;
    }
    for l in x.labels() {
        e.str(l)?;
    }
    for v in x.values() {
        e.f64(v.to_f64_lossy());
    }
    let flags = x.standardization.as_ref().map_or(0, |_| HAS_STATS) | x.shrinkage_mask.as_ref().map_or(0, |_| HAS_MASK);
    e.u8(flags);
    if let Some(s) = &x.standardization {
        for v in s.means.iter().chain(&s.stds) {
            e.f64(v.to_f64_lossy());
        }
    }
    if let Some(m) = &x.shrinkage_mask {
        e.u32(m.len())?;
        for &j in m {
            e.u32(j)?;
        }
    }
    Ok(e.finish())
}

pub fn read_features<T: Scalar>(bytes: &[u8]) -> Result<FeatureMatrix<T>> {
    let mut r = Decoder::open(bytes, FEATURE_MAGIC, FEATURE_VERSION, "feature-matrix")?;
    let n = r.u32()?;
    let d = r.u32()?;
    let paths = (0..d).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    let labels = (0..n).map(|_| r.str()).collect::<Result<Vec<_>>>()?;
    let values = (0..n * d).map(|_| r.f64().map(T::lit)).collect::<Result<Vec<_>>>()?;
    let flags = r.u8()?;
    let mut x = FeatureMatrix::new(values, paths, labels)?;
    if flags & HAS_STATS != 0 {
        let means = (0..d).map(|_| r.f64().map(T::lit)).collect::<Result<Vec<_>>>()?;
        let stds = (0..d).map(|_| r.f64().map(T::lit)).collect::<Result<Vec<_>>>()?;
        x.standardization = Some(Standardization { means, stds });
    }
    if flags & HAS_MASK != 0 {
        let k = r.u32()?;
        x.shrinkage_mask = Some((0..k).map(|_| r.u32()).collect::<Result<Vec<_>>>()?);
    }
    r.done()?;
    Ok(x)
}

pub fn save_features<T: Scalar>(x: &FeatureMatrix<T>, path: &Path) -> Result<()> {
    fs::write(path, write_features(x)?)?;
    Ok(())
}

pub fn load_features<T: Scalar>(path: &Path) -> Result<FeatureMatrix<T>> {
    read_features(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::features::{shrink_select, standardize};

    fn sample() -> FeatureMatrix<f64> {
        let rows = vec![vec![1.0, 0.1 + 0.2, -3.5], vec![2.0, 1e-300, 4.0], vec![0.0, 7.0, f64::MAX]];
        let paths = vec!["j1=0/b1=-1".into(), "j1=0/b1=0".into(), "j1=0/b1=+1".into()];
        FeatureMatrix::from_rows(rows, paths, vec!["haydn".into(), "mozart".into(), "haydn".into()]).unwrap()
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let raw = sample();
        let bytes = write_features(&raw).unwrap();
        assert_eq!(read_features::<f64>(&bytes).unwrap(), raw);

        let mask = shrink_select(&raw.select_rows(&[0, 1]), 0.5).unwrap();
        let x = standardize(&raw.select_columns(&mask).unwrap(), None).unwrap();
        let back: FeatureMatrix<f64> = read_features(&write_features(&x).unwrap()).unwrap();
        assert_eq!(back, x);
        assert!(back.standardization.is_some() && back.shrinkage_mask.is_some());
    }

    #[test]
    fn detects_corruption() {
        let bytes = write_features(&sample()).unwrap();
        assert!(matches!(read_features::<f64>(&bytes[..bytes.len() - 3]), Err(Error::Checksum)));
        let mut flipped = bytes.clone();
        flipped[30] ^= 1;
        assert!(matches!(read_features::<f64>(&flipped), Err(Error::Checksum)));
        let mut old = bytes.clone();
        old[4..8].copy_from_slice(&0u32.to_le_bytes());
        assert!(matches!(read_features::<f64>(&old), Err(Error::Version { found: 0, expected: 1 })));
    }
}
