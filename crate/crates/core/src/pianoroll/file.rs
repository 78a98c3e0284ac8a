//! Binary piano-roll files: magic `EPRL`, version, frames, pitches (u32 LE),
//! then `frames * pitches` f64 LE values, row-major in `t`.

use std::io::{Read, Write};

use super::PianoRoll;
use crate::error::{Error, Result};
use crate::Scalar;

pub const ROLL_MAGIC: &[u8; 4] = b"EPRL";
pub const ROLL_VERSION: u32 = 1;

pub fn write_roll<T: Scalar, W: Write>(roll: &PianoRoll<T>, mut w: W) -> Result<()> {
    let mut buf = Vec::with_capacity(16 + roll.data().len() * 8);
    buf.extend_from_slice(ROLL_MAGIC);
    buf.extend_from_slice(&ROLL_VERSION.to_le_bytes());
    buf.extend_from_slice(&(roll.frames() as u32).to_le_bytes());
    buf.extend_from_slice(&(roll.pitches() as u32).to_le_bytes());
    for v in roll.data() {
        buf.extend_from_slice(&v.to_f64_lossy().to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_roll<T: Scalar, R: Read>(mut r: R) -> Result<PianoRoll<T>> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 16 || &bytes[0..4] != ROLL_MAGIC {
        return Err(Error::Format("not a piano-roll file (bad magic)".into()));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
    let version = word(4);
    if version != ROLL_VERSION {
        return Err(Error::Version {
            found: version,
            expected: ROLL_VERSION,
        });
    }
    let frames = word(8) as usize;
    let pitches = word(12) as usize;
    let body = &bytes[16..];
    if body.len() != frames * pitches * 8 {
        return Err(Error::Format(format!(
            "piano-roll body holds {} bytes, expected {}",
            body.len(),
            frames * pitches * 8
        )));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| T::lit(f64::from_le_bytes(c.try_into().unwrap())))
        .collect();
    PianoRoll::from_vec(frames, pitches, data)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let mut roll = PianoRoll::<f64>::zeros(2, 3);
        roll.set(1, 2, 0.5);
        let mut buf = Vec::new();
        write_roll(&roll, &mut buf).unwrap();
        assert_eq!(&buf[0..4], b"EPRL");
        assert_eq!(buf.len(), 16 + 6 * 8);
        // t = 1, p = 2 is the last value
        assert_eq!(f64::from_le_bytes(buf[56..64].try_into().unwrap()), 0.5);
        let back: PianoRoll<f64> = read_roll(&buf[..]).unwrap();
        assert_eq!(back, roll);
    }

    #[test]
    fn rejects_truncation_and_version() {
        let roll = PianoRoll::<f64>::zeros(2, 2);
        let mut buf = Vec::new();
        write_roll(&roll, &mut buf).unwrap();
        assert!(read_roll::<f64, _>(&buf[..buf.len() - 1]).is_err());
        buf[4] = 9;
        assert!(matches!(read_roll::<f64, _>(&buf[..]), Err(Error::Version { found: 9, .. })));
    }
}
