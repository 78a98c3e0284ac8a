//! Symbolic input: note events, piano-roll matrices and dataset manifests.

mod file;
mod manifest;
mod midi;
mod notes_csv;

pub use file::{read_roll, write_roll, ROLL_MAGIC, ROLL_VERSION};
pub use manifest::{parse_manifest, DatasetManifest, ManifestEntry};
pub use midi::{parse_midi, serialize_midi};
pub use notes_csv::parse_note_csv;

use crate::error::{Error, Result};
use crate::Scalar;

pub const DEFAULT_FRAMES: usize = 1 << 10;
pub const DEFAULT_PITCHES: usize = 1 << 7;
pub const DEFAULT_VELOCITY: u8 = 64;

/// A single note in score (tick) time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoteEvent {
    pub pitch: u8,
    pub onset: u64,
    pub duration: u64,
    pub velocity: u8,
}

impl NoteEvent {
    pub fn new(pitch: u8, onset: u64, duration: u64, velocity: u8) -> Result<Self> {
        if pitch > 127 || velocity > 127 {
            return Err(Error::Format(format!(
                "note out of range: pitch {pitch}, velocity {velocity}"
            )));
        }
        Ok(NoteEvent {
            pitch,
            onset,
            duration,
            velocity,
        })
    }

    pub fn end(&self) -> u64 {
        self.onset + self.duration
    }
}

/// Canonical note order used by the parsers: onset, then pitch, duration, velocity.
pub fn sort_notes(notes: &mut [NoteEvent]) {
    notes.sort_by_key(|n| (n.onset, n.pitch, n.duration, n.velocity));
}

/// Non-negative `frames x pitches` activation matrix, stored row-major in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PianoRoll<T> {
    frames: usize,
    pitches: usize,
    data: Vec<T>,
}

impl<T: Scalar> PianoRoll<T> {
    pub fn zeros(frames: usize, pitches: usize) -> Self {
        PianoRoll {
            frames,
            pitches,
            data: vec![T::zero(); frames * pitches],
        }
    }

    /// Wraps row-major data. Fails on a size mismatch or a negative/non-finite entry.
    pub fn from_vec(frames: usize, pitches: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != frames * pitches {
            return Err(Error::Shape(format!(
                "piano roll of {frames}x{pitches} needs {} values, got {}",
                frames * pitches,
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::Format(format!(
                "piano roll entry ({}, {}) is negative or not finite",
                i / pitches,
                i % pitches
            )));
        }
        Ok(PianoRoll {
            frames,
            pitches,
            data,
        })
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn pitches(&self) -> usize {
        self.pitches
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, t: usize, p: usize) -> T {
        self.data[t * self.pitches + p]
    }

    /// Sets a cell; negative values are clamped to zero.
    pub fn set(&mut self, t: usize, p: usize, value: T) {
        self.data[t * self.pitches + p] = value.max(T::zero());
    }

    pub fn is_silent(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Zero-fills the pitch axis up to `pitches`.
    pub fn pad_pitches(&self, pitches: usize) -> Result<Self> {
        if pitches < self.pitches {
            return Err(Error::Shape(format!(
                "cannot pad {} pitches down to {pitches}",
                self.pitches
            )));
        }
        let mut out = Self::zeros(self.frames, pitches);
        for t in 0..self.frames {
            let src = &self.data[t * self.pitches..(t + 1) * self.pitches];
            out.data[t * pitches..t * pitches + self.pitches].copy_from_slice(src);
        }
        Ok(out)
    }

    /// Elementwise scaling by a non-negative factor.
    pub fn scaled(&self, c: T) -> Self {
        PianoRoll {
            frames: self.frames,
            pitches: self.pitches,
            data: self.data.iter().map(|&v| (v * c).max(T::zero())).collect(),
        }
    }
}

/// Maps a tick to a (fractional) frame position given the piece span.
fn tick_to_frame(tick: u64, span: u64, frames: usize) -> usize {
    // round(tick * frames / span) in integer arithmetic
    let num = tick as u128 * frames as u128;
    let span = span as u128;
    ((2 * num + span) / (2 * span)) as usize
}

/// Rasterizes notes onto a `frames x pitches` roll.
///
/// The tick span `[0, max(onset + duration)]` is mapped linearly onto `[0, frames)`.
/// Each note covers frames `[round(onset), round(end))`; an empty rounded extent
/// covers exactly one frame. Binary mode writes 1, otherwise `velocity / 127`.
/// Overlaps saturate (max).
pub fn rasterize<T: Scalar>(
    notes: &[NoteEvent],
    frames: usize,
    pitches: usize,
    binary: bool,
) -> PianoRoll<T> {
    let mut roll = PianoRoll::zeros(frames, pitches);
    if frames == 0 || pitches == 0 {
        return roll;
    }
    let span = notes.iter().map(NoteEvent::end).max().unwrap_or(0).max(1);
    let vel_scale = T::lit(127.0);
    for note in notes {
        let p = note.pitch as usize;
        if p >= pitches {
            continue;
        }
        let start = tick_to_frame(note.onset, span, frames).min(frames - 1);
        let end = tick_to_frame(note.end(), span, frames).min(frames);
        let end = if end <= start { start + 1 } else { end };
        let value = if binary {
            T::one()
        } else {
            T::from_u8(note.velocity).unwrap_or_else(T::zero) / vel_scale
        };
        for t in start..end {
            let cell = &mut roll.data[t * pitches + p];
            *cell = cell.max(value);
        }
    }
    roll
}
