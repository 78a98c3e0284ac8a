//! Deterministic two-class synthetic corpus: triadic pieces (block chords and
//! arpeggiated major/minor triads) against chromatic pieces (semitone runs and
//! clusters).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pianoroll::{sort_notes, NoteEvent};
use crate::spectral::Quality;

pub const SYNTH_TICKS_PER_QUARTER: u16 = 96;
pub const TRIADIC: &str = "triadic";
pub const CHROMATIC: &str = "chromatic";
pub const DEFAULT_SEED: u64 = 2016;

const BEAT: u64 = SYNTH_TICKS_PER_QUARTER as u64;
const SEGMENTS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthPiece {
    pub name: String,
    pub label: String,
    pub notes: Vec<NoteEvent>,
}

fn note(rng: &mut ChaCha8Rng, pitch: i64, onset: u64, duration: u64) -> NoteEvent {
    let pitch = pitch.clamp(0, 127) as u8;
    NoteEvent {
        pitch,
        onset,
        duration,
        velocity: rng.gen_range(60..=100),
    }
}

fn triadic(rng: &mut ChaCha8Rng) -> Vec<NoteEvent> {
    let mut notes = Vec::new();
    for s in 0..SEGMENTS as u64 {
        let start = s * 4 * BEAT;
        let root = rng.gen_range(48..72i64);
        let quality = if rng.gen_bool(0.5) { Quality::Major } else { Quality::Minor };
        let chord: Vec<i64> = quality.intervals().iter().map(|&i| root + i as i64).collect();
        match rng.gen_range(0..3) {
            0 => {
                for &p in &chord {
                    notes.push(note(rng, p, start, 4 * BEAT));
                }
            }
            style => {
                // arpeggio over four beats, ascending or descending
                let mut order = chord.clone();
                if style == 2 {
                    order.reverse();
                }
                for k in 0..8u64 {
                    let p = order[(k % 3) as usize];
                    notes.push(note(rng, p, start + k * BEAT / 2, BEAT / 2));
                }
            }
        }
    }
    notes
}

fn chromatic(rng: &mut ChaCha8Rng) -> Vec<NoteEvent> {
    let mut notes = Vec::new();
    for s in 0..SEGMENTS as u64 {
        let start = s * 4 * BEAT;
        let base = rng.gen_range(48..72i64);
        match rng.gen_range(0..3) {
            0 => {
                for k in 0..3 {
                    notes.push(note(rng, base + k, start, 4 * BEAT));
                }
            }
            style => {
                let step = if style == 1 { 1 } else { -1 };
                for k in 0..8i64 {
                    notes.push(note(rng, base + step * k, start + k as u64 * BEAT / 2, BEAT / 2));
                }
            }
        }
    }
    notes
}

/// `per_class` pieces of each class, interleaved, named `<label>_<nn>`.
pub fn synthetic_corpus(per_class: usize, seed: u64) -> Vec<SynthPiece> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(2 * per_class);
    for k in 0..per_class {
        for label in [TRIADIC, CHROMATIC] {
            let mut notes = if label == TRIADIC { triadic(&mut rng) } else { chromatic(&mut rng) };
            sort_notes(&mut notes);
            out.push(SynthPiece {
                name: format!("{label}_{k:02}"),
                label: label.to_string(),
                notes,
            });
        }
    }
    out
}
