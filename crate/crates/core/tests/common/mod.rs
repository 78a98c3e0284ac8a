#![allow(dead_code)]

use eigenprog::filterbank::TransformConfig;
use eigenprog::pianoroll::PianoRoll;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Small configuration used across the invariance tests: T = 128, P' = 132.
pub fn test_config(j: usize) -> TransformConfig {
    TransformConfig {
        frames: 128,
        j1_scales: j,
        j2_scales: j,
        ..Default::default()
    }
}

/// Random sparse roll of held notes with velocities in (0, 1].
pub fn random_roll(seed: u64, frames: usize, pitches: usize, notes: usize) -> PianoRoll<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = PianoRoll::zeros(frames, pitches);
    for _ in 0..notes {
        let p = rng.gen_range(21..109.min(pitches));
        let t0 = rng.gen_range(0..frames);
        let len = rng.gen_range(1..frames / 4);
        let v = rng.gen_range(0.05..1.0);
        for t in t0..(t0 + len).min(frames) {
            x.set(t, p, v);
        }
    }
    x
}

pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    let den: f64 = a.iter().map(|x| x * x).sum();
    (num / den.max(f64::MIN_POSITIVE)).sqrt()
}

pub fn max_rel_entry(a: &[f64], b: &[f64]) -> f64 {
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale.max(f64::MIN_POSITIVE)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}
