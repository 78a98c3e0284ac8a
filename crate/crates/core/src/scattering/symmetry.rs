use crate::pianoroll::PianoRoll;
use crate::Scalar;

/// Circular symmetry operators on a piano roll.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    /// `y[t, p] = x[t - dt, p]`
    Shift(i64),
    /// `y[t, p] = x[t, p - dp]`
    Transpose(i64),
    /// `y[t, p] = x[-t, p]`
    Retrograde,
    /// `y[t, p] = x[t, -p]`
    Invert,
}

fn wrap(i: i64, n: usize) -> usize {
    i.rem_euclid(n as i64) as usize
}

/// Applies `op` cyclically in both axes (indices taken mod `T` and mod `P`).
pub fn symmetry<T: Scalar>(x: &PianoRoll<T>, op: Symmetry) -> PianoRoll<T> {
    let (frames, pitches) = (x.frames(), x.pitches());
    let mut out = PianoRoll::zeros(frames, pitches);
    for t in 0..frames {
        for p in 0..pitches {
            let (ti, pi) = (t as i64, p as i64);
            let (st, sp) = match op {
                Symmetry::Shift(dt) => (wrap(ti - dt, frames), p),
                Symmetry::Transpose(dp) => (t, wrap(pi - dp, pitches)),
                Symmetry::Retrograde => (wrap(-ti, frames), p),
                Symmetry::Invert => (t, wrap(-pi, pitches)),
            };
            out.set(t, p, x.get(st, sp));
        }
    }
    out
}
