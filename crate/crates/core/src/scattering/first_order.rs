use num_complex::Complex;

use super::fft::NdPlan;
use super::paths::S1Path;
use crate::error::{Error, Result};
use crate::filterbank::TriadFilterbank;
use crate::pianoroll::PianoRoll;
use crate::spectral::{Quality, BETA1_VALUES};
use crate::Scalar;

/// `U1[t, p, q, j1, beta1]`, stored with `t` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterTensor1<T> {
    pub frames: usize,
    pub pitches: usize,
    pub j1_scales: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> ScatterTensor1<T> {
    pub fn zeros(frames: usize, pitches: usize, j1_scales: usize) -> Self {
        ScatterTensor1 {
            frames,
            pitches,
            j1_scales,
            data: vec![T::zero(); frames * pitches * 2 * j1_scales * 3],
        }
    }

    /// Length of one `(j1, beta1)` slice over `(t, p, q)`.
    pub fn slice_len(&self) -> usize {
        self.frames * self.pitches * 2
    }

    fn slice_offset(&self, j1: usize, beta1_idx: usize) -> usize {
        (j1 + self.j1_scales * beta1_idx) * self.slice_len()
    }

    /// The `(t, p, q)` block for `(j1, beta1)`.
    pub fn slice(&self, j1: usize, beta1: i8) -> &[T] {
        let off = self.slice_offset(j1, (beta1 + 1) as usize);
        &self.data[off..off + self.slice_len()]
    }

    pub fn slice_mut(&mut self, j1: usize, beta1: i8) -> &mut [T] {
        let off = self.slice_offset(j1, (beta1 + 1) as usize);
        let len = self.slice_len();
        &mut self.data[off..off + len]
    }

    pub fn get(&self, t: usize, p: usize, q: usize, j1: usize, beta1: i8) -> T {
        self.slice(j1, beta1)[t + self.frames * (p + self.pitches * q)]
    }
}

/// `S1[j1, beta1]`, row-major over `(j1, beta1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct S1Matrix<T> {
    pub j1_scales: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> S1Matrix<T> {
    pub fn get(&self, j1: usize, beta1: i8) -> T {
        self.data[j1 * 3 + (beta1 + 1) as usize]
    }

    pub fn paths(&self) -> Vec<S1Path> {
        (0..self.j1_scales)
            .flat_map(|j1| BETA1_VALUES.iter().map(move |&beta1| S1Path { j1, beta1 }))
            .collect()
    }
}

/// Precomputed spectra for the first-order transform.
#[derive(Debug, Clone)]
pub struct FirstOrderPlan<T: Scalar> {
    frames: usize,
    pitches: usize,
    plan: NdPlan<T>,
    temporal_hat: Vec<Vec<Complex<T>>>,
    /// `[beta1 index][q]`
    atom_hat: Vec<[Vec<Complex<T>>; 2]>,
}

impl<T: Scalar> FirstOrderPlan<T> {
    pub fn new(fb: &TriadFilterbank<T>) -> Result<Self> {
        let frames = fb.frames();
        let pitches = fb.pitches();
        let plan = NdPlan::new(&[frames, pitches])?;
        let mut scratch = Vec::new();
        let temporal_hat = fb
            .temporal
            .iter()
            .map(|g| {
                let mut v = g.values.clone();
                plan.axis(0).apply(&mut v, &[frames], 0, false, &mut scratch);
                v
            })
            .collect();
        let atom_hat = BETA1_VALUES
            .iter()
            .map(|&b| {
                Quality::ALL.map(|q| {
                    let mut v = fb.atom(b, q).values.clone();
                    plan.axis(1).apply(&mut v, &[pitches], 0, false, &mut scratch);
                    v
                })
            })
            .collect();
        Ok(FirstOrderPlan {
            frames,
            pitches,
            plan,
            temporal_hat,
            atom_hat,
        })
    }

    pub fn j1_scales(&self) -> usize {
        self.temporal_hat.len()
    }

    pub fn u1(&self, x: &PianoRoll<T>) -> Result<ScatterTensor1<T>> {
        let (frames, pitches) = (self.frames, self.pitches);
        if x.frames() != frames || x.pitches() != pitches {
            return Err(Error::Shape(format!(
                "piano roll is {}x{}, filterbank expects {frames}x{pitches} (pad the pitch axis first)",
                x.frames(),
                x.pitches()
            )));
        }
        let n = frames * pitches;
        let mut out = ScatterTensor1::zeros(frames, pitches, self.j1_scales());
        if x.is_silent() {
            return Ok(out);
        }
        let mut scratch = Vec::new();
        // roll is row-major in t; transpose to t-fastest
        let mut xhat = vec![Complex::new(T::zero(), T::zero()); n];
        for t in 0..frames {
            for p in 0..pitches {
                xhat[t + frames * p] = Complex::new(x.get(t, p), T::zero());
            }
        }
        self.plan.apply_all(&mut xhat, false, &mut scratch);

        let scale = T::one() / T::from_usize_lossy(n);
        let mut pitch_done = vec![Complex::new(T::zero(), T::zero()); n];
        let mut work = vec![Complex::new(T::zero(), T::zero()); n];
        for (bi, &beta1) in BETA1_VALUES.iter().enumerate() {
            for q in 0..2 {
                let atom = &self.atom_hat[bi][q];
                for (wp, a) in atom.iter().enumerate() {
                    let row = wp * frames..(wp + 1) * frames;
                    for (dst, src) in pitch_done[row.clone()].iter_mut().zip(&xhat[row]) {
                        *dst = *src * *a;
                    }
                }
                self.plan.apply_axis(&mut pitch_done, 1, true, &mut scratch);
                for (j1, ghat) in self.temporal_hat.iter().enumerate() {
                    for (line_out, line_in) in work.chunks_exact_mut(frames).zip(pitch_done.chunks_exact(frames)) {
                        for ((o, i), g) in line_out.iter_mut().zip(line_in).zip(ghat) {
                            *o = *i * *g;
                        }
                    }
                    self.plan.apply_axis(&mut work, 0, true, &mut scratch);
                    let slice = out.slice_mut(j1, beta1);
                    let dst = &mut slice[q * n..(q + 1) * n];
                    for (d, w) in dst.iter_mut().zip(&work) {
                        *d = w.norm() * scale;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `U1 = |x * Psi_(j1, beta1, q)|` for every first-order filter.
pub fn u1<T: Scalar>(x: &PianoRoll<T>, fb: &TriadFilterbank<T>) -> Result<ScatterTensor1<T>> {
    FirstOrderPlan::new(fb)?.u1(x)
}

/// `S1[j1, beta1] = sum over t, p, q of U1`, summed in storage order.
pub fn s1<T: Scalar>(u: &ScatterTensor1<T>) -> S1Matrix<T> {
    let mut data = Vec::with_capacity(u.j1_scales * 3);
    for j1 in 0..u.j1_scales {
        for beta1 in BETA1_VALUES {
            data.push(u.slice(j1, beta1).iter().fold(T::zero(), |acc, &v| acc + v));
        }
    }
    S1Matrix {
        j1_scales: u.j1_scales,
        data,
    }
}
