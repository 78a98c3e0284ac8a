use num_complex::Complex;

use rustfft::FftPlanner;

use super::fft::{AxisPlan, NdPlan};
use super::first_order::ScatterTensor1;
use super::paths::FeaturePath;
use crate::error::{Error, Result};
use crate::filterbank::{Coupling, ProgFilterbank};
use crate::spectral::BETA1_VALUES;
use crate::Scalar;

/// Second-order coefficient vector in canonical path order.
#[derive(Debug, Clone, PartialEq)]
pub struct S2Vector<T> {
    pub paths: Vec<FeaturePath>,
    pub values: Vec<T>,
}

/// Shape of the second-order output for one first-order scale count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondOrderLayout {
    pub j1_scales: usize,
    pub j2_scales: usize,
    pub beta2_count: usize,
    pub gamma2_values: Vec<i8>,
    pub coupling: Coupling,
}

impl SecondOrderLayout {
    pub fn j2_range(&self, j1: usize) -> std::ops::Range<usize> {
        self.coupling.j2_range(j1, self.j2_scales)
    }

    /// Paths ordered by `j1`, `beta1`, `j2`, `beta2`, `gamma2`.
    pub fn paths(&self) -> Vec<FeaturePath> {
        let mut out = Vec::new();
        for j1 in 0..self.j1_scales {
            for beta1 in BETA1_VALUES {
                for j2 in self.j2_range(j1) {
                    for beta2 in 0..self.beta2_count {
                        for &gamma2 in &self.gamma2_values {
                            out.push(FeaturePath { j1, beta1, j2, beta2, gamma2 });
                        }
                    }
                }
            }
        }
        out
    }

    /// `(j1, beta1)` slices left without any second-order scale by the coupling rule.
    pub fn omitted_slices(&self) -> Vec<(usize, i8)> {
        (0..self.j1_scales)
            .filter(|&j1| self.j2_range(j1).is_empty())
            .flat_map(|j1| BETA1_VALUES.iter().map(move |&b| (j1, b)))
            .collect()
    }

    pub fn dimension(&self) -> usize {
        let per_j2 = self.beta2_count * self.gamma2_values.len();
        (0..self.j1_scales).map(|j1| self.j2_range(j1).len() * 3 * per_j2).sum()
    }
}

/// Dense `U2[t, p, q, j1, beta1, j2, beta2, gamma2]`, `t` fastest.
///
/// Blocks whose `(j1, j2)` pair is excluded by the coupling rule stay zero and
/// are not part of [`SecondOrderLayout::paths`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterTensor2<T> {
    pub frames: usize,
    pub pitches: usize,
    pub layout: SecondOrderLayout,
    pub data: Vec<T>,
}

impl<T: Scalar> ScatterTensor2<T> {
    pub fn block_len(&self) -> usize {
        self.frames * self.pitches * 2
    }

    fn block_offset(&self, j1: usize, beta1: i8, j2: usize, beta2: usize, gamma2: i8) -> usize {
        let l = &self.layout;
        let g = l.gamma2_values.iter().position(|&v| v == gamma2).expect("gamma2 in layout");
        let b1 = (beta1 + 1) as usize;
        let idx = j1 + l.j1_scales * (b1 + 3 * (j2 + l.j2_scales * (beta2 + l.beta2_count * g)));
        idx * self.block_len()
    }

    pub fn block(&self, path: &FeaturePath) -> &[T] {
        let off = self.block_offset(path.j1, path.beta1, path.j2, path.beta2, path.gamma2);
        &self.data[off..off + self.block_len()]
    }

    pub fn get(&self, t: usize, p: usize, q: usize, path: &FeaturePath) -> T {
        self.block(path)[t + self.frames * (p + self.pitches * q)]
    }
}

/// Lines moved together when transposing to time-major rows.
const TILE: usize = 16;
/// Time frames filtered per batch in the `(p, q)` stage.
const CHUNK: usize = 16;

/// Precomputed spectra for the second-order transform.
#[derive(Debug, Clone)]
pub struct SecondOrderPlan<T: Scalar> {
    frames: usize,
    pitches: usize,
    t_plan: AxisPlan<T>,
    p_plan: AxisPlan<T>,
    /// Temporal spectra, pre-scaled by `1 / (T * P' * 2)`.
    temporal_hat: Vec<Vec<Complex<T>>>,
    /// `[beta2 * n_gamma + g]`, over `(p, q)` with `p` fastest.
    pitch_hat: Vec<Vec<Complex<T>>>,
    layout_base: SecondOrderLayout,
}

fn butterfly<T: Scalar>(row: &mut [Complex<T>], pitches: usize) {
    let (a, b) = row.split_at_mut(pitches);
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (s, d) = (*x + *y, *x - *y);
        *x = s;
        *y = d;
    }
}

impl<T: Scalar> SecondOrderPlan<T> {
    pub fn new(fb: &ProgFilterbank<T>) -> Result<Self> {
        let frames = fb.temporal.first().map_or(0, |g| g.values.len());
        let pitches = fb.pitches;
        let mut planner = FftPlanner::new();
        let t_plan = AxisPlan::new(&mut planner, frames)?;
        let p_plan = AxisPlan::new(&mut planner, pitches)?;
        let pq_plan = NdPlan::new(&[pitches, 2])?;
        let scale = T::one() / T::from_usize_lossy(frames * pitches * 2);
        let mut scratch = Vec::new();
        let temporal_hat = fb
            .temporal
            .iter()
            .map(|g| {
                let mut v = g.values.clone();
                t_plan.apply(&mut v, &[frames], 0, false, &mut scratch);
                v.iter_mut().for_each(|z| *z = *z * scale);
                v
            })
            .collect();
        let pitch_hat = fb
            .pitch_filters
            .iter()
            .map(|h| {
                let mut v = h.values.clone();
                pq_plan.apply_all(&mut v, false, &mut scratch);
                v
            })
            .collect();
        Ok(SecondOrderPlan {
            frames,
            pitches,
            t_plan,
            p_plan,
            temporal_hat,
            pitch_hat,
            layout_base: SecondOrderLayout {
                j1_scales: 0,
                j2_scales: fb.j2_scales(),
                beta2_count: fb.beta2_count(),
                gamma2_values: fb.gamma2_values(),
                coupling: fb.coupling,
            },
        })
    }

    pub fn layout(&self, j1_scales: usize) -> SecondOrderLayout {
        SecondOrderLayout {
            j1_scales,
            ..self.layout_base.clone()
        }
    }

    fn check(&self, u: &ScatterTensor1<T>) -> Result<()> {
        if u.frames != self.frames || u.pitches != self.pitches {
            return Err(Error::Shape(format!(
                "U1 is {}x{}, second-order filterbank expects {}x{}",
                u.frames, u.pitches, self.frames, self.pitches
            )));
        }
        Ok(())
    }

    /// Runs the second-order filters on one `(t, p, q)` slice of U1, reporting
    /// `|U1 * Psi|` for every `j2` in `j2s` and every `(beta2, gamma2)` to `sink`
    /// one time frame at a time.
    pub fn slice<S: PathSink<T>>(&self, slice: &[T], j2s: std::ops::Range<usize>, sink: &mut S) {
        let (frames, pitches) = (self.frames, self.pitches);
        let width = 2 * pitches;
        debug_assert_eq!(slice.len(), frames * width);
        if j2s.is_empty() {
            return;
        }
        let n_gamma = self.layout_base.gamma2_values.len();
        let zero = Complex::new(T::zero(), T::zero());
        let mut scratch = Vec::new();
        // temporal spectrum of every (p, q) line
        let mut xhat: Vec<Complex<T>> = slice.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.t_plan.apply(&mut xhat, &[frames, width], 0, false, &mut scratch);

        let mut lines = vec![zero; frames * width];
        let mut rows = vec![zero; frames * width];
        let mut block = vec![zero; CHUNK * width];
        let mut modulus = vec![T::zero(); CHUNK * width];
        for j2 in j2s {
            let ghat = &self.temporal_hat[j2];
            for (out, line) in lines.chunks_exact_mut(frames).zip(xhat.chunks_exact(frames)) {
                for ((o, x), g) in out.iter_mut().zip(line).zip(ghat) {
                    *o = *x * *g;
                }
            }
            self.t_plan.apply(&mut lines, &[frames, width], 0, true, &mut scratch);
            // to time-major rows, then (p, q) spectrum of each row
            for l0 in (0..width).step_by(TILE) {
                for t in 0..frames {
                    for l in l0..(l0 + TILE).min(width) {
                        rows[t * width + l] = lines[l * frames + t];
                    }
                }
            }
            for r in rows.chunks_exact_mut(width) {
                self.p_plan.apply(r, &[pitches, 2], 0, false, &mut scratch);
                butterfly(r, pitches);
            }
            for (c, chunk) in rows.chunks(CHUNK * width).enumerate() {
                let n = chunk.len();
                for (k, hhat) in self.pitch_hat.iter().enumerate() {
                    let (beta2, g) = (k / n_gamma, k % n_gamma);
                    for (out, r) in block[..n].chunks_exact_mut(width).zip(chunk.chunks_exact(width)) {
                        for ((o, x), h) in out.iter_mut().zip(r).zip(hhat) {
                            *o = *x * *h;
                        }
                        butterfly(out, pitches);
                    }
                    self.p_plan.apply(&mut block[..n], &[pitches, n / pitches], 0, true, &mut scratch);
                    for (m, w) in modulus[..n].iter_mut().zip(&block[..n]) {
                        *m = w.norm_sqr().sqrt();
                    }
                    for (i, m) in modulus[..n].chunks_exact(width).enumerate() {
                        sink.row(j2, beta2, g, c * CHUNK + i, m);
                    }
                }
            }
            sink.scale_done(j2);
        }
    }

    /// Materializes the full rank-eight tensor. Memory grows with every index; meant
    /// for small shapes.
    pub fn u2(&self, u: &ScatterTensor1<T>) -> Result<ScatterTensor2<T>> {
        self.check(u)?;
        let layout = self.layout(u.j1_scales);
        let block = u.slice_len();
        let total = block * u.j1_scales * 3 * layout.j2_scales * layout.beta2_count * layout.gamma2_values.len();
        let mut out = ScatterTensor2 {
            frames: u.frames,
            pitches: u.pitches,
            layout,
            data: vec![T::zero(); total],
        };
        for j1 in 0..u.j1_scales {
            for beta1 in BETA1_VALUES {
                let range = out.layout.j2_range(j1);
                let mut writer = DenseWriter { out: &mut out, j1, beta1 };
                self.slice(u.slice(j1, beta1), range, &mut writer);
            }
        }
        Ok(out)
    }

    /// S2 computed slice by slice without materializing U2.
    pub fn s2(&self, u: &ScatterTensor1<T>) -> Result<S2Vector<T>> {
        self.check(u)?;
        let layout = self.layout(u.j1_scales);
        let paths = layout.paths();
        let mut values = vec![T::zero(); paths.len()];
        let n_gamma = layout.gamma2_values.len();
        let per_j2 = layout.beta2_count * n_gamma;
        let mut start = 0;
        for j1 in 0..u.j1_scales {
            let range = layout.j2_range(j1);
            for beta1 in BETA1_VALUES {
                let len = range.len() * per_j2;
                let mut acc = SumSink {
                    values: &mut values[start..start + len],
                    first_j2: range.start,
                    n_gamma,
                    width: 2 * self.pitches,
                    columns: vec![T::zero(); per_j2 * 2 * self.pitches],
                };
                self.slice(u.slice(j1, beta1), range.clone(), &mut acc);
                start += len;
            }
        }
        Ok(S2Vector { paths, values })
    }
}

/// Receives second-order moduli from [`SecondOrderPlan::slice`].
///
/// For a fixed path, frames arrive in increasing `t`; frames of different
/// `(beta2, gamma2)` paths at the same `j2` are interleaved.
pub trait PathSink<T> {
    /// `|U1 * Psi|` at frame `t`, over `(p, q)` with `p` fastest.
    fn row(&mut self, j2: usize, beta2: usize, gamma2_index: usize, t: usize, values: &[T]);
    /// Every path at `j2` is complete.
    fn scale_done(&mut self, _j2: usize) {}
}

struct DenseWriter<'a, T> {
    out: &'a mut ScatterTensor2<T>,
    j1: usize,
    beta1: i8,
}

impl<T: Scalar> PathSink<T> for DenseWriter<'_, T> {
    fn row(&mut self, j2: usize, beta2: usize, g: usize, t: usize, values: &[T]) {
        let gamma2 = self.out.layout.gamma2_values[g];
        let offset = self.out.block_offset(self.j1, self.beta1, j2, beta2, gamma2);
        let frames = self.out.frames;
        for (l, &v) in values.iter().enumerate() {
            self.out.data[offset + l * frames + t] = v;
        }
    }
}

/// Sums over `t` per `(p, q)` column, then over `p`, then `q`.
struct SumSink<'a, T> {
    values: &'a mut [T],
    first_j2: usize,
    n_gamma: usize,
    width: usize,
    /// `[beta2 * n_gamma + g][(p, q)]`
    columns: Vec<T>,
}

impl<T: Scalar> PathSink<T> for SumSink<'_, T> {
    fn row(&mut self, _j2: usize, beta2: usize, g: usize, _t: usize, values: &[T]) {
        let k = beta2 * self.n_gamma + g;
        let cols = &mut self.columns[k * self.width..(k + 1) * self.width];
        for (c, &v) in cols.iter_mut().zip(values) {
            *c = *c + v;
        }
    }

    fn scale_done(&mut self, j2: usize) {
        let per_j2 = self.columns.len() / self.width;
        let base = (j2 - self.first_j2) * per_j2;
        for (k, cols) in self.columns.chunks_exact_mut(self.width).enumerate() {
            self.values[base + k] = sum_in_order(cols);
            cols.iter_mut().for_each(|c| *c = T::zero());
        }
    }
}

fn sum_in_order<T: Scalar>(block: &[T]) -> T {
    block.iter().fold(T::zero(), |acc, &v| acc + v)
}

/// `U2 = |U1 * Psi_(j2, beta2, gamma2)|` over `(t, p, q)` for every coupled path.
pub fn u2<T: Scalar>(u: &ScatterTensor1<T>, fb: &ProgFilterbank<T>) -> Result<ScatterTensor2<T>> {
    SecondOrderPlan::new(fb)?.u2(u)
}

/// `S2[path] = sum over t, p, q of U2`: sums along `t`, accumulated over `p` then `q`.
pub fn s2<T: Scalar>(u: &ScatterTensor2<T>) -> S2Vector<T> {
    let paths = u.layout.paths();
    let values = paths
        .iter()
        .map(|p| {
            u.block(p)
                .chunks_exact(u.frames)
                .fold(T::zero(), |acc, line| acc + sum_in_order(line))
        })
        .collect();
    S2Vector { paths, values }
}
