//! Thin layer over `rustfft`: planned 1-D transforms and in-place transforms
//! along one axis of a dense array whose first axis varies fastest.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::Scalar;

/// Forward DFT (`exp(-2 pi i k n / N)`, unnormalized) or inverse DFT scaled by `1/N`.
pub fn fft<T: Scalar>(v: &[Complex<T>], inverse: bool) -> Result<Vec<Complex<T>>> {
    if v.is_empty() {
        return Err(Error::FftLength(0));
    }
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(v.len())
    } else {
        planner.plan_fft_forward(v.len())
    };
    let mut out = v.to_vec();
    plan.process(&mut out);
    if inverse {
        let scale = T::one() / T::from_usize_lossy(v.len());
        out.iter_mut().for_each(|x| *x = *x * scale);
    }
    Ok(out)
}

/// Forward and inverse plans for one length.
#[derive(Clone)]
pub struct AxisPlan<T: Scalar> {
    pub len: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> std::fmt::Debug for AxisPlan<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AxisPlan").field("len", &self.len).finish()
    }
}

impl<T: Scalar> AxisPlan<T> {
    pub fn new(planner: &mut FftPlanner<T>, len: usize) -> Result<Self> {
        if len == 0 {
            return Err(Error::FftLength(0));
        }
        Ok(AxisPlan {
            len,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        })
    }

    fn plan(&self, inverse: bool) -> &Arc<dyn Fft<T>> {
        if inverse {
            &self.inverse
        } else {
            &self.forward
        }
    }

    /// Unnormalized transform along `axis` of `data` with the given `shape`
    /// (first axis fastest). `scratch` is reused between calls.
    pub fn apply(&self, data: &mut [Complex<T>], shape: &[usize], axis: usize, inverse: bool, scratch: &mut Vec<Complex<T>>) {
        let n = shape[axis];
        debug_assert_eq!(n, self.len);
        debug_assert_eq!(data.len(), shape.iter().product::<usize>());
        let stride: usize = shape[..axis].iter().product();
        let block = stride * n;

        if n == 1 {
            return;
        }
        if n == 2 {
            // size-2 DFT is its own inverse up to scaling
            for chunk in data.chunks_exact_mut(block) {
                let (a, b) = chunk.split_at_mut(stride);
                for (x, y) in a.iter_mut().zip(b.iter_mut()) {
                    let (s, d) = (*x + *y, *x - *y);
                    *x = s;
                    *y = d;
                }
            }
            return;
        }
        let plan = self.plan(inverse);
        let need = plan.get_inplace_scratch_len();
        if stride == 1 {
            scratch.resize(need, Complex::default());
            plan.process_with_scratch(data, scratch);
            return;
        }
        // transpose each [stride x n] block so the axis is contiguous
        scratch.resize(block + need, Complex::default());
        let (lines, fft_scratch) = scratch.split_at_mut(block);
        for chunk in data.chunks_exact_mut(block) {
            for m in 0..n {
                let src = &chunk[m * stride..(m + 1) * stride];
                for (i, v) in src.iter().enumerate() {
                    lines[i * n + m] = *v;
                }
            }
            plan.process_with_scratch(lines, fft_scratch);
            for m in 0..n {
                let dst = &mut chunk[m * stride..(m + 1) * stride];
                for (i, v) in dst.iter_mut().enumerate() {
                    *v = lines[i * n + m];
                }
            }
        }
    }
}

/// Plans for every axis of a fixed shape.
#[derive(Debug, Clone)]
pub struct NdPlan<T: Scalar> {
    pub shape: Vec<usize>,
    axes: Vec<AxisPlan<T>>,
}

impl<T: Scalar> NdPlan<T> {
    pub fn new(shape: &[usize]) -> Result<Self> {
        let mut planner = FftPlanner::new();
        let axes = shape
            .iter()
            .map(|&n| AxisPlan::new(&mut planner, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(NdPlan {
            shape: shape.to_vec(),
            axes,
        })
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn axis(&self, axis: usize) -> &AxisPlan<T> {
        &self.axes[axis]
    }

    pub fn apply_axis(&self, data: &mut [Complex<T>], axis: usize, inverse: bool, scratch: &mut Vec<Complex<T>>) {
        self.axes[axis].apply(data, &self.shape, axis, inverse, scratch);
    }

    /// Unnormalized transform over every axis.
    pub fn apply_all(&self, data: &mut [Complex<T>], inverse: bool, scratch: &mut Vec<Complex<T>>) {
        for axis in 0..self.shape.len() {
            self.apply_axis(data, axis, inverse, scratch);
        }
    }
}
