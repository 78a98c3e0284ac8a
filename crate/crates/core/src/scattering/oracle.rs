//! Reference O(N^2) circular convolution by direct summation.
//!
//! Independent of the FFT path; used by the self-test and the test suites.

use num_complex::Complex;

use super::CyclicArray;
use crate::error::{Error, Result};
use crate::Scalar;

pub fn direct_cyclic_convolve<T: Scalar>(x: &CyclicArray<T>, h: &CyclicArray<T>) -> Result<CyclicArray<T>> {
    if x.shape != h.shape {
        return Err(Error::Shape(format!("{:?} vs {:?}", x.shape, h.shape)));
    }
    let shape = &x.shape;
    let dims = shape.len();
    let n = x.len();
    let unravel = |mut off: usize| {
        let mut idx = vec![0usize; dims];
        for (d, &len) in shape.iter().enumerate() {
            idx[d] = off % len;
            off /= len;
        }
        idx
    };
    let indices: Vec<Vec<usize>> = (0..n).map(unravel).collect();
    // wrap[d][a * len + b] = offset contribution of (a - b) mod len along axis d
    let mut stride = 1;
    let wrap: Vec<Vec<usize>> = shape
        .iter()
        .map(|&len| {
            let table = (0..len * len).map(|k| (k / len + len - k % len) % len * stride).collect();
            stride *= len;
            table
        })
        .collect();
    let mut out = CyclicArray::zeros(shape);
    for (o, oi) in indices.iter().enumerate() {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (i, ii) in indices.iter().enumerate() {
            let k: usize = (0..dims).map(|d| wrap[d][oi[d] * shape[d] + ii[d]]).sum();
            acc = acc + x.data[i] * h.data[k];
        }
        out.data[o] = acc;
    }
    Ok(out)
}
