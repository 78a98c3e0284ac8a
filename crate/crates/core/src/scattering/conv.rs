use num_complex::Complex;

use super::fft::NdPlan;
use crate::error::{Error, Result};
use crate::Scalar;

/// Dense complex array on a product of cyclic groups, first axis fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicArray<T> {
    pub shape: Vec<usize>,
    pub data: Vec<Complex<T>>,
}

impl<T: Scalar> CyclicArray<T> {
    pub fn zeros(shape: &[usize]) -> Self {
        CyclicArray {
            shape: shape.to_vec(),
            data: vec![Complex::new(T::zero(), T::zero()); shape.iter().product()],
        }
    }

    pub fn from_vec(shape: &[usize], data: Vec<Complex<T>>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if data.len() != n {
            return Err(Error::Shape(format!("shape {shape:?} needs {n} values, got {}", data.len())));
        }
        Ok(CyclicArray {
            shape: shape.to_vec(),
            data,
        })
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Flat offset of a multi-index (first axis fastest).
    pub fn offset(&self, index: &[usize]) -> usize {
        let mut off = 0;
        let mut stride = 1;
        for (&i, &n) in index.iter().zip(&self.shape) {
            off += (i % n) * stride;
            stride *= n;
        }
        off
    }
}

/// Multidimensional circular convolution through the FFT.
pub fn cyclic_convolve<T: Scalar>(x: &CyclicArray<T>, h: &CyclicArray<T>) -> Result<CyclicArray<T>> {
    if x.shape != h.shape {
        return Err(Error::Shape(format!("{:?} vs {:?}", x.shape, h.shape)));
    }
    if x.is_empty() {
        return Ok(x.clone());
    }
    let plan = NdPlan::new(&x.shape)?;
    let mut scratch = Vec::new();
    let mut xs = x.data.clone();
    let mut hs = h.data.clone();
    plan.apply_all(&mut xs, false, &mut scratch);
    plan.apply_all(&mut hs, false, &mut scratch);
    xs.iter_mut().zip(&hs).for_each(|(a, b)| *a = *a * *b);
    plan.apply_all(&mut xs, true, &mut scratch);
    let scale = T::one() / T::from_usize_lossy(xs.len());
    xs.iter_mut().for_each(|v| *v = *v * scale);
    Ok(CyclicArray {
        shape: x.shape.clone(),
        data: xs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(shape: &[usize], v: &[f64]) -> CyclicArray<f64> {
        CyclicArray::from_vec(shape, v.iter().map(|&x| Complex::new(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn two_point_example() {
        let y = cyclic_convolve(&real(&[2], &[1.0, 2.0]), &real(&[2], &[3.0, 4.0])).unwrap();
        assert!((y.data[0] - Complex::new(11.0, 0.0)).norm() < 1e-12);
        assert!((y.data[1] - Complex::new(10.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn delta_is_identity() {
        let shape = [8, 6];
        let mut delta = CyclicArray::<f64>::zeros(&shape);
        delta.data[0] = Complex::new(1.0, 0.0);
        let h = CyclicArray::from_vec(
            &shape,
            (0..48).map(|i| Complex::new((i as f64).sin(), (i as f64).cos())).collect(),
        )
        .unwrap();
        let y = cyclic_convolve(&delta, &h).unwrap();
        for (a, b) in y.data.iter().zip(&h.data) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(cyclic_convolve(&CyclicArray::<f64>::zeros(&[2, 2]), &CyclicArray::zeros(&[4])).is_err());
    }
}
