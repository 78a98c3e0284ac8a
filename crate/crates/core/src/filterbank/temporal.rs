use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Scalar;

/// Gabor wavelet on the cyclic time axis at scale `alpha = 2^-j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGabor<T> {
    pub j: usize,
    pub alpha: T,
    pub sigma: T,
    pub xi: T,
    pub values: Vec<Complex<T>>,
}

impl<T: Scalar> TemporalGabor<T> {
    /// Center frequency `alpha * xi` in radians per sample.
    pub fn center_frequency(&self) -> T {
        self.alpha * self.xi
    }

    /// Envelope standard deviation in samples, `sigma / alpha`.
    pub fn envelope_width(&self) -> T {
        self.sigma / self.alpha
    }
}

/// Signed circular coordinate of `i` on `Z_n`: `i` or `i - n`, whichever is
/// smaller in magnitude (`n / 2` maps to `+n / 2`).
pub(crate) fn circular(i: usize, n: usize) -> i64 {
    if 2 * i <= n {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// `alpha exp(-alpha^2 t^2 / (2 sigma^2)) exp(i alpha xi t)` over the signed
/// circular time coordinate `t`.
pub fn temporal_gabor<T: Scalar>(j: usize, frames: usize, sigma: T, xi: T) -> Result<TemporalGabor<T>> {
    if frames == 0 || !frames.is_power_of_two() {
        return Err(Error::Config(format!("frames must be a power of two (got {frames})")));
    }
    let alpha = T::lit(2f64.powi(-(j as i32)));
    let center = alpha * xi.abs();
    if center > T::PI() {
        return Err(Error::Inadmissible {
            frequency: center.to_f64_lossy(),
        });
    }
    let two = T::lit(2.0);
    let values = (0..frames)
        .map(|t| {
            let tc = T::lit(circular(t, frames) as f64);
            let env = (-(alpha * alpha * tc * tc) / (two * sigma * sigma)).exp();
            Complex::from_polar(alpha * env, alpha * xi * tc)
        })
        .collect();
    Ok(TemporalGabor {
        j,
        alpha,
        sigma,
        xi,
        values,
    })
}
