//! Winding numbers of sampled closed curves in `ℂ \ {0}`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const RESIDUAL_TOLERANCE: f64 = 1e-6;

/// Closed polygonal loop; the last sample connects back to the first.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledLoop {
    samples: Vec<Complex64>,
}

impl SampledLoop {
    /// Validates that no sample is zero and that every step (closing step
    /// included) turns by less than `π/2`.
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if let Some(i) = samples.iter().position(|z| z.norm_sqr() == 0.0 || !z.is_finite()) {
            return Err(Error::ZeroSample(i));
        }
        let lp = SampledLoop { samples };
        for (i, step) in lp.steps().enumerate() {
            if step.abs() >= FRAC_PI_2 {
                return Err(Error::Density { index: i, angle: step.abs() });
            }
        }
        Ok(lp)
    }

    /// Samples `f(2πk/n)` for `k = 0..n`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        SampledLoop::new((0..n).map(|k| f(TAU * k as f64 / n as f64)).collect())
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Principal arguments of consecutive ratios.
    fn steps(&self) -> impl Iterator<Item = f64> + '_ {
        let n = self.samples.len();
        (0..n).map(move |k| (self.samples[(k + 1) % n] / self.samples[k]).arg())
    }

    pub fn reversed(&self) -> SampledLoop {
        let mut s = self.samples.clone();
        s.reverse();
        SampledLoop { samples: s }
    }

    pub fn rotated(&self, k: usize) -> SampledLoop {
        let mut s = self.samples.clone();
        let n = s.len();
        if n > 0 {
            s.rotate_left(k % n);
        }
        SampledLoop { samples: s }
    }

    /// Pointwise product of two loops with the same sample count.
    pub fn product(&self, o: &SampledLoop) -> Result<SampledLoop> {
        if self.len() != o.len() {
            return Err(Error::Shape(format!("loops have {} and {} samples", self.len(), o.len())));
        }
        SampledLoop::new(self.samples.iter().zip(&o.samples).map(|(a, b)| a * b).collect())
    }
}

/// `(1/2π)·Σ arg(z_{k+1}/z_k)`, rounded; fails if the sum is not within
/// [`RESIDUAL_TOLERANCE`] of an integer.
pub fn winding_number(lp: &SampledLoop) -> Result<i64> {
    if lp.is_empty() {
        return Ok(0);
    }
    let total: f64 = lp.steps().sum::<f64>() / (2.0 * PI);
    let rounded = total.round();
    let residual = (total - rounded).abs();
    if residual >= RESIDUAL_TOLERANCE {
        return Err(Error::Residual(residual));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn power(k: i32, n: usize) -> SampledLoop {
        SampledLoop::from_fn(n, |t| Complex64::from_polar(1.0, k as f64 * t)).unwrap()
    }

    #[test]
    fn unit_circle() {
        assert_eq!(winding_number(&power(1, 64)).unwrap(), 1);
        assert_eq!(winding_number(&power(3, 64)).unwrap(), 3);
        assert_eq!(winding_number(&power(-2, 64)).unwrap(), -2);
    }

    #[test]
    fn constant_loop() {
        let lp = SampledLoop::new(vec![Complex64::new(2.0, -1.0); 10]).unwrap();
        assert_eq!(winding_number(&lp).unwrap(), 0);
    }

    #[test]
    fn coarse_loop_is_rejected() {
        let err = SampledLoop::from_fn(3, |t| Complex64::from_polar(1.0, t)).unwrap_err();
        assert!(matches!(err, Error::Density { .. }));
    }

    #[test]
    fn zero_sample_is_rejected() {
        let err = SampledLoop::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap_err();
        assert_eq!(err, Error::ZeroSample(1));
    }

    #[test]
    fn orientation_and_rotation() {
        let lp = power(2, 50);
        assert_eq!(winding_number(&lp.reversed()).unwrap(), -2);
        assert_eq!(winding_number(&lp.rotated(17)).unwrap(), 2);
    }
}
