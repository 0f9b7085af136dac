//! The pair (z, p): complex interpolation parameter and norm exponent.

use num_complex::Complex64;

use crate::{Error, Result};

/// Parameters of an interpolated Lᵖ norm: the complex interpolation
/// parameter z and the exponent p ∈ [1, ∞].
///
/// Only Re z enters any norm; Im z acts by a modular phase and is kept so
/// that invariance under z ↦ z + it can be asserted exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterpolationParams {
    pub z: Complex64,
    pub p: f64,
}

impl InterpolationParams {
    pub fn new(z: Complex64, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            // NaN lands here as well.
            return Err(Error::InvalidExponent(p));
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::InvalidParameter("non-finite z".into()));
        }
        Ok(InterpolationParams { z, p })
    }

    /// The left injection parameter z = −1/2 used everywhere outside the
    /// z-sweep.
    pub fn left(p: f64) -> Result<Self> {
        Self::new(Complex64::new(-0.5, 0.0), p)
    }

    /// Conjugate exponent q with 1/p + 1/q = 1 (p = 1 ↔ q = ∞).
    pub fn conjugate_exponent(&self) -> f64 {
        if self.p == 1.0 {
            f64::INFINITY
        } else if self.p.is_infinite() {
            1.0
        } else {
            self.p / (self.p - 1.0)
        }
    }

    /// Parameters for the dual side of the Fourier transform: same z,
    /// conjugate exponent.
    pub fn dual(&self) -> Self {
        InterpolationParams {
            z: self.z,
            p: self.conjugate_exponent(),
        }
    }

    /// Weighting exponents (a, b) with ρ^a · x · ρ^b in the weighted
    /// Schatten norm; a + b = 1/p and a − b = 2·Re z / p.
    pub fn weight_exponents(&self) -> (f64, f64) {
        if self.p.is_infinite() {
            (0.0, 0.0)
        } else {
            ((0.5 + self.z.re) / self.p, (0.5 - self.z.re) / self.p)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_exponents() {
        let p1 = InterpolationParams::left(1.0).unwrap();
        assert_eq!(p1.conjugate_exponent(), f64::INFINITY);
        let p2 = InterpolationParams::left(2.0).unwrap();
        assert_eq!(p2.conjugate_exponent(), 2.0);
        let p43 = InterpolationParams::left(4.0 / 3.0).unwrap();
        assert!((p43.conjugate_exponent() - 4.0).abs() < 1e-12);
        let pinf = InterpolationParams::left(f64::INFINITY).unwrap();
        assert_eq!(pinf.conjugate_exponent(), 1.0);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(InterpolationParams::left(0.5).is_err());
        assert!(InterpolationParams::left(f64::NAN).is_err());
    }

    #[test]
    fn exponents_at_left_parameter() {
        let p = InterpolationParams::left(2.0).unwrap();
        let (a, b) = p.weight_exponents();
        assert_eq!(a, 0.0);
        assert_eq!(b, 0.5);
        let pinf = InterpolationParams::left(f64::INFINITY).unwrap();
        assert_eq!(pinf.weight_exponents(), (0.0, 0.0));
    }
}
