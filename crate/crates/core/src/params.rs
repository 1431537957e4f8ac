//! Deformation parameters and exact integer powers of `q`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global configuration of the deformation: `q`, the radial scale `r0` and the
/// unit phase `e^{iϑ}` carried by the `K±` operators.
///
/// `λ = q − 1/q` is recomputed on every access.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationParams {
    q: f64,
    r0: f64,
    theta_phase: Complex64,
}

impl DeformationParams {
    /// Phase tolerance for `|e^{iϑ}| = 1`.
    const PHASE_TOL: f64 = 1e-12;

    pub fn new(q: f64, r0: f64) -> Result<Self> {
        Self::with_phase(q, r0, Complex64::new(-1.0, 0.0))
    }

    pub fn with_phase(q: f64, r0: f64, theta_phase: Complex64) -> Result<Self> {
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "q must be finite and > 1 (got {q}); q = 1 makes lambda vanish"
            )));
        }
        if !r0.is_finite() || r0 <= 0.0 {
            return Err(Error::InvalidParams(format!("r0 must be positive (got {r0})")));
        }
        if !theta_phase.re.is_finite()
            || !theta_phase.im.is_finite()
            || (theta_phase.norm() - 1.0).abs() > Self::PHASE_TOL
        {
            return Err(Error::InvalidParams(format!(
                "theta phase must have unit modulus (got {theta_phase})"
            )));
        }
        Ok(Self { q, r0, theta_phase })
    }

    /// `q = e^h`, the parametrization used for classical-limit studies.
    pub fn from_h(h: f64, r0: f64) -> Result<Self> {
        Self::new(h.exp(), r0)
    }

    /// Phase `e^{iϑ}` from the angle `ϑ`.
    pub fn with_theta_angle(mut self, theta: f64) -> Self {
        self.theta_phase = Complex64::from_polar(1.0, theta);
        self
    }

    pub fn with_theta_phase(self, theta_phase: Complex64) -> Result<Self> {
        Self::with_phase(self.q, self.r0, theta_phase)
    }

    pub fn with_r0(self, r0: f64) -> Result<Self> {
        Self::with_phase(self.q, r0, self.theta_phase)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn theta_phase(&self) -> Complex64 {
        self.theta_phase
    }

    pub fn lambda(&self) -> f64 {
        self.q - 1.0 / self.q
    }

    /// `q^n` by exponentiation by squaring of `q` (n ≥ 0) or `1/q` (n < 0).
    pub fn qpow(&self, n: i64) -> f64 {
        let base = if n >= 0 { self.q } else { 1.0 / self.q };
        pow_by_squaring(base, n.unsigned_abs())
    }

    /// `√(1 − q^n)`, exactly zero at `n = 0`.
    ///
    /// Callers only pass `n ≤ 0`; a positive exponent (negative radicand for
    /// `q > 1`) yields NaN.
    pub fn sqrt_one_minus_qpow(&self, n: i64) -> f64 {
        if n == 0 {
            0.0
        } else {
            (1.0 - self.qpow(n)).sqrt()
        }
    }
}

fn pow_by_squaring(mut base: f64, mut exp: u64) -> f64 {
    let mut acc = 1.0;
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= base;
        }
        base *= base;
        exp >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_is_recomputed() {
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        assert_eq!(p.lambda(), 1.5);
        assert_eq!(p.theta_phase(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn rejects_degenerate_q() {
        assert!(DeformationParams::new(1.0, 1.0).is_err());
        assert!(DeformationParams::new(0.5, 1.0).is_err());
        assert!(DeformationParams::new(f64::NAN, 1.0).is_err());
        assert!(DeformationParams::new(2.0, 0.0).is_err());
        assert!(DeformationParams::with_phase(2.0, 1.0, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn integer_powers() {
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        assert_eq!(p.qpow(0), 1.0);
        assert_eq!(p.qpow(10), 1024.0);
        assert_eq!(p.qpow(-3), 0.125);
        let p = DeformationParams::new(1.1, 1.0).unwrap();
        assert!((p.qpow(7) - 1.1f64.powi(7)).abs() < 1e-14);
        assert_eq!(p.sqrt_one_minus_qpow(0), 0.0);
        assert!(p.sqrt_one_minus_qpow(1).is_nan());
    }

    #[test]
    fn angle_constructor() {
        let p = DeformationParams::new(2.0, 1.0)
            .unwrap()
            .with_theta_angle(std::f64::consts::PI);
        assert!((p.theta_phase() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
    }
}
