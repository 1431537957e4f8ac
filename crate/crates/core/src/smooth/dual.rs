//! Forward-mode dual numbers in `ξ`, used to carry analytic `∂/∂ξ` through
//! argument scalings and multiplications.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Real dual number `v + d·ε`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub v: f64,
    pub d: f64,
}

impl Dual {
    pub const fn new(v: f64, d: f64) -> Self {
        Self { v, d }
    }

    /// The independent variable at `x`.
    pub const fn variable(x: f64) -> Self {
        Self::new(x, 1.0)
    }

    pub const fn constant(c: f64) -> Self {
        Self::new(c, 0.0)
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        Self::new(s, 0.5 * self.d / s)
    }

    pub fn powi(self, k: i32) -> Self {
        if k == 0 {
            return Self::constant(1.0);
        }
        Self::new(self.v.powi(k), k as f64 * self.v.powi(k - 1) * self.d)
    }

    pub fn abs(self) -> Self {
        if self.v < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        Self::new(e, e * self.d)
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual::new(self.v + o.v, self.d + o.d)
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual::new(self.v - o.v, self.d - o.d)
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual::new(self.v * o.v, self.d * o.v + self.v * o.d)
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        Dual::new(self.v / o.v, (self.d * o.v - self.v * o.d) / (o.v * o.v))
    }
}

impl Mul<f64> for Dual {
    type Output = Dual;
    fn mul(self, c: f64) -> Dual {
        Dual::new(self.v * c, self.d * c)
    }
}

impl Add<f64> for Dual {
    type Output = Dual;
    fn add(self, c: f64) -> Dual {
        Dual::new(self.v + c, self.d)
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual::new(-self.v, -self.d)
    }
}

/// Complex value with its `ξ`-derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CDual {
    pub v: Complex64,
    pub d: Complex64,
}

impl CDual {
    pub const fn new(v: Complex64, d: Complex64) -> Self {
        Self { v, d }
    }

    pub fn zero() -> Self {
        Self::new(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    }

    pub fn real(x: Dual) -> Self {
        Self::new(Complex64::new(x.v, 0.0), Complex64::new(x.d, 0.0))
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self::new(self.v * c, self.d * c)
    }

    /// Product with a real dual factor.
    pub fn times(self, g: Dual) -> Self {
        Self::new(self.v * g.v, self.d * g.v + self.v * g.d)
    }
}

impl Add for CDual {
    type Output = CDual;
    fn add(self, o: CDual) -> CDual {
        CDual::new(self.v + o.v, self.d + o.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_rule() {
        // d/dx sqrt(1 - 4x^2) / x at x = 0.3
        let x = Dual::variable(0.3);
        let f = (Dual::constant(1.0) - x * x * 4.0).sqrt() / x;
        let s = (1.0f64 - 0.36).sqrt();
        let expected = (-4.0 * 0.3 / s) / 0.3 - s / 0.09;
        assert!((f.d - expected).abs() < 1e-12);
        let g = x.powi(-2);
        assert!((g.d + 2.0 / 0.027).abs() < 1e-9);
    }
}
