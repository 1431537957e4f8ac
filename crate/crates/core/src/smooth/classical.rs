//! Undeformed angular momentum and coordinates, the `q → 1` targets.
//!
//! With `ξ = cos θ`: `∂_θ = −√(1−ξ²) ∂_ξ`, and `i∂_φ` acts on mode `m` as `−m`.
//!
//! * `L3 = −2i∂_φ` (scales mode `m` by `2m`)
//! * `L± = e^{±iφ} √(1−ξ²) {∓∂_ξ + ξ/(1−ξ²) i∂_φ}`
//! * `X3_cl = r ξ`, `X±_cl = ∓ r √(1−ξ²) e^{±iφ} / √2`

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::smooth::dual::{CDual, Dual};
use crate::smooth::function::{ModeFn, SmoothFunction, XiDomain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassicalOp {
    L3,
    LPlus,
    LMinus,
    X3,
    XPlus,
    XMinus,
}

impl ClassicalOp {
    pub const ALL: [ClassicalOp; 6] = [
        ClassicalOp::L3,
        ClassicalOp::LPlus,
        ClassicalOp::LMinus,
        ClassicalOp::X3,
        ClassicalOp::XPlus,
        ClassicalOp::XMinus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassicalOp::L3 => "L3",
            ClassicalOp::LPlus => "L+",
            ClassicalOp::LMinus => "L-",
            ClassicalOp::X3 => "X3_cl",
            ClassicalOp::XPlus => "X+_cl",
            ClassicalOp::XMinus => "X-_cl",
        }
    }

    fn needs_derivative(self) -> bool {
        matches!(self, ClassicalOp::LPlus | ClassicalOp::LMinus)
    }
}

impl fmt::Display for ClassicalOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassicalOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace("plus", "+").replace("minus", "-").replace('^', "");
        ClassicalOp::ALL
            .iter()
            .copied()
            .find(|c| c.as_str().eq_ignore_ascii_case(&key))
            .ok_or_else(|| Error::UnknownOperator(s.to_string()))
    }
}

fn sqrt_domain(c: &ModeFn) -> XiDomain {
    c.domain.intersect(&XiDomain::new(-1.0, 1.0, "sqrt(1 - xi^2)"))
}

/// Applies a classical operator mode by mode.
pub fn classical_apply(op: ClassicalOp, f: &SmoothFunction) -> Result<SmoothFunction> {
    if op.needs_derivative() {
        if let Some((m, _)) = f.modes().find(|(_, c)| !c.has_derivative) {
            return Err(Error::Domain {
                factor: op.to_string(),
                detail: format!("mode {m} carries no derivative"),
            });
        }
    }
    f.map_modes(|m, c| {
        let inner = c.eval.clone();
        let mf = m as f64;
        let nan = Complex64::new(f64::NAN, f64::NAN);
        Ok(match op {
            ClassicalOp::L3 => (m, c.scale(Complex64::new(2.0 * mf, 0.0))),
            ClassicalOp::X3 => {
                let eval = Arc::new(move |r: f64, x: Dual| inner(r, x).times(x).times(Dual::constant(r)));
                (m, ModeFn::from_eval(eval, c.domain.clone(), c.has_derivative))
            }
            ClassicalOp::XPlus | ClassicalOp::XMinus => {
                let (sign, shift) = if op == ClassicalOp::XPlus { (-1.0, 1) } else { (1.0, -1) };
                let k = sign / std::f64::consts::SQRT_2;
                let eval = Arc::new(move |r: f64, x: Dual| {
                    let s = (Dual::constant(1.0) - x * x).sqrt();
                    inner(r, x).times(s * (k * r))
                });
                (m + shift, ModeFn::from_eval(eval, sqrt_domain(c), c.has_derivative))
            }
            ClassicalOp::LPlus | ClassicalOp::LMinus => {
                let (sign, shift) = if op == ClassicalOp::LPlus { (-1.0, 1) } else { (1.0, -1) };
                let eval = Arc::new(move |r: f64, x: Dual| {
                    let xi = x.v;
                    let jet = inner(r, Dual::variable(xi));
                    let s = (1.0 - xi * xi).sqrt();
                    // √(1−ξ²)(∓c′) + ξ/√(1−ξ²)·(−m)c
                    let v = jet.d * (sign * s) - jet.v * (mf * xi / s);
                    CDual::new(v, nan)
                });
                (m + shift, ModeFn::from_eval(eval, sqrt_domain(c), false))
            }
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::function::polynomial_gaussian;

    #[test]
    fn l3_scales_by_2m() {
        let f = SmoothFunction::single(1, polynomial_gaussian(&[1.0, 1.0]));
        let g = classical_apply(ClassicalOp::L3, &f).unwrap();
        assert_eq!(g.value(1, 0.3, 0.5).unwrap(), f.value(1, 0.3, 0.5).unwrap() * 2.0);
    }

    #[test]
    fn x3_classical() {
        let f = SmoothFunction::single(0, ModeFn::constant(1.0));
        let g = classical_apply(ClassicalOp::X3, &f).unwrap();
        assert!((g.value(0, 2.0, 0.25).unwrap().re - 0.5).abs() < 1e-16);
    }

    #[test]
    fn l_plus_on_m0() {
        // L+ {0: c} = {1: √(1−ξ²)(−c′)}
        let c = polynomial_gaussian(&[0.0, 0.0, 1.0]);
        let f = SmoothFunction::single(0, c);
        let g = classical_apply(ClassicalOp::LPlus, &f).unwrap();
        assert_eq!(g.mode_indices(), vec![1]);
        let (r, x) = (0.0, 0.6);
        assert!((g.value(1, r, x).unwrap().re - 0.8 * (-1.2)).abs() < 1e-15);
    }

    #[test]
    fn l_plus_matches_theta_form() {
        // e^{iφ}{∂_θ + cot θ · i∂_φ} on Y-like data at θ
        let m = 2;
        let f = SmoothFunction::single(m, polynomial_gaussian(&[0.1, 0.4, -0.3]));
        let g = classical_apply(ClassicalOp::LPlus, &f).unwrap();
        let theta: f64 = 1.1;
        let xi = theta.cos();
        let c = |t: f64| {
            let x = t.cos();
            0.1 + 0.4 * x - 0.3 * x * x
        };
        let h = 1e-6;
        let dtheta = (c(theta + h) - c(theta - h)) / (2.0 * h);
        let expected = dtheta + (theta.cos() / theta.sin()) * (-(m as f64)) * c(theta);
        assert!((g.value(m + 1, 0.0, xi).unwrap().re - expected).abs() < 1e-8);
    }

    #[test]
    fn names() {
        assert_eq!("L+".parse::<ClassicalOp>().unwrap(), ClassicalOp::LPlus);
        assert_eq!("Lminus".parse::<ClassicalOp>().unwrap(), ClassicalOp::LMinus);
        assert_eq!("X-_cl".parse::<ClassicalOp>().unwrap(), ClassicalOp::XMinus);
        assert!("L4".parse::<ClassicalOp>().is_err());
    }
}
