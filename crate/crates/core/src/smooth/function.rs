//! Test functions with finite Fourier support in `φ`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::smooth::dual::{CDual, Dual};

/// Relative widening of domain endpoints.
pub const EDGE_SLACK: f64 = 1e-14;

pub type ModeEval = Arc<dyn Fn(f64, Dual) -> CDual + Send + Sync>;

/// One end of a `ξ`-interval together with the factor that imposed it.
#[derive(Debug, Clone, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub factor: String,
}

/// Closed interval of admissible `ξ`.
#[derive(Debug, Clone, PartialEq)]
pub struct XiDomain {
    pub lo: Bound,
    pub hi: Bound,
}

impl XiDomain {
    pub fn new(lo: f64, hi: f64, factor: &str) -> Self {
        Self {
            lo: Bound { value: lo, factor: factor.to_string() },
            hi: Bound { value: hi, factor: factor.to_string() },
        }
    }

    /// The declared domain `ξ ∈ (0, 1)`.
    pub fn unit() -> Self {
        Self::new(0.0, 1.0, "declared domain")
    }

    pub fn is_empty(&self) -> bool {
        !(self.lo.value <= self.hi.value)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo.value <= x && x <= self.hi.value
    }

    pub fn intersect(&self, other: &XiDomain) -> XiDomain {
        let lo = if other.lo.value > self.lo.value { &other.lo } else { &self.lo };
        let hi = if other.hi.value < self.hi.value { &other.hi } else { &self.hi };
        XiDomain { lo: lo.clone(), hi: hi.clone() }
    }

    /// Domain of `g(aξ)` given the domain of `g`, for `a > 0`.
    pub fn preimage_under_scaling(&self, a: f64, label: &str) -> XiDomain {
        XiDomain {
            lo: Bound {
                value: self.lo.value / a,
                factor: format!("{label} <- {}", self.lo.factor),
            },
            hi: Bound {
                value: self.hi.value / a,
                factor: format!("{label} <- {}", self.hi.factor),
            },
        }
    }

    /// Factor responsible for excluding `x`, if any. Endpoints are widened by
    /// a few ulps so lattice points computed on the boundary stay inside.
    pub fn violation(&self, x: f64) -> Option<&Bound> {
        let slack = |b: f64| EDGE_SLACK * b.abs();
        if x < self.lo.value - slack(self.lo.value) {
            Some(&self.lo)
        } else if x > self.hi.value + slack(self.hi.value) {
            Some(&self.hi)
        } else {
            None
        }
    }
}

/// Mode function `c_m(r, ξ)`, evaluable together with `∂c_m/∂ξ`.
#[derive(Clone)]
pub struct ModeFn {
    pub(crate) eval: ModeEval,
    pub domain: XiDomain,
    pub has_derivative: bool,
}

impl fmt::Debug for ModeFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeFn")
            .field("domain", &self.domain)
            .field("has_derivative", &self.has_derivative)
            .finish_non_exhaustive()
    }
}

impl ModeFn {
    /// From a value and its analytic `ξ`-derivative, on `ξ ∈ (0, 1)`.
    pub fn from_pair<V, D>(value: V, deriv: D) -> Self
    where
        V: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
        D: Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    {
        Self {
            eval: Arc::new(move |r, x: Dual| CDual::new(value(r, x.v), deriv(r, x.v) * x.d)),
            domain: XiDomain::unit(),
            has_derivative: true,
        }
    }

    /// Constant mode function.
    pub fn constant(c: impl Into<Complex64>) -> Self {
        let c = c.into();
        Self::from_pair(move |_, _| c, |_, _| Complex64::new(0.0, 0.0))
    }

    pub(crate) fn from_eval(eval: ModeEval, domain: XiDomain, has_derivative: bool) -> Self {
        Self { eval, domain, has_derivative }
    }

    pub fn with_domain(mut self, domain: XiDomain) -> Self {
        self.domain = domain;
        self
    }

    fn check(&self, xi: f64) -> Result<()> {
        match self.domain.violation(xi) {
            None => Ok(()),
            Some(b) => Err(Error::Domain {
                factor: b.factor.clone(),
                detail: format!(
                    "xi = {xi} outside [{}, {}]",
                    self.domain.lo.value, self.domain.hi.value
                ),
            }),
        }
    }

    pub fn value(&self, r: f64, xi: f64) -> Result<Complex64> {
        self.check(xi)?;
        Ok((self.eval)(r, Dual::constant(xi)).v)
    }

    pub fn derivative(&self, r: f64, xi: f64) -> Result<Complex64> {
        if !self.has_derivative {
            return Err(Error::Domain {
                factor: "d/dxi".into(),
                detail: "mode function carries no derivative".into(),
            });
        }
        self.check(xi)?;
        Ok((self.eval)(r, Dual::variable(xi)).d)
    }

    pub(crate) fn add(&self, other: &ModeFn) -> ModeFn {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        ModeFn {
            eval: Arc::new(move |r, x| a(r, x) + b(r, x)),
            domain: self.domain.intersect(&other.domain),
            has_derivative: self.has_derivative && other.has_derivative,
        }
    }

    pub(crate) fn scale(&self, c: Complex64) -> ModeFn {
        let a = self.eval.clone();
        ModeFn {
            eval: Arc::new(move |r, x| a(r, x).scale(c)),
            domain: self.domain.clone(),
            has_derivative: self.has_derivative,
        }
    }
}

/// Finite Fourier sum `Σ_m c_m(r, ξ) e^{imφ}`.
#[derive(Clone, Debug, Default)]
pub struct SmoothFunction {
    modes: BTreeMap<i64, ModeFn>,
}

impl SmoothFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(m: i64, c: ModeFn) -> Self {
        Self::zero().with_mode(m, c)
    }

    /// Adds `c` to mode `m`.
    pub fn with_mode(mut self, m: i64, c: ModeFn) -> Self {
        self.add_mode(m, c);
        self
    }

    pub(crate) fn add_mode(&mut self, m: i64, c: ModeFn) {
        let merged = match self.modes.get(&m) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        self.modes.insert(m, merged);
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, &ModeFn)> {
        self.modes.iter().map(|(m, c)| (*m, c))
    }

    pub fn mode(&self, m: i64) -> Option<&ModeFn> {
        self.modes.get(&m)
    }

    pub fn mode_indices(&self) -> Vec<i64> {
        self.modes.keys().copied().collect()
    }

    /// Value of mode `m` at `(r, ξ)`; absent modes evaluate to zero.
    pub fn value(&self, m: i64, r: f64, xi: f64) -> Result<Complex64> {
        match self.modes.get(&m) {
            Some(c) => c.value(r, xi),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    /// Full value `Σ c_m(r, ξ) e^{imφ}`.
    pub fn value_at(&self, r: f64, xi: f64, phi: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.modes {
            acc += c.value(r, xi)? * Complex64::from_polar(1.0, *m as f64 * phi);
        }
        Ok(acc)
    }

    pub fn add(&self, other: &SmoothFunction) -> SmoothFunction {
        let mut out = self.clone();
        for (m, c) in &other.modes {
            out.add_mode(*m, c.clone());
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> SmoothFunction {
        Self { modes: self.modes.iter().map(|(m, f)| (*m, f.scale(c))).collect() }
    }

    pub(crate) fn map_modes<F>(&self, mut f: F) -> Result<SmoothFunction>
    where
        F: FnMut(i64, &ModeFn) -> Result<(i64, ModeFn)>,
    {
        let mut out = SmoothFunction::zero();
        for (m, c) in &self.modes {
            let (m2, c2) = f(*m, c)?;
            if c2.domain.is_empty() {
                let b = &c2.domain.hi;
                return Err(Error::Domain {
                    factor: b.factor.clone(),
                    detail: format!(
                        "mode {m2} has empty xi-domain [{}, {}]",
                        c2.domain.lo.value, c2.domain.hi.value
                    ),
                });
            }
            out.add_mode(m2, c2);
        }
        Ok(out)
    }
}

/// `(Σ_k a_k ξ^k) · e^{−r²}` with its analytic `ξ`-derivative.
pub fn polynomial_gaussian(coeffs: &[f64]) -> ModeFn {
    let c: Vec<f64> = coeffs.to_vec();
    let d: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, a)| k as f64 * a).collect();
    let horner = |cs: &[f64], x: f64| cs.iter().rev().fold(0.0, |acc, a| acc * x + a);
    ModeFn::from_pair(
        move |r, x| Complex64::new(horner(&c, x) * (-r * r).exp(), 0.0),
        move |r, x| Complex64::new(horner(&d, x) * (-r * r).exp(), 0.0),
    )
}

/// Test function with modes `−max_mode..=max_mode`, each a different
/// quadratic in `ξ` times a Gaussian in `r`.
pub fn standard_test_function(max_mode: i64) -> SmoothFunction {
    let mut f = SmoothFunction::zero();
    for m in -max_mode..=max_mode {
        let k = m as f64;
        f = f.with_mode(m, polynomial_gaussian(&[1.0 + 0.1 * k, 0.5 - 0.2 * k, 0.3 + 0.05 * k * k]));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_derivative() {
        let c = polynomial_gaussian(&[1.0, 2.0, 3.0]);
        let (r, x) = (0.5, 0.4);
        let g = (-0.25f64).exp();
        assert!((c.value(r, x).unwrap().re - (1.0 + 0.8 + 0.48) * g).abs() < 1e-15);
        assert!((c.derivative(r, x).unwrap().re - (2.0 + 2.4) * g).abs() < 1e-15);
    }

    #[test]
    fn domain_violation_names_factor() {
        let c = ModeFn::constant(1.0);
        match c.value(1.0, 1.5) {
            Err(Error::Domain { factor, .. }) => assert_eq!(factor, "declared domain"),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn modes_add() {
        let f = SmoothFunction::single(1, ModeFn::constant(2.0))
            .add(&SmoothFunction::single(1, ModeFn::constant(3.0)));
        assert_eq!(f.value(1, 1.0, 0.5).unwrap(), Complex64::new(5.0, 0.0));
        assert_eq!(f.value(0, 1.0, 0.5).unwrap(), Complex64::new(0.0, 0.0));
        let v = f.value_at(1.0, 0.5, std::f64::consts::FRAC_PI_2).unwrap();
        assert!((v - Complex64::new(0.0, 5.0)).norm() < 1e-15);
    }
}
