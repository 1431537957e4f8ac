//! Operators on smooth functions as sums of products of primitive rules:
//! multiplications, argument scalings `g(ξ) ↦ c·g(aξ)`, Fourier-mode shifts
//! and mode-dependent factors (functions of `ξ̂ = ξ q^{2i∂/∂φ}`, which acts
//! on mode `m` as `ξ q^{−2m}`).
//!
//! Coefficients here use plain floating-point powers; they are evaluated
//! independently of the exponent arithmetic in the lattice catalogue.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::OpName;
use crate::params::DeformationParams;
use crate::smooth::dual::{CDual, Dual};
use crate::smooth::function::{ModeFn, SmoothFunction, XiDomain};

/// Primitive rule acting on each Fourier mode.
#[derive(Debug, Clone)]
pub enum Prim {
    Const(Complex64),
    /// Multiplication by `ξ^k`.
    XiPow(i32),
    /// Multiplication by `|ξ|⁻¹`.
    AbsXiInv,
    /// Multiplication by `r^k`.
    RPow(i32),
    /// Multiplication by `base^m` on mode `m`.
    ModePow(f64),
    /// `√(1 − a·base^m·ξ²)` on mode `m`; restricts `|ξ|` to keep the radicand
    /// nonnegative.
    SqrtOneMinus { label: &'static str, a: f64, base: f64 },
    /// `g(ξ) ↦ pre · g(factor·ξ)`.
    ScaleXi { label: &'static str, factor: f64, pre: f64 },
    /// `g(r) ↦ pre · g(factor·r)`.
    ScaleR { factor: f64, pre: f64 },
    /// `e^{ikφ}`: mode `m` moves to `m + k`.
    Phase(i64),
    /// `Z_ξ = ξ ∂/∂ξ`. The result carries no derivative of its own.
    Zxi,
}

fn mul_by<F>(c: &ModeFn, g: F) -> ModeFn
where
    F: Fn(f64, Dual) -> Dual + Send + Sync + 'static,
{
    let inner = c.eval.clone();
    ModeFn::from_eval(
        Arc::new(move |r, x| inner(r, x).times(g(r, x))),
        c.domain.clone(),
        c.has_derivative,
    )
}

impl Prim {
    fn apply_mode(&self, m: i64, c: &ModeFn) -> (i64, ModeFn) {
        match *self {
            Prim::Const(k) => (m, c.scale(k)),
            Prim::XiPow(k) => (m, mul_by(c, move |_, x| x.powi(k))),
            Prim::AbsXiInv => (m, mul_by(c, |_, x| x.abs().powi(-1))),
            Prim::RPow(k) => (m, mul_by(c, move |r, _| Dual::constant(r.powi(k)))),
            Prim::ModePow(base) => (m, c.scale(Complex64::new(base.powi(m as i32), 0.0))),
            Prim::SqrtOneMinus { label, a, base } => {
                let k = a * base.powi(m as i32);
                let mut out = mul_by(c, move |_, x| {
                    let kx2 = x * x * k;
                    let rad = Dual::constant(1.0) - kx2;
                    // Radicands within rounding of zero are the boundary zeros.
                    if rad.v.abs() <= 4.0 * f64::EPSILON * kx2.v.abs().max(1.0) {
                        Dual::constant(0.0)
                    } else {
                        rad.sqrt()
                    }
                });
                if k > 0.0 {
                    let b = 1.0 / k.sqrt();
                    out.domain = out.domain.intersect(&XiDomain::new(-b, b, label));
                }
                (m, out)
            }
            Prim::ScaleXi { label, factor, pre } => {
                let inner = c.eval.clone();
                let eval = Arc::new(move |r, x: Dual| {
                    inner(r, Dual::new(factor * x.v, factor * x.d)).scale(pre.into())
                });
                let domain = c.domain.preimage_under_scaling(factor, label);
                (m, ModeFn::from_eval(eval, domain, c.has_derivative))
            }
            Prim::ScaleR { factor, pre } => {
                let inner = c.eval.clone();
                let eval = Arc::new(move |r: f64, x| inner(factor * r, x).scale(pre.into()));
                (m, ModeFn::from_eval(eval, c.domain.clone(), c.has_derivative))
            }
            Prim::Phase(k) => (m + k, c.clone()),
            Prim::Zxi => {
                let inner = c.eval.clone();
                let eval = Arc::new(move |r, x: Dual| {
                    let d = inner(r, Dual::variable(x.v)).d;
                    CDual::new(d * x.v, Complex64::new(f64::NAN, f64::NAN))
                });
                (m, ModeFn::from_eval(eval, c.domain.clone(), false))
            }
        }
    }

    pub fn apply(&self, f: &SmoothFunction) -> Result<SmoothFunction> {
        if matches!(self, Prim::Zxi) {
            if let Some((m, _)) = f.modes().find(|(_, c)| !c.has_derivative) {
                return Err(Error::Domain {
                    factor: "Z_xi".into(),
                    detail: format!("mode {m} carries no derivative"),
                });
            }
        }
        f.map_modes(|m, c| Ok(self.apply_mode(m, c)))
    }
}

/// `Σ_k coeff_k · P_{k,0} P_{k,1} …`; the rightmost primitive acts first.
#[derive(Debug, Clone, Default)]
pub struct SmoothOp {
    pub terms: Vec<(Complex64, Vec<Prim>)>,
}

impl SmoothOp {
    pub fn product(coeff: impl Into<Complex64>, prims: Vec<Prim>) -> Self {
        Self { terms: vec![(coeff.into(), prims)] }
    }

    pub fn plus(mut self, coeff: impl Into<Complex64>, prims: Vec<Prim>) -> Self {
        self.terms.push((coeff.into(), prims));
        self
    }

    pub fn apply(&self, f: &SmoothFunction) -> Result<SmoothFunction> {
        let mut acc = SmoothFunction::zero();
        for (coeff, prims) in &self.terms {
            let mut g = f.clone();
            for prim in prims.iter().rev() {
                g = prim.apply(&g)?;
            }
            acc = acc.add(&g.scale(*coeff));
        }
        Ok(acc)
    }
}

/// `e^{αZ_ξ}`: `g(ξ) ↦ g(e^α ξ)`.
pub fn dilation(alpha: f64) -> SmoothOp {
    SmoothOp::product(1.0, vec![Prim::ScaleXi { label: "exp(alpha Z_xi)", factor: alpha.exp(), pre: 1.0 }])
}

/// Smooth realization of a catalogue operator.
pub fn smooth_operator(name: OpName, p: &DeformationParams) -> SmoothOp {
    use Prim::*;
    let q = p.q();
    let lam = p.lambda();
    let phase = p.theta_phase();
    let q2m1 = q * q - 1.0;
    let lambda_xi = ScaleXi { label: "Lambda_xi", factor: q * q, pre: q };
    let lambda_xi_inv = ScaleXi { label: "Lambda_xi^-1", factor: 1.0 / (q * q), pre: 1.0 / q };
    let sqrt_lo = SqrtOneMinus { label: "sqrt(1 - q^-2 xi^2)", a: 1.0 / (q * q), base: 1.0 };
    let sqrt_hi = SqrtOneMinus { label: "sqrt(1 - q^2 xi^2)", a: q * q, base: 1.0 };
    // ξ̂² = ξ² q^{−4m}
    let sqrt_hat_hi = SqrtOneMinus { label: "sqrt(1 - q^2 xihat^2)", a: q * q, base: q.powi(-4) };
    let sqrt_hat_lo =
        SqrtOneMinus { label: "sqrt(1 - q^-2 xihat^2)", a: 1.0 / (q * q), base: q.powi(-4) };
    let t_plus = vec![Phase(1), XiPow(-1), sqrt_lo.clone(), lambda_xi_inv.clone()];
    let t_minus = vec![Phase(-1), XiPow(-1), sqrt_hi.clone(), lambda_xi.clone()];

    match name {
        OpName::Identity => SmoothOp::product(1.0, vec![]),
        OpName::R => SmoothOp::product(1.0, vec![RPow(1)]),
        OpName::R2 => SmoothOp::product(1.0, vec![RPow(2)]),
        OpName::Xi => SmoothOp::product(1.0, vec![XiPow(1)]),
        OpName::XiInv => SmoothOp::product(1.0, vec![XiPow(-1)]),
        OpName::AbsXiInv => SmoothOp::product(1.0, vec![AbsXiInv]),
        OpName::X3Inv => SmoothOp::product(1.0, vec![RPow(-1), XiPow(-1)]),
        OpName::XiHat => SmoothOp::product(1.0, vec![XiPow(1), ModePow(q.powi(-2))]),
        OpName::X3 => SmoothOp::product(1.0, vec![RPow(1), XiPow(1)]),
        OpName::XPlus => SmoothOp::product(
            -1.0 / (1.0 + 1.0 / (q * q)).sqrt(),
            vec![RPow(1), Phase(1), sqrt_lo, lambda_xi_inv],
        ),
        OpName::XMinus => SmoothOp::product(
            1.0 / (1.0 + q * q).sqrt(),
            vec![RPow(1), Phase(-1), sqrt_hi, lambda_xi],
        ),
        OpName::T3 => SmoothOp::product(1.0 / lam, vec![]).plus(1.0 / lam, vec![XiPow(-2)]),
        OpName::TPlus => SmoothOp::product(1.0 / lam, t_plus),
        OpName::TMinus => SmoothOp::product(1.0 / lam, t_minus),
        OpName::TauT => SmoothOp::product(-1.0, vec![XiPow(-2)]),
        OpName::K3 => SmoothOp::product(1.0 / lam, vec![])
            .plus(1.0 / lam, vec![XiPow(2), ModePow(q.powi(-4))]),
        OpName::KPlus => SmoothOp::product(phase / q2m1, vec![sqrt_hat_hi, Phase(1)]),
        OpName::KMinus => {
            SmoothOp::product(-phase.conj() * (q * q / q2m1), vec![sqrt_hat_lo, Phase(-1)])
        }
        OpName::TauK => SmoothOp::product(-1.0, vec![XiPow(2), ModePow(q.powi(-4))]),
        OpName::Torb3 => {
            SmoothOp::product(1.0 / lam, vec![]).plus(-1.0 / lam, vec![ModePow(q.powi(-4))])
        }
        OpName::TorbPlus => SmoothOp::product(1.0 / lam, t_plus)
            .plus(phase / q2m1, vec![XiPow(-1), sqrt_hat_hi, Phase(1)]),
        OpName::TorbMinus => SmoothOp::product(1.0 / lam, t_minus)
            .plus(phase * (q * q / q2m1), vec![XiPow(-1), sqrt_hat_lo, Phase(-1)]),
        OpName::TauOrb => SmoothOp::product(1.0, vec![ModePow(q.powi(-4))]),
        OpName::Lambda => SmoothOp::product(1.0, vec![ScaleR { factor: q.powi(4), pre: q * q }]),
        OpName::LambdaXi => SmoothOp::product(1.0, vec![lambda_xi]),
        OpName::LambdaXiInv => SmoothOp::product(1.0, vec![lambda_xi_inv]),
        OpName::ZXi => SmoothOp::product(1.0, vec![Zxi]),
        OpName::PhasePlus => SmoothOp::product(1.0, vec![Phase(1)]),
        OpName::PhaseMinus => SmoothOp::product(1.0, vec![Phase(-1)]),
    }
}

/// Applies the smooth form of `name` to `f`.
pub fn smooth_apply(name: OpName, f: &SmoothFunction, p: &DeformationParams) -> Result<SmoothFunction> {
    smooth_operator(name, p).apply(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::function::polynomial_gaussian;

    fn p2() -> DeformationParams {
        DeformationParams::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn x3_multiplies_by_r_xi() {
        let f = SmoothFunction::single(0, ModeFn::constant(1.0));
        let g = smooth_apply(OpName::X3, &f, &p2()).unwrap();
        assert_eq!(g.mode_indices(), vec![0]);
        assert!((g.value(0, 1.3, 0.4).unwrap().re - 0.52).abs() < 1e-15);
    }

    #[test]
    fn tau_orb_scales_mode() {
        let f = SmoothFunction::single(2, polynomial_gaussian(&[1.0, 1.0]));
        let g = smooth_apply(OpName::TauOrb, &f, &p2()).unwrap();
        let (a, b) = (g.value(2, 0.5, 0.3).unwrap(), f.value(2, 0.5, 0.3).unwrap());
        assert!((a - b / 256.0).norm() < 1e-16);
    }

    #[test]
    fn t_minus_example() {
        let f = SmoothFunction::single(0, ModeFn::constant(1.0));
        let g = smooth_apply(OpName::TMinus, &f, &p2()).unwrap();
        assert_eq!(g.mode_indices(), vec![-1]);
        // (q/λ) ξ⁻¹ √(1 − q²ξ²) at q = 2, ξ = 0.2
        let expected = (2.0 / 1.5) * 5.0 * 0.84f64.sqrt();
        assert!((g.value(-1, 1.0, 0.2).unwrap().re - expected).abs() < 1e-13);
    }

    #[test]
    fn t_minus_domain_error_names_factor() {
        let f = SmoothFunction::single(0, ModeFn::constant(1.0));
        let g = smooth_apply(OpName::TMinus, &f, &p2()).unwrap();
        // q²ξ leaves (0, 1) above ξ = 1/4; the radicand 1 − 4ξ² above ξ = 1/2.
        let err = g.value(-1, 1.0, 0.3).unwrap_err();
        match err {
            Error::Domain { factor, .. } => assert!(factor.contains("Lambda_xi"), "{factor}"),
            e => panic!("{e}"),
        }
        let h = smooth_apply(OpName::KPlus, &SmoothFunction::single(-2, ModeFn::constant(1.0)), &p2())
            .unwrap();
        // mode −1 after the shift: radicand 1 − q² q⁴ ξ², bound 2^{-3}
        assert!(h.value(-1, 1.0, 0.1).is_ok());
        match h.value(-1, 1.0, 0.2).unwrap_err() {
            Error::Domain { factor, .. } => assert_eq!(factor, "sqrt(1 - q^2 xihat^2)"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn lambda_xi_inverse_pair() {
        let p = DeformationParams::new(1.3, 1.0).unwrap();
        let f = SmoothFunction::single(1, polynomial_gaussian(&[0.2, -1.0, 2.0]));
        let g = smooth_apply(OpName::LambdaXiInv, &f, &p).unwrap();
        let gg = smooth_apply(OpName::LambdaXi, &g, &p).unwrap();
        for x in [0.1, 0.35, 0.8] {
            let a = gg.value(1, 0.7, x).unwrap();
            let b = f.value(1, 0.7, x).unwrap();
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn dilation_conjugates_xi() {
        // e^{αZ} ξ e^{−αZ} = e^α ξ for α = ±2 ln q
        let p = DeformationParams::new(1.4, 1.0).unwrap();
        let f = SmoothFunction::single(0, polynomial_gaussian(&[1.0, 0.3, -0.7]));
        for alpha in [2.0 * p.q().ln(), -2.0 * p.q().ln()] {
            let lhs = dilation(alpha)
                .apply(&smooth_apply(OpName::Xi, &dilation(-alpha).apply(&f).unwrap(), &p).unwrap())
                .unwrap();
            let rhs = smooth_apply(OpName::Xi, &f, &p).unwrap().scale(alpha.exp().into());
            for x in [0.1, 0.2, 0.4] {
                let a = lhs.value(0, 0.9, x).unwrap();
                let b = rhs.value(0, 0.9, x).unwrap();
                assert!((a - b).norm() < 1e-14, "alpha={alpha} x={x}");
            }
        }
    }

    #[test]
    fn z_xi_commutator_with_xi() {
        // [Z_ξ, ξ] = ξ
        let p = p2();
        let f = SmoothFunction::single(0, polynomial_gaussian(&[0.5, 1.0, 3.0]));
        let zx = smooth_apply(OpName::ZXi, &smooth_apply(OpName::Xi, &f, &p).unwrap(), &p).unwrap();
        let xz = smooth_apply(OpName::Xi, &smooth_apply(OpName::ZXi, &f, &p).unwrap(), &p).unwrap();
        let xf = smooth_apply(OpName::Xi, &f, &p).unwrap();
        for x in [0.2, 0.5, 0.7] {
            let c = zx.value(0, 1.0, x).unwrap() - xz.value(0, 1.0, x).unwrap();
            assert!((c - xf.value(0, 1.0, x).unwrap()).norm() < 1e-14);
        }
        assert!(smooth_apply(OpName::ZXi, &zx, &p).is_err());
    }

    #[test]
    fn linear_in_f() {
        let p = DeformationParams::new(1.2, 1.0).unwrap();
        let f1 = SmoothFunction::single(0, polynomial_gaussian(&[1.0, 2.0]));
        let f2 = SmoothFunction::single(1, polynomial_gaussian(&[0.0, -1.0, 0.5]))
            .with_mode(0, polynomial_gaussian(&[0.3]));
        let (a, b) = (Complex64::new(0.5, -1.0), Complex64::new(2.0, 0.25));
        let combo = f1.scale(a).add(&f2.scale(b));
        for name in [OpName::TorbPlus, OpName::TorbMinus, OpName::K3, OpName::XPlus] {
            let lhs = smooth_apply(name, &combo, &p).unwrap();
            let g1 = smooth_apply(name, &f1, &p).unwrap();
            let g2 = smooth_apply(name, &f2, &p).unwrap();
            let rhs = g1.scale(a).add(&g2.scale(b));
            for m in lhs.mode_indices() {
                for x in [0.1, 0.3] {
                    let d = lhs.value(m, 0.8, x).unwrap() - rhs.value(m, 0.8, x).unwrap();
                    assert!(d.norm() < 1e-12, "{name} m={m}");
                }
            }
        }
    }
}
