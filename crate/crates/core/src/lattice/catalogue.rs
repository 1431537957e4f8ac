//! The operator catalogue as index-shift rules on the lattice eigenbasis.
//!
//! Each operator is a short list of [`ShiftTerm`]s. A term carries the
//! amplitude `coeff(source)` from `source` to `source + shift`. Coefficients
//! are written in integer exponents of `q` so that the boundary zeros
//! (`√(1 − q⁰)`) come out exactly zero.
//!
//! Products of the form `f(ξ̂) e^{±iφ}` act right to left: the phase shifts
//! `m` first and `f` is evaluated at the shifted label.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::{BasisIndex, Shift};
use crate::error::{Error, Result};
use crate::params::DeformationParams;

/// Names of every operator the library knows, lattice and smooth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OpName {
    Identity,
    R,
    R2,
    Xi,
    XiInv,
    AbsXiInv,
    X3Inv,
    XiHat,
    X3,
    XPlus,
    XMinus,
    T3,
    TPlus,
    TMinus,
    TauT,
    K3,
    KPlus,
    KMinus,
    TauK,
    Torb3,
    TorbPlus,
    TorbMinus,
    TauOrb,
    /// Radial scaling with `Λ r = q⁴ r Λ`.
    Lambda,
    /// `Λ_ξ = q^{2Z_ξ}`, `(Λ_ξ f)(ξ) = q f(q²ξ)`. Smooth side only.
    LambdaXi,
    LambdaXiInv,
    /// `Z_ξ = ξ ∂/∂ξ`. Smooth side only.
    ZXi,
    /// Multiplication by `e^{iφ}`. Smooth side only.
    PhasePlus,
    PhaseMinus,
}

impl OpName {
    pub const ALL: [OpName; 29] = [
        OpName::Identity,
        OpName::R,
        OpName::R2,
        OpName::Xi,
        OpName::XiInv,
        OpName::AbsXiInv,
        OpName::X3Inv,
        OpName::XiHat,
        OpName::X3,
        OpName::XPlus,
        OpName::XMinus,
        OpName::T3,
        OpName::TPlus,
        OpName::TMinus,
        OpName::TauT,
        OpName::K3,
        OpName::KPlus,
        OpName::KMinus,
        OpName::TauK,
        OpName::Torb3,
        OpName::TorbPlus,
        OpName::TorbMinus,
        OpName::TauOrb,
        OpName::Lambda,
        OpName::LambdaXi,
        OpName::LambdaXiInv,
        OpName::ZXi,
        OpName::PhasePlus,
        OpName::PhaseMinus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OpName::Identity => "id",
            OpName::R => "r",
            OpName::R2 => "R2",
            OpName::Xi => "xi",
            OpName::XiInv => "xi_inv",
            OpName::AbsXiInv => "abs_xi_inv",
            OpName::X3Inv => "X3_inv",
            OpName::XiHat => "xihat",
            OpName::X3 => "X3",
            OpName::XPlus => "X+",
            OpName::XMinus => "X-",
            OpName::T3 => "t3",
            OpName::TPlus => "t+",
            OpName::TMinus => "t-",
            OpName::TauT => "tau_t",
            OpName::K3 => "K3",
            OpName::KPlus => "K+",
            OpName::KMinus => "K-",
            OpName::TauK => "tau_k",
            OpName::Torb3 => "Torb3",
            OpName::TorbPlus => "Torb+",
            OpName::TorbMinus => "Torb-",
            OpName::TauOrb => "tau_orb",
            OpName::Lambda => "Lambda",
            OpName::LambdaXi => "Lambda_xi",
            OpName::LambdaXiInv => "Lambda_xi_inv",
            OpName::ZXi => "Z_xi",
            OpName::PhasePlus => "e+iphi",
            OpName::PhaseMinus => "e-iphi",
        }
    }

    /// Whether the operator acts on the lattice Hilbert space.
    ///
    /// `Λ_ξ^{±1}` and `e^{±iφ}` alone do not preserve `{m_t ≤ 0, m ≥ m_t}`;
    /// they only appear inside catalogue products.
    pub fn on_lattice(self) -> bool {
        !matches!(
            self,
            OpName::LambdaXi
                | OpName::LambdaXiInv
                | OpName::ZXi
                | OpName::PhasePlus
                | OpName::PhaseMinus
        )
    }

    pub fn lattice(self) -> Result<LatticeOperator> {
        LatticeOperator::new(self)
    }
}

impl fmt::Display for OpName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OpName {
    type Err = Error;

    /// Accepts the canonical names plus `plus`/`minus` spellings
    /// (`Kplus`, `Torb_minus`, `X^+`).
    fn from_str(s: &str) -> Result<Self> {
        let mut key = s.trim().replace('^', "");
        for (suffix, sign) in [("_plus", "+"), ("plus", "+"), ("_minus", "-"), ("minus", "-")] {
            if let Some(stem) = key.strip_suffix(suffix) {
                if !stem.is_empty() {
                    key = format!("{stem}{sign}");
                    break;
                }
            }
        }
        OpName::ALL
            .iter()
            .copied()
            .find(|n| n.as_str().eq_ignore_ascii_case(&key))
            .ok_or_else(|| Error::UnknownOperator(s.to_string()))
    }
}

/// One shift rule: amplitude `coeff(source)` is carried to `source + shift`.
#[derive(Clone, Copy)]
pub struct ShiftTerm {
    pub shift: Shift,
    pub coeff: fn(&BasisIndex, &DeformationParams) -> Complex64,
}

impl fmt::Debug for ShiftTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShiftTerm").field("shift", &self.shift).finish_non_exhaustive()
    }
}

/// A catalogue operator realized on the lattice.
#[derive(Debug, Clone, Copy)]
pub struct LatticeOperator {
    pub name: OpName,
    pub terms: &'static [ShiftTerm],
}

impl LatticeOperator {
    pub fn new(name: OpName) -> Result<Self> {
        terms(name)
            .map(|terms| Self { name, terms })
            .ok_or_else(|| Error::NotOnLattice(name.to_string()))
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].shift.is_zero()
    }

    /// Nonzero images of one basis vector, in term order.
    pub fn action(&self, idx: &BasisIndex, p: &DeformationParams) -> Vec<(BasisIndex, Complex64)> {
        let mut out = Vec::with_capacity(self.terms.len());
        for term in self.terms {
            let c = (term.coeff)(idx, p);
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let target = idx.shifted(term.shift);
            debug_assert!(
                target.is_valid(),
                "{} maps {idx} outside the representation space with coefficient {c}",
                self.name
            );
            if target.is_valid() {
                out.push((target, c));
            }
        }
        out
    }
}

/// Images of `idx` under the named operator.
pub fn operator_action(
    name: OpName,
    idx: &BasisIndex,
    p: &DeformationParams,
) -> Result<Vec<(BasisIndex, Complex64)>> {
    Ok(LatticeOperator::new(name)?.action(idx, p))
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn sg(i: &BasisIndex) -> f64 {
    i.sigma.as_f64()
}

fn q2m1(p: &DeformationParams) -> f64 {
    p.qpow(2) - 1.0
}

const fn diag(coeff: fn(&BasisIndex, &DeformationParams) -> Complex64) -> ShiftTerm {
    ShiftTerm { shift: Shift::ZERO, coeff }
}

const RAISE: Shift = Shift::new(0, 1, 1);
const LOWER: Shift = Shift::new(0, -1, -1);
const M_UP: Shift = Shift::new(0, 0, 1);
const M_DOWN: Shift = Shift::new(0, 0, -1);

fn c_id(_: &BasisIndex, _: &DeformationParams) -> Complex64 {
    re(1.0)
}
fn c_r(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(p.r0() * p.qpow(4 * i.radial + 2))
}
fn c_r2(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(p.r0() * p.r0() * p.qpow(8 * i.radial + 4))
}
fn c_xi(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(2 * i.mt - 1))
}
fn c_xi_inv(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(1 - 2 * i.mt))
}
fn c_abs_xi_inv(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(p.qpow(1 - 2 * i.mt))
}
fn c_x3_inv(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(-4 * i.radial - 2 * i.mt - 1) / p.r0())
}
fn c_xihat(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(2 * (i.mt - i.m) - 1))
}
fn c_x3(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.r0() * p.qpow(4 * i.radial + 2 * i.mt + 1))
}
fn c_t3(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re((1.0 + p.qpow(2 - 4 * i.mt)) / p.lambda())
}
fn c_tau_t(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(-p.qpow(2 - 4 * i.mt))
}
fn c_k3(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re((1.0 + p.qpow(4 * (i.mt - i.m) - 2)) / p.lambda())
}
fn c_tau_k(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(-p.qpow(4 * (i.mt - i.m) - 2))
}
fn c_tau_orb(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(p.qpow(-4 * i.m))
}
fn c_torb3(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re((1.0 - p.qpow(-4 * i.m)) / p.lambda())
}

// X⁺ = −r e^{iφ} √((1 − q⁻²ξ²)/(1 + q⁻²)) Λ_ξ⁻¹, radicand at m_t + 1.
fn c_x_plus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    let amp = p.r0() * p.qpow(4 * i.radial + 1) * p.sqrt_one_minus_qpow(4 * i.mt);
    re(-amp / (1.0 + p.qpow(-2)).sqrt())
}
// X⁻ = r e^{−iφ} √((1 − q²ξ²)/(1 + q²)) Λ_ξ, radicand at m_t − 1.
fn c_x_minus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    let amp = p.r0() * p.qpow(4 * i.radial + 3) * p.sqrt_one_minus_qpow(4 * i.mt - 4);
    re(amp / (1.0 + p.qpow(2)).sqrt())
}
fn c_t_plus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(-2 - 2 * i.mt) * p.sqrt_one_minus_qpow(4 * i.mt) / p.lambda())
}
fn c_t_minus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(sg(i) * p.qpow(4 - 2 * i.mt) * p.sqrt_one_minus_qpow(4 * i.mt - 4) / p.lambda())
}
// K⁺ = e^{iϑ}(q² − 1)⁻¹ √(1 − q²ξ̂²) e^{iφ}, ξ̂ at m + 1.
fn c_k_plus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    p.theta_phase() * (p.sqrt_one_minus_qpow(4 * (i.mt - i.m) - 4) / q2m1(p))
}
// K⁻ = −q² e^{−iϑ}(q² − 1)⁻¹ √(1 − q⁻²ξ̂²) e^{−iφ}, ξ̂ at m − 1.
fn c_k_minus(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    p.theta_phase().conj() * (-p.qpow(2) * p.sqrt_one_minus_qpow(4 * (i.mt - i.m)) / q2m1(p))
}
fn c_torb_plus_k(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    let amp = sg(i) * p.qpow(1 - 2 * i.mt) * p.sqrt_one_minus_qpow(4 * (i.mt - i.m) - 4);
    p.theta_phase() * (amp / q2m1(p))
}
// T⁻_orb carries e^{+iϑ} in its K-part as printed in the differential form.
fn c_torb_minus_k(i: &BasisIndex, p: &DeformationParams) -> Complex64 {
    let amp = sg(i) * p.qpow(3 - 2 * i.mt) * p.sqrt_one_minus_qpow(4 * (i.mt - i.m));
    p.theta_phase() * (amp / q2m1(p))
}
// Λ u_M = q² u_{M−1}.
fn c_lambda(_: &BasisIndex, p: &DeformationParams) -> Complex64 {
    re(p.qpow(2))
}

static ID: [ShiftTerm; 1] = [diag(c_id)];
static R: [ShiftTerm; 1] = [diag(c_r)];
static R2: [ShiftTerm; 1] = [diag(c_r2)];
static XI: [ShiftTerm; 1] = [diag(c_xi)];
static XI_INV: [ShiftTerm; 1] = [diag(c_xi_inv)];
static ABS_XI_INV: [ShiftTerm; 1] = [diag(c_abs_xi_inv)];
static X3_INV: [ShiftTerm; 1] = [diag(c_x3_inv)];
static XIHAT: [ShiftTerm; 1] = [diag(c_xihat)];
static X3: [ShiftTerm; 1] = [diag(c_x3)];
static X_PLUS: [ShiftTerm; 1] = [ShiftTerm { shift: RAISE, coeff: c_x_plus }];
static X_MINUS: [ShiftTerm; 1] = [ShiftTerm { shift: LOWER, coeff: c_x_minus }];
static T3: [ShiftTerm; 1] = [diag(c_t3)];
static T_PLUS: [ShiftTerm; 1] = [ShiftTerm { shift: RAISE, coeff: c_t_plus }];
static T_MINUS: [ShiftTerm; 1] = [ShiftTerm { shift: LOWER, coeff: c_t_minus }];
static TAU_T: [ShiftTerm; 1] = [diag(c_tau_t)];
static K3: [ShiftTerm; 1] = [diag(c_k3)];
static K_PLUS: [ShiftTerm; 1] = [ShiftTerm { shift: M_UP, coeff: c_k_plus }];
static K_MINUS: [ShiftTerm; 1] = [ShiftTerm { shift: M_DOWN, coeff: c_k_minus }];
static TAU_K: [ShiftTerm; 1] = [diag(c_tau_k)];
static TORB3: [ShiftTerm; 1] = [diag(c_torb3)];
static TORB_PLUS: [ShiftTerm; 2] = [
    ShiftTerm { shift: RAISE, coeff: c_t_plus },
    ShiftTerm { shift: M_UP, coeff: c_torb_plus_k },
];
static TORB_MINUS: [ShiftTerm; 2] = [
    ShiftTerm { shift: LOWER, coeff: c_t_minus },
    ShiftTerm { shift: M_DOWN, coeff: c_torb_minus_k },
];
static TAU_ORB: [ShiftTerm; 1] = [diag(c_tau_orb)];
static LAMBDA: [ShiftTerm; 1] = [ShiftTerm { shift: Shift::new(-1, 0, 0), coeff: c_lambda }];

fn terms(name: OpName) -> Option<&'static [ShiftTerm]> {
    Some(match name {
        OpName::Identity => &ID,
        OpName::R => &R,
        OpName::R2 => &R2,
        OpName::Xi => &XI,
        OpName::XiInv => &XI_INV,
        OpName::AbsXiInv => &ABS_XI_INV,
        OpName::X3Inv => &X3_INV,
        OpName::XiHat => &XIHAT,
        OpName::X3 => &X3,
        OpName::XPlus => &X_PLUS,
        OpName::XMinus => &X_MINUS,
        OpName::T3 => &T3,
        OpName::TPlus => &T_PLUS,
        OpName::TMinus => &T_MINUS,
        OpName::TauT => &TAU_T,
        OpName::K3 => &K3,
        OpName::KPlus => &K_PLUS,
        OpName::KMinus => &K_MINUS,
        OpName::TauK => &TAU_K,
        OpName::Torb3 => &TORB3,
        OpName::TorbPlus => &TORB_PLUS,
        OpName::TorbMinus => &TORB_MINUS,
        OpName::TauOrb => &TAU_ORB,
        OpName::Lambda => &LAMBDA,
        OpName::LambdaXi
        | OpName::LambdaXiInv
        | OpName::ZXi
        | OpName::PhasePlus
        | OpName::PhaseMinus => return None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Sign;

    fn p2() -> DeformationParams {
        DeformationParams::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for n in OpName::ALL {
            assert_eq!(n.as_str().parse::<OpName>().unwrap(), n);
        }
        assert_eq!("Kplus".parse::<OpName>().unwrap(), OpName::KPlus);
        assert_eq!("Kminus".parse::<OpName>().unwrap(), OpName::KMinus);
        assert_eq!("Torbplus".parse::<OpName>().unwrap(), OpName::TorbPlus);
        assert_eq!("X^+".parse::<OpName>().unwrap(), OpName::XPlus);
        assert_eq!("tau_k".parse::<OpName>().unwrap(), OpName::TauK);
        assert!("nonsense".parse::<OpName>().is_err());
    }

    #[test]
    fn x3_is_diagonal() {
        let idx = BasisIndex::new(0, Sign::Plus, 0, 0).unwrap();
        let out = operator_action(OpName::X3, &idx, &p2()).unwrap();
        assert_eq!(out, vec![(idx, re(2.0))]);
    }

    #[test]
    fn k_plus_example() {
        let idx = BasisIndex::new(0, Sign::Plus, 0, 0).unwrap();
        let out = operator_action(OpName::KPlus, &idx, &p2()).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, BasisIndex::unchecked(0, Sign::Plus, 0, 1));
        let expected = -(15f64).sqrt() / 12.0;
        assert!((out[0].1 - re(expected)).norm() < 1e-15);
        assert!((expected + 0.32275).abs() < 1e-5);
    }

    #[test]
    fn k_minus_kills_lowest_weight() {
        let p = DeformationParams::new(1.1, 1.0).unwrap();
        for sigma in Sign::BOTH {
            for mt in -5..=0 {
                let idx = BasisIndex::new(3, sigma, mt, mt).unwrap();
                assert!(operator_action(OpName::KMinus, &idx, &p).unwrap().is_empty());
            }
        }
        let idx = BasisIndex::new(0, Sign::Plus, 0, 1).unwrap();
        assert_eq!(operator_action(OpName::KMinus, &idx, &p).unwrap().len(), 1);
    }

    #[test]
    fn raising_ops_vanish_at_top_of_xi_lattice() {
        let p = p2();
        for op in [OpName::XPlus, OpName::TPlus] {
            let idx = BasisIndex::new(0, Sign::Minus, 0, 2).unwrap();
            assert!(operator_action(op, &idx, &p).unwrap().is_empty(), "{op}");
        }
        // Torb+ keeps only its K-part at m_t = 0.
        let idx = BasisIndex::new(0, Sign::Plus, 0, 0).unwrap();
        let out = operator_action(OpName::TorbPlus, &idx, &p).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, BasisIndex::unchecked(0, Sign::Plus, 0, 1));
    }

    #[test]
    fn smooth_only_names_rejected() {
        let idx = BasisIndex::new(0, Sign::Plus, 0, 0).unwrap();
        for op in [OpName::LambdaXi, OpName::ZXi, OpName::PhasePlus] {
            assert!(matches!(operator_action(op, &idx, &p2()), Err(Error::NotOnLattice(_))));
        }
    }
}
