//! Lattice labels `(M, σ, m_t, m)`, truncation windows, Jackson weights and the
//! closed-form spectra the operator catalogue is checked against.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DeformationParams;

/// Default cap on the number of states a window may hold.
pub const DEFAULT_CAPACITY: usize = 1 << 18;

/// Sign sector of the `ξ` lattice.
///
/// Ordered with `+1` before `−1`; this is the canonical basis order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        self.value() as f64
    }

    pub fn from_value(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Label of the eigenbasis vector `u_M χ_{σ,m_t} e^{imφ}`.
///
/// Field order gives the canonical ordering `(σ, M, m_t, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex {
    pub sigma: Sign,
    /// Radial lattice level `M`.
    pub radial: i64,
    pub mt: i64,
    pub m: i64,
}

/// Index displacement `(ΔM, Δm_t, Δm)`; operators never change `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shift {
    pub radial: i64,
    pub mt: i64,
    pub m: i64,
}

impl Shift {
    pub const ZERO: Shift = Shift::new(0, 0, 0);

    pub const fn new(radial: i64, mt: i64, m: i64) -> Self {
        Self { radial, mt, m }
    }

    pub fn is_zero(&self) -> bool {
        *self == Shift::ZERO
    }

    pub fn inverse(&self) -> Shift {
        Shift::new(-self.radial, -self.mt, -self.m)
    }
}

impl BasisIndex {
    pub fn new(radial: i64, sigma: Sign, mt: i64, m: i64) -> Result<Self> {
        let idx = Self::unchecked(radial, sigma, mt, m);
        if idx.is_valid() {
            Ok(idx)
        } else {
            Err(Error::InvalidIndex(format!(
                "{idx}: need mt <= 0 and m >= mt"
            )))
        }
    }

    /// Builds a label without checking `m_t ≤ 0`, `m ≥ m_t`.
    pub const fn unchecked(radial: i64, sigma: Sign, mt: i64, m: i64) -> Self {
        Self { sigma, radial, mt, m }
    }

    pub fn is_valid(&self) -> bool {
        self.mt <= 0 && self.m >= self.mt
    }

    /// `m_k = m − m_t`, the `K³` weight.
    pub fn mk(&self) -> i64 {
        self.m - self.mt
    }

    pub fn shifted(&self, s: Shift) -> BasisIndex {
        Self::unchecked(self.radial + s.radial, self.sigma, self.mt + s.mt, self.m + s.m)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.radial, self.sigma, self.mt, self.m)
    }
}

/// Finite box of lattice labels: `M ∈ [radial_min, radial_max]`,
/// `m_t ∈ [mt_min, 0]`, `m ∈ [m_t, m_t + k_max]`, both sign sectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncationWindow {
    pub radial_min: i64,
    pub radial_max: i64,
    pub mt_min: i64,
    pub k_max: i64,
}

impl TruncationWindow {
    pub fn new(radial_min: i64, radial_max: i64, mt_min: i64, k_max: i64) -> Result<Self> {
        if radial_min > radial_max {
            return Err(Error::InvalidWindow(format!(
                "radial range {radial_min}..{radial_max} is empty"
            )));
        }
        if mt_min > 0 {
            return Err(Error::InvalidWindow(format!("mt_min must be <= 0 (got {mt_min})")));
        }
        if k_max < 0 {
            return Err(Error::InvalidWindow(format!("k_max must be >= 0 (got {k_max})")));
        }
        Ok(Self { radial_min, radial_max, mt_min, k_max })
    }

    fn radial_count(&self) -> usize {
        (self.radial_max - self.radial_min + 1) as usize
    }

    fn mt_count(&self) -> usize {
        (1 - self.mt_min) as usize
    }

    fn k_count(&self) -> usize {
        (self.k_max + 1) as usize
    }

    pub fn size(&self) -> usize {
        2 * self.radial_count() * self.mt_count() * self.k_count()
    }

    pub fn contains(&self, idx: &BasisIndex) -> bool {
        let mk = idx.mk();
        (self.radial_min..=self.radial_max).contains(&idx.radial)
            && (self.mt_min..=0).contains(&idx.mt)
            && (0..=self.k_max).contains(&mk)
    }

    /// Position of `idx` in the canonical order, if it lies in the window.
    pub fn position(&self, idx: &BasisIndex) -> Option<usize> {
        if !self.contains(idx) {
            return None;
        }
        let s = match idx.sigma {
            Sign::Plus => 0,
            Sign::Minus => 1,
        };
        let r = (idx.radial - self.radial_min) as usize;
        let t = (idx.mt - self.mt_min) as usize;
        let k = idx.mk() as usize;
        Some(((s * self.radial_count() + r) * self.mt_count() + t) * self.k_count() + k)
    }

    pub fn check_capacity(&self, cap: usize) -> Result<()> {
        let size = self.size();
        if size > cap {
            Err(Error::Capacity { size, cap })
        } else {
            Ok(())
        }
    }
}

impl fmt::Display for TruncationWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{},{}", self.radial_min, self.radial_max, self.mt_min, self.k_max)
    }
}

/// Parses `Mmin:Mmax,mtmin,kmax`.
impl FromStr for TruncationWindow {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidWindow(format!("expected `Mmin:Mmax,mtmin,kmax`, got `{s}`"));
        let mut parts = s.trim().split(',');
        let radial = parts.next().ok_or_else(bad)?;
        let mt_min = parts.next().ok_or_else(bad)?;
        let k_max = parts.next().ok_or_else(bad)?;
        if parts.next().is_some() {
            return Err(bad());
        }
        let (lo, hi) = radial.split_once(':').ok_or_else(bad)?;
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        Self::new(int(lo)?, int(hi)?, int(mt_min)?, int(k_max)?)
    }
}

/// Enumerates the window in canonical order `(σ, M, m_t, m)`.
pub fn build_window(w: &TruncationWindow, cap: usize) -> Result<Vec<BasisIndex>> {
    w.check_capacity(cap)?;
    let mut out = Vec::with_capacity(w.size());
    for sigma in Sign::BOTH {
        for radial in w.radial_min..=w.radial_max {
            for mt in w.mt_min..=0 {
                for m in mt..=mt + w.k_max {
                    out.push(BasisIndex::unchecked(radial, sigma, mt, m));
                }
            }
        }
    }
    Ok(out)
}

/// Eigenvalues of `r`, `ξ` and `ξ̂` on one basis vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeCoordinates {
    pub r: f64,
    pub xi: f64,
    pub xihat: f64,
}

/// `r = r0 q^{4M+2}`, `ξ = σ q^{2m_t−1}`, `ξ̂ = σ q^{2(m_t−m)−1}`.
pub fn lattice_coordinates(idx: &BasisIndex, p: &DeformationParams) -> LatticeCoordinates {
    let s = idx.sigma.as_f64();
    LatticeCoordinates {
        r: p.r0() * p.qpow(4 * idx.radial + 2),
        xi: s * p.qpow(2 * idx.mt - 1),
        xihat: s * p.qpow(2 * (idx.mt - idx.m) - 1),
    }
}

/// Jackson weight `q^{4M} q^{2m_t}`; independent of `σ` and `m`.
pub fn jackson_weight(idx: &BasisIndex, p: &DeformationParams) -> f64 {
    p.qpow(4 * idx.radial + 2 * idx.mt)
}

/// `t³` eigenvalue `(1/λ)(1 + q^{2−4m_t})`.
pub fn t3_eigenvalue(mt: i64, p: &DeformationParams) -> f64 {
    (1.0 + p.qpow(2 - 4 * mt)) / p.lambda()
}

/// `τ_k` eigenvalue `−q^{−4m_k−2}`.
pub fn tauk_eigenvalue(mk: i64, p: &DeformationParams) -> f64 {
    -p.qpow(-4 * mk - 2)
}

/// `T³_orb` eigenvalue `(1/λ)(1 − q^{−4m})`.
pub fn torb3_eigenvalue(m: i64, p: &DeformationParams) -> f64 {
    (1.0 - p.qpow(-4 * m)) / p.lambda()
}

/// `K³ = (1/λ)(1 − τ_k)` eigenvalue.
pub fn k3_eigenvalue(mk: i64, p: &DeformationParams) -> f64 {
    (1.0 - tauk_eigenvalue(mk, p)) / p.lambda()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> DeformationParams {
        DeformationParams::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn coordinates_examples() {
        let p = p2();
        let c = lattice_coordinates(&BasisIndex::new(0, Sign::Plus, 0, 0).unwrap(), &p);
        assert_eq!((c.r, c.xi, c.xihat), (4.0, 0.5, 0.5));
        let c = lattice_coordinates(&BasisIndex::new(0, Sign::Minus, 0, 0).unwrap(), &p);
        assert_eq!((c.r, c.xi, c.xihat), (4.0, -0.5, -0.5));
        let c = lattice_coordinates(&BasisIndex::new(1, Sign::Plus, -1, 1).unwrap(), &p);
        assert_eq!((c.r, c.xi, c.xihat), (64.0, 0.125, 0.03125));
    }

    #[test]
    fn weight_examples() {
        let p = p2();
        let w = |r, s, mt, m| jackson_weight(&BasisIndex::new(r, s, mt, m).unwrap(), &p);
        assert_eq!(w(0, Sign::Plus, 0, 0), 1.0);
        assert_eq!(w(1, Sign::Plus, 0, 3), 16.0);
        assert_eq!(w(0, Sign::Minus, -1, -1), 0.25);
    }

    #[test]
    fn eigenvalue_examples() {
        let p = p2();
        assert!((t3_eigenvalue(0, &p) - 10.0 / 3.0).abs() < 1e-15);
        assert_eq!(tauk_eigenvalue(0, &p), -0.25);
        assert!((k3_eigenvalue(0, &p) - 5.0 / 6.0).abs() < 1e-15);
        for m in -3..=3 {
            let ph = DeformationParams::from_h(1e-6, 1.0).unwrap();
            assert!((torb3_eigenvalue(m, &ph) - 2.0 * m as f64).abs() < 1e-4);
        }
    }

    #[test]
    fn t3_agrees_with_xi_coordinate() {
        for q in [1.1, 1.5, 2.0, 3.0] {
            let p = DeformationParams::new(q, 1.0).unwrap();
            for mt in -8..=0 {
                let idx = BasisIndex::new(0, Sign::Minus, mt, mt).unwrap();
                let xi = lattice_coordinates(&idx, &p).xi;
                let direct = (1.0 + xi.powi(-2)) / p.lambda();
                let rel = (direct - t3_eigenvalue(mt, &p)).abs() / direct;
                assert!(rel < 1e-13, "q={q} mt={mt} rel={rel}");
            }
        }
    }

    #[test]
    fn invalid_indices_rejected() {
        assert!(BasisIndex::new(0, Sign::Plus, 1, 1).is_err());
        assert!(BasisIndex::new(0, Sign::Plus, -2, -3).is_err());
    }

    #[test]
    fn window_examples() {
        let w = TruncationWindow::new(0, 0, 0, 0).unwrap();
        let idx = build_window(&w, DEFAULT_CAPACITY).unwrap();
        assert_eq!(
            idx,
            vec![
                BasisIndex::unchecked(0, Sign::Plus, 0, 0),
                BasisIndex::unchecked(0, Sign::Minus, 0, 0)
            ]
        );
        let w = TruncationWindow::new(0, 0, -1, 1).unwrap();
        assert_eq!(build_window(&w, DEFAULT_CAPACITY).unwrap().len(), 8);
        let w = TruncationWindow::new(-1, 1, -2, 2).unwrap();
        let all = build_window(&w, DEFAULT_CAPACITY).unwrap();
        assert_eq!(all.len(), 54);
        assert_eq!(w.size(), 54);
        for (i, idx) in all.iter().enumerate() {
            assert!(idx.is_valid());
            assert_eq!(w.position(idx), Some(i));
        }
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn window_capacity_and_parse() {
        let w: TruncationWindow = "-1:1,-8,8".parse().unwrap();
        assert_eq!(w, TruncationWindow::new(-1, 1, -8, 8).unwrap());
        assert_eq!(w.to_string(), "-1:1,-8,8");
        assert!(matches!(build_window(&w, 10), Err(Error::Capacity { size: 486, cap: 10 })));
        assert!("0:0,1,0".parse::<TruncationWindow>().is_err());
        assert!("1:0,0,0".parse::<TruncationWindow>().is_err());
        assert!("0:0,0".parse::<TruncationWindow>().is_err());
    }
}
