use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::basis::{jackson_weight, BasisIndex, TruncationWindow};
use crate::error::{Error, Result};
use crate::lattice::catalogue::{LatticeOperator, OpName};
use crate::params::DeformationParams;

/// Sparse state over the lattice eigenbasis.
///
/// Entries are kept in canonical basis order; exact zeros are never stored.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LatticeState {
    amps: BTreeMap<BasisIndex, Complex64>,
}

impl LatticeState {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Basis vector `δ_idx`.
    pub fn basis(idx: BasisIndex) -> Result<Self> {
        let mut s = Self::zero();
        s.add(idx, Complex64::new(1.0, 0.0))?;
        Ok(s)
    }

    pub fn from_entries<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BasisIndex, Complex64)>,
    {
        let mut s = Self::zero();
        for (idx, a) in entries {
            s.add(idx, a)?;
        }
        Ok(s)
    }

    /// Adds `a` to the amplitude at `idx`.
    pub fn add(&mut self, idx: BasisIndex, a: Complex64) -> Result<()> {
        if !idx.is_valid() {
            return Err(Error::InvalidIndex(format!("{idx}: need mt <= 0 and m >= mt")));
        }
        self.accumulate(idx, a);
        Ok(())
    }

    fn accumulate(&mut self, idx: BasisIndex, a: Complex64) {
        if a == Complex64::new(0.0, 0.0) {
            return;
        }
        let slot = self.amps.entry(idx).or_default();
        *slot += a;
        if *slot == Complex64::new(0.0, 0.0) {
            self.amps.remove(&idx);
        }
    }

    pub fn get(&self, idx: &BasisIndex) -> Complex64 {
        self.amps.get(idx).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisIndex, &Complex64)> {
        self.amps.iter()
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Drops amplitudes with `|a| ≤ floor`.
    pub fn prune(&mut self, floor: f64) {
        self.amps.retain(|_, a| a.norm() > floor);
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = Self::zero();
        for (idx, a) in &self.amps {
            out.accumulate(*idx, a * c);
        }
        out
    }

    pub fn axpy(&mut self, c: Complex64, other: &LatticeState) {
        for (idx, a) in &other.amps {
            self.accumulate(*idx, c * a);
        }
    }

    /// Plain (unweighted) squared coefficient norm.
    pub fn coefficient_norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Splits off the part outside `w`; returns the kept state and the squared
    /// coefficient norm of what was dropped.
    pub fn restrict(&self, w: &TruncationWindow) -> (Self, f64) {
        let mut kept = Self::zero();
        let mut leaked = 0.0;
        for (idx, a) in &self.amps {
            if w.contains(idx) {
                kept.amps.insert(*idx, *a);
            } else {
                leaked += a.norm_sqr();
            }
        }
        (kept, leaked)
    }

    pub fn support_within(&self, w: &TruncationWindow) -> bool {
        self.amps.keys().all(|idx| w.contains(idx))
    }

    pub(crate) fn apply_operator(&self, op: &LatticeOperator, p: &DeformationParams) -> Self {
        let mut out = Self::zero();
        for (idx, a) in &self.amps {
            for (target, c) in op.action(idx, p) {
                out.accumulate(target, a * c);
            }
        }
        out
    }
}

/// Linear extension of [`operator_action`](crate::lattice::operator_action).
pub fn apply(name: OpName, s: &LatticeState, p: &DeformationParams) -> Result<LatticeState> {
    Ok(s.apply_operator(&LatticeOperator::new(name)?, p))
}

/// Applies `name` and truncates to `w`, returning the squared norm of the
/// amplitude that left the window.
pub fn apply_in_window(
    name: OpName,
    s: &LatticeState,
    w: &TruncationWindow,
    p: &DeformationParams,
) -> Result<(LatticeState, f64)> {
    Ok(apply(name, s, p)?.restrict(w))
}

/// Jackson inner product `Σ q^{4M} q^{2m_t} conj(a) b`, conjugate-linear in `a`.
pub fn inner_product(a: &LatticeState, b: &LatticeState, p: &DeformationParams) -> Complex64 {
    let (small, large, flip) = if a.len() <= b.len() { (a, b, false) } else { (b, a, true) };
    let mut acc = Complex64::new(0.0, 0.0);
    for (idx, x) in small.iter() {
        if let Some(y) = large.amps.get(idx) {
            let (ca, cb) = if flip { (y, x) } else { (x, y) };
            acc += ca.conj() * cb * jackson_weight(idx, p);
        }
    }
    acc
}
