//! Residuals of operator identities on the interior of a window.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{build_window, BasisIndex, Sign, TruncationWindow, DEFAULT_CAPACITY};
use crate::error::Result;
use crate::lattice::{adjoint_matrix, materialize, Expr, LatticeState, OpName};
use crate::params::DeformationParams;
use crate::verify::report::ResidualReport;

/// Windows up to this many states are also checked with dense products.
pub const DENSE_ORACLE_LIMIT: usize = 512;
/// Required agreement between the sparse and dense evaluation paths.
pub const DENSE_AGREEMENT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub window: TruncationWindow,
    pub params: DeformationParams,
    pub tolerance: f64,
    pub capacity: usize,
}

impl VerifyConfig {
    pub fn new(window: TruncationWindow, params: DeformationParams, tolerance: f64) -> Self {
        Self { window, params, tolerance, capacity: DEFAULT_CAPACITY }
    }

    pub fn with_params(self, params: DeformationParams) -> Self {
        Self { params, ..self }
    }

    pub fn with_window(self, window: TruncationWindow) -> Self {
        Self { window, ..self }
    }
}

/// `lhs = rhs` as operators on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub id: String,
    pub lhs: Expr,
    pub rhs: Expr,
    /// Restrict columns to one `σ` sector.
    pub sigma: Option<Sign>,
    pub asserted: bool,
    pub control: bool,
    /// Evaluate `rhs` with this `ϑ`-phase instead of the configured one.
    pub rhs_phase: Option<Complex64>,
    pub note: Option<String>,
}

impl Relation {
    pub fn new(id: &str, lhs: Expr, rhs: Expr) -> Self {
        Self {
            id: id.to_string(),
            lhs,
            rhs,
            sigma: None,
            asserted: true,
            control: false,
            rhs_phase: None,
            note: None,
        }
    }

    /// `lhs = 0`.
    pub fn vanishing(id: &str, lhs: Expr) -> Self {
        Self::new(id, lhs, Expr::zero())
    }

    pub fn sector(mut self, s: Sign) -> Self {
        self.sigma = Some(s);
        self
    }

    pub fn report_only(mut self) -> Self {
        self.asserted = false;
        self
    }

    pub fn control(mut self) -> Self {
        self.control = true;
        self
    }

    pub fn rhs_phase(mut self, phase: Complex64) -> Self {
        self.rhs_phase = Some(phase);
        self
    }

    pub fn note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }
}

struct Column {
    pos: usize,
    diff: LatticeState,
    scale: f64,
    escaped: bool,
    leakage_sqr: f64,
}

/// Frobenius norm of `lhs − rhs` over interior columns, divided by
/// `max(1, Frobenius norm of the per-column sums of term norms)`.
///
/// A column is interior when no intermediate image of any term leaves the
/// window; its image is then the exact infinite-lattice image, and every
/// row of it is compared.
pub fn check_relation(rel: &Relation, cfg: &VerifyConfig) -> Result<ResidualReport> {
    let w = &cfg.window;
    let p = &cfg.params;
    let p_rhs = match rel.rhs_phase {
        Some(ph) => p.with_theta_phase(ph)?,
        None => *p,
    };
    // Surface unknown or smooth-only names before any work.
    for name in rel.lhs.operators().chain(rel.rhs.operators()) {
        crate::lattice::LatticeOperator::new(name)?;
    }
    let basis = build_window(w, cfg.capacity)?;
    let selected: Vec<(usize, BasisIndex)> = basis
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, idx)| rel.sigma.map_or(true, |s| idx.sigma == s))
        .collect();

    let columns: Vec<Column> = selected
        .par_iter()
        .map(|&(pos, idx)| -> Result<Column> {
            let d = LatticeState::basis(idx)?;
            let l = rel.lhs.evaluate(&d, w, p)?;
            let r = rel.rhs.evaluate(&d, w, &p_rhs)?;
            let mut diff = l.value;
            diff.axpy(Complex64::new(-1.0, 0.0), &r.value);
            Ok(Column {
                pos,
                diff,
                scale: l.operand_norm + r.operand_norm,
                escaped: l.escaped || r.escaped,
                leakage_sqr: l.leakage_sqr + r.leakage_sqr,
            })
        })
        .collect::<Result<_>>()?;

    let mut rep = ResidualReport::new(&rel.id, w, p, cfg.tolerance);
    let (mut num, mut den, mut leak) = (0.0, 0.0, 0.0);
    let mut interior = Vec::new();
    for c in &columns {
        if c.escaped {
            leak += c.leakage_sqr;
            continue;
        }
        num += c.diff.coefficient_norm_sqr();
        den += c.scale * c.scale;
        interior.push(c);
    }
    rep.interior = interior.len();
    rep.excluded_rows = columns.len() - interior.len();
    rep.leakage = leak.sqrt();
    let scale = den.sqrt().max(1.0);

    if basis.len() <= DENSE_ORACLE_LIMIT && !interior.is_empty() {
        let mut dense = rel.lhs.dense(w, p, cfg.capacity)?;
        dense -= rel.rhs.dense(w, &p_rhs, cfg.capacity)?;
        let mut worst: f64 = 0.0;
        for c in &interior {
            for (row, idx) in basis.iter().enumerate() {
                let d = (dense[(row, c.pos)] - c.diff.get(idx)).norm() / c.scale.max(1.0);
                worst = worst.max(d);
            }
        }
        rep.dense_agreement = Some(worst);
    }

    let mut rep = rep.finish(num.sqrt() / scale);
    if let Some(d) = rep.dense_agreement {
        rep.pass &= d <= DENSE_AGREEMENT_TOL;
    }
    if !rel.asserted {
        rep = rep.report_only();
    }
    if rel.control {
        rep = rep.as_control();
    }
    if let Some(n) = &rel.note {
        rep = rep.with_note(n.clone());
    }
    Ok(rep)
}

/// `A* = c·B` under the Jackson product, compared on entries whose row and
/// column are free of boundary effects in both materialized operators.
pub fn check_adjoint(
    id: &str,
    a: OpName,
    c: Complex64,
    b: OpName,
    cfg: &VerifyConfig,
) -> Result<ResidualReport> {
    let w = &cfg.window;
    let p = &cfg.params;
    let ma = materialize(a, w, p, cfg.capacity)?;
    let adj = adjoint_matrix(&ma, p);
    let mb = materialize(b, w, p, cfg.capacity)?.scaled(c);
    let interior: Vec<bool> = (0..ma.dim()).map(|k| ma.is_interior(k) && mb.is_interior(k)).collect();

    let (mut num, mut na, mut nb) = (0.0, 0.0, 0.0);
    for col in (0..ma.dim()).filter(|&k| interior[k]) {
        let mut entries: BTreeMap<usize, (Complex64, Complex64)> = BTreeMap::new();
        for &(row, v) in &adj.columns[col] {
            entries.entry(row).or_default().0 = v;
        }
        for &(row, v) in &mb.columns[col] {
            entries.entry(row).or_default().1 = v;
        }
        for (row, (x, y)) in entries {
            if interior[row] {
                num += (x - y).norm_sqr();
                na += x.norm_sqr();
                nb += y.norm_sqr();
            }
        }
    }
    let mut rep = ResidualReport::new(id, w, p, cfg.tolerance);
    rep.interior = interior.iter().filter(|&&x| x).count();
    rep.excluded_rows = ma.dim() - rep.interior;
    Ok(rep.finish(num.sqrt() / na.sqrt().max(nb.sqrt()).max(1.0)))
}

/// The expression acts diagonally with eigenvalue `expected(idx)` on every
/// interior column; the residual is relative to the expected values.
pub fn check_diagonal_form(
    id: &str,
    expr: &Expr,
    expected: impl Fn(&BasisIndex) -> f64 + Sync,
    cfg: &VerifyConfig,
) -> Result<ResidualReport> {
    let w = &cfg.window;
    let p = &cfg.params;
    let basis = build_window(w, cfg.capacity)?;
    let cols: Vec<Option<(f64, f64)>> = basis
        .par_iter()
        .map(|idx| -> Result<Option<(f64, f64)>> {
            let e = expr.evaluate(&LatticeState::basis(*idx)?, w, p)?;
            if e.escaped {
                return Ok(None);
            }
            let want = expected(idx);
            let mut diff = e.value;
            diff.axpy(Complex64::new(-want, 0.0), &LatticeState::basis(*idx)?);
            Ok(Some((diff.coefficient_norm_sqr(), want * want)))
        })
        .collect::<Result<_>>()?;
    let (num, den) = cols.iter().flatten().fold((0.0, 0.0), |acc, c| (acc.0 + c.0, acc.1 + c.1));
    let mut rep = ResidualReport::new(id, w, p, cfg.tolerance);
    rep.interior = cols.iter().flatten().count();
    rep.excluded_rows = basis.len() - rep.interior;
    Ok(rep.finish(num.sqrt() / den.sqrt().max(f64::MIN_POSITIVE)))
}
