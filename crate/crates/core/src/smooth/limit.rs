//! `q = e^h → 1` convergence of deformed operators to their classical limits.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::OpName;
use crate::params::DeformationParams;
use crate::smooth::classical::{classical_apply, ClassicalOp};
use crate::smooth::function::SmoothFunction;
use crate::smooth::rules::smooth_apply;

/// Sample points for the sup-norm: every `(r, ξ)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleGrid {
    pub r: Vec<f64>,
    pub xi: Vec<f64>,
}

impl SampleGrid {
    /// `n` equally spaced `ξ` in `[lo, hi]`.
    pub fn new(r: Vec<f64>, lo: f64, hi: f64, n: usize) -> Self {
        let xi = match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
        };
        Self { r, xi }
    }
}

impl Default for SampleGrid {
    /// `ξ ∈ [0.1, 0.9]` (33 points), `r ∈ {0.5, 1, 1.5}`.
    fn default() -> Self {
        Self::new(vec![0.5, 1.0, 1.5], 0.1, 0.9, 33)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub max_abs_error: f64,
    /// Grid samples compared; the same for every row.
    pub points_used: usize,
    /// Grid samples outside the deformed operator's domain at this `h`.
    pub points_excluded: usize,
    /// Log-log slope fitted over this row and all previous rows.
    pub slope_so_far: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub deformed: OpName,
    pub classical: ClassicalOp,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln error` against `ln h`; `None` when every
    /// error is exactly zero or fewer than two rows are nonzero.
    pub slope: Option<f64>,
    /// Errors strictly decrease as `h` decreases (or are all exactly zero).
    pub monotone: bool,
}

impl ConvergenceReport {
    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.max_abs_error == 0.0)
    }

    /// Error grows as `h` shrinks: the limit does not exist.
    pub fn diverges(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].max_abs_error > w[0].max_abs_error)
            && self.rows.len() >= 2
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "h,error,slope")?;
        for row in &self.rows {
            let slope = row.slope_so_far.map(|s| s.to_string()).unwrap_or_default();
            writeln!(out, "{},{},{}", row.h, row.max_abs_error, slope)?;
        }
        Ok(())
    }
}

/// Least-squares slope of `ln y` over `ln x`, skipping nonpositive `y`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|(_, y)| *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// For each `h`, sets `q = e^h` and measures `max |D_q f − D_cl f|` over
/// the grid.
///
/// `base` supplies `r0` and the `ϑ`-phase; its `q` is ignored. Square-root
/// factors and argument scalings of the deformed operator can exclude grid
/// points at larger `h`. Errors are compared on the points admissible for
/// every `h` in the sequence, so that each row measures the same set; a mode
/// left with no admissible point is a domain error.
pub fn limit_convergence(
    deformed: OpName,
    classical: ClassicalOp,
    f: &SmoothFunction,
    h_sequence: &[f64],
    grid: &SampleGrid,
    base: &DeformationParams,
) -> Result<ConvergenceReport> {
    let target = classical_apply(classical, f)?;
    let images = h_sequence
        .iter()
        .map(|&h| {
            let p = DeformationParams::from_h(h, base.r0())?.with_theta_phase(base.theta_phase())?;
            smooth_apply(deformed, f, &p)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut modes = target.mode_indices();
    for g in &images {
        modes.extend(g.mode_indices());
    }
    modes.sort_unstable();
    modes.dedup();

    let violation = |g: &SmoothFunction, m: i64, x: f64| {
        g.mode(m).and_then(|c| c.domain.violation(x)).map(|b| b.factor.clone())
    };

    // (mode, ξ) pairs used by every row, and per-row counts of excluded samples.
    let mut admissible = Vec::new();
    let mut excluded = vec![0usize; images.len()];
    for &m in &modes {
        let mut first_violation = None;
        let before = admissible.len();
        for &x in &grid.xi {
            let mut ok = true;
            if let Some(factor) = violation(&target, m, x) {
                first_violation.get_or_insert(factor);
                ok = false;
            }
            for (k, g) in images.iter().enumerate() {
                if let Some(factor) = violation(g, m, x) {
                    excluded[k] += grid.r.len();
                    first_violation.get_or_insert(factor);
                    ok = false;
                }
            }
            if ok {
                admissible.push((m, x));
            }
        }
        if admissible.len() == before && !grid.xi.is_empty() && !grid.r.is_empty() {
            return Err(Error::Domain {
                factor: first_violation.unwrap_or_default(),
                detail: format!("no grid point inside the domain of mode {m} for every h"),
            });
        }
    }
    let used = admissible.len() * grid.r.len();

    let mut rows = Vec::with_capacity(images.len());
    let mut fitted = Vec::new();
    for ((&h, g), excluded) in h_sequence.iter().zip(&images).zip(excluded) {
        let mut err: f64 = 0.0;
        for &(m, x) in &admissible {
            for &r in &grid.r {
                let d = g.value(m, r, x)? - target.value(m, r, x)?;
                err = err.max(d.norm());
            }
        }
        fitted.push((h, err));
        rows.push(ConvergenceRow {
            h,
            max_abs_error: err,
            points_used: used,
            points_excluded: excluded,
            slope_so_far: loglog_slope(&fitted),
        });
    }

    let slope = loglog_slope(&fitted);
    let monotone = rows.iter().all(|r| r.max_abs_error == 0.0)
        || rows.windows(2).all(|w| w[1].max_abs_error < w[0].max_abs_error);
    Ok(ConvergenceReport { deformed, classical, rows, slope, monotone })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::function::{polynomial_gaussian, standard_test_function, ModeFn};

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [0.1, 0.05, 0.025].iter().map(|&h| (h, 3.0 * h * h)).collect();
        assert!((loglog_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(loglog_slope(&[(0.1, 0.0), (0.05, 0.0)]), None);
    }

    #[test]
    fn torb3_converges_linearly() {
        let f = SmoothFunction::single(1, ModeFn::constant(1.0));
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        let rep = limit_convergence(
            OpName::Torb3,
            ClassicalOp::L3,
            &f,
            &[0.1, 0.05, 0.025],
            &SampleGrid::default(),
            &p,
        )
        .unwrap();
        assert!(rep.monotone);
        let s = rep.slope.unwrap();
        assert!((s - 1.0).abs() < 0.1, "slope {s}");
    }

    #[test]
    fn x3_is_exact() {
        let f = standard_test_function(2);
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        let rep = limit_convergence(OpName::X3, ClassicalOp::X3, &f, &[0.1], &SampleGrid::default(), &p)
            .unwrap();
        assert!(rep.all_exact());
        assert_eq!(rep.slope, None);
    }

    #[test]
    fn wrong_phase_diverges() {
        let f = SmoothFunction::single(0, polynomial_gaussian(&[1.0, 0.5]));
        let p = DeformationParams::with_phase(2.0, 1.0, 1.0.into()).unwrap();
        let rep = limit_convergence(
            OpName::TorbPlus,
            ClassicalOp::LPlus,
            &f,
            &[0.1, 0.05],
            &SampleGrid::default(),
            &p,
        )
        .unwrap();
        assert!(rep.diverges());
    }

    #[test]
    fn csv_rows() {
        let f = SmoothFunction::single(1, ModeFn::constant(1.0));
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        let rep = limit_convergence(OpName::Torb3, ClassicalOp::L3, &f, &[0.1, 0.05], &SampleGrid::default(), &p)
            .unwrap();
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "h,error,slope");
        assert!(lines[1].ends_with(','));
        assert_eq!(lines.len(), 3);
    }
}
