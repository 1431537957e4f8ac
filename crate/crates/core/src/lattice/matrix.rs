//! Operators materialized on a truncation window.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::basis::{build_window, jackson_weight, BasisIndex, TruncationWindow};
use crate::error::{Error, Result};
use crate::lattice::catalogue::{LatticeOperator, OpName};
use crate::params::DeformationParams;

/// Sparse column-major matrix of an operator on a window, in canonical order.
///
/// `boundary_cols` holds the columns whose image leaves the window with a
/// nonzero coefficient; `boundary_rows` the rows that receive amplitude from
/// outside the window. Entries touching either set are not those of the
/// infinite-lattice operator product and are excluded from interior checks.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub window: TruncationWindow,
    pub basis: Vec<BasisIndex>,
    /// `columns[i]` lists `(row, value)` sorted by row.
    pub columns: Vec<Vec<(usize, Complex64)>>,
    pub boundary_cols: BTreeSet<usize>,
    pub boundary_rows: BTreeSet<usize>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn identity(w: &TruncationWindow, cap: usize) -> Result<Self> {
        let basis = build_window(w, cap)?;
        let columns = (0..basis.len()).map(|i| vec![(i, Complex64::new(1.0, 0.0))]).collect();
        Ok(Self {
            window: *w,
            basis,
            columns,
            boundary_cols: BTreeSet::new(),
            boundary_rows: BTreeSet::new(),
        })
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        let c = &self.columns[col];
        match c.binary_search_by_key(&row, |e| e.0) {
            Ok(k) => c[k].1,
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(col, c)| c.iter().map(move |&(row, v)| (row, col, v)))
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut d = DMatrix::zeros(n, n);
        for (row, col, v) in self.triplets() {
            d[(row, col)] = v;
        }
        d
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for col in &mut out.columns {
            for e in col.iter_mut() {
                e.1 *= c;
            }
            col.retain(|e| e.1 != Complex64::new(0.0, 0.0));
        }
        out
    }

    /// Whether an index position is free of boundary effects.
    pub fn is_interior(&self, pos: usize) -> bool {
        !self.boundary_cols.contains(&pos) && !self.boundary_rows.contains(&pos)
    }

    pub fn is_diagonal(&self) -> bool {
        self.triplets().all(|(r, c, _)| r == c)
    }
}

/// Materializes `name` on `w`: `A[j, i]` is the coefficient of window index
/// `j` in the image of window index `i`.
pub fn materialize(
    name: OpName,
    w: &TruncationWindow,
    p: &DeformationParams,
    cap: usize,
) -> Result<OperatorMatrix> {
    let op = LatticeOperator::new(name)?;
    let basis = build_window(w, cap)?;

    let per_col: Vec<(Vec<(usize, Complex64)>, bool)> = basis
        .par_iter()
        .map(|idx| {
            let mut col = Vec::new();
            let mut escapes = false;
            for (target, c) in op.action(idx, p) {
                match w.position(&target) {
                    Some(j) => col.push((j, c)),
                    None => escapes = true,
                }
            }
            col.sort_by_key(|e| e.0);
            (col, escapes)
        })
        .collect();

    let mut columns = Vec::with_capacity(basis.len());
    let mut boundary_cols = BTreeSet::new();
    for (i, (col, escapes)) in per_col.into_iter().enumerate() {
        if escapes {
            boundary_cols.insert(i);
        }
        columns.push(col);
    }

    let mut boundary_rows = BTreeSet::new();
    for (j, target) in basis.iter().enumerate() {
        for term in op.terms {
            let source = target.shifted(term.shift.inverse());
            if source.is_valid()
                && !w.contains(&source)
                && (term.coeff)(&source, p) != Complex64::new(0.0, 0.0)
            {
                boundary_rows.insert(j);
            }
        }
    }

    Ok(OperatorMatrix { window: *w, basis, columns, boundary_cols, boundary_rows })
}

/// Adjoint with respect to the Jackson product: `W⁻¹ Aᴴ W`.
pub fn adjoint_matrix(a: &OperatorMatrix, p: &DeformationParams) -> OperatorMatrix {
    let weights: Vec<f64> = a.basis.iter().map(|idx| jackson_weight(idx, p)).collect();
    let mut columns: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); a.dim()];
    for (row, col, v) in a.triplets() {
        // A[row, col] becomes B[col, row].
        columns[row].push((col, v.conj() * (weights[row] / weights[col])));
    }
    for c in &mut columns {
        c.sort_by_key(|e| e.0);
    }
    OperatorMatrix {
        window: a.window,
        basis: a.basis.clone(),
        columns,
        boundary_cols: a.boundary_rows.clone(),
        boundary_rows: a.boundary_cols.clone(),
    }
}

/// Eigenvalues of a diagonal catalogue operator over the window.
pub fn spectrum_diagonal(
    name: OpName,
    w: &TruncationWindow,
    p: &DeformationParams,
    cap: usize,
) -> Result<Vec<(BasisIndex, Complex64)>> {
    let op = LatticeOperator::new(name)?;
    if !op.is_diagonal() {
        return Err(Error::NotDiagonal(name.to_string()));
    }
    let coeff = op.terms[0].coeff;
    Ok(build_window(w, cap)?.into_iter().map(|idx| (idx, coeff(&idx, p))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{lattice_coordinates, Sign, DEFAULT_CAPACITY};

    fn p2() -> DeformationParams {
        DeformationParams::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn x3_diagonal_from_coordinates() {
        let p = DeformationParams::new(1.5, 0.7).unwrap();
        let w = TruncationWindow::new(-1, 1, -3, 2).unwrap();
        let a = materialize(OpName::X3, &w, &p, DEFAULT_CAPACITY).unwrap();
        assert!(a.is_diagonal());
        assert!(a.boundary_cols.is_empty() && a.boundary_rows.is_empty());
        for (i, idx) in a.basis.iter().enumerate() {
            let c = lattice_coordinates(idx, &p);
            let rel = (a.get(i, i).re - c.r * c.xi).abs() / (c.r * c.xi).abs();
            assert!(rel < 1e-14);
        }
    }

    #[test]
    fn k_plus_leaves_thin_window() {
        let w = TruncationWindow::new(0, 0, -2, 0).unwrap();
        let a = materialize(OpName::KPlus, &w, &p2(), DEFAULT_CAPACITY).unwrap();
        assert_eq!(a.nnz(), 0);
        assert_eq!(a.boundary_cols.len(), a.dim());
    }

    #[test]
    fn tau_orb_diagonal() {
        let p = p2();
        let w = TruncationWindow::new(0, 1, -2, 3).unwrap();
        let a = materialize(OpName::TauOrb, &w, &p, DEFAULT_CAPACITY).unwrap();
        assert!(a.is_diagonal());
        for (i, idx) in a.basis.iter().enumerate() {
            assert_eq!(a.get(i, i).re, 2f64.powi(-4 * idx.m as i32));
        }
    }

    #[test]
    fn adjoint_of_identity_and_x3() {
        let p = DeformationParams::new(1.3, 1.0).unwrap();
        let w = TruncationWindow::new(-1, 1, -2, 2).unwrap();
        let id = OperatorMatrix::identity(&w, DEFAULT_CAPACITY).unwrap();
        assert_eq!(adjoint_matrix(&id, &p), id);
        let x3 = materialize(OpName::X3, &w, &p, DEFAULT_CAPACITY).unwrap();
        assert_eq!(adjoint_matrix(&x3, &p), x3);
    }

    #[test]
    fn boundary_rows_track_incoming_amplitude() {
        let w = TruncationWindow::new(0, 0, -2, 2).unwrap();
        let x = materialize(OpName::XMinus, &w, &p2(), DEFAULT_CAPACITY).unwrap();
        // X⁻ lowers m_t; columns at m_t = −2 escape, rows at m_t = 0 are fed
        // from m_t = +1 only with zero coefficient, so no incoming rows.
        assert!(x.boundary_rows.is_empty());
        for &c in &x.boundary_cols {
            assert_eq!(x.basis[c].mt, -2);
        }
        let xp = materialize(OpName::XPlus, &w, &p2(), DEFAULT_CAPACITY).unwrap();
        assert!(xp.boundary_cols.is_empty());
        for &r in &xp.boundary_rows {
            assert_eq!(xp.basis[r].mt, -2);
        }
    }

    #[test]
    fn spectrum_requires_diagonal() {
        let w = TruncationWindow::new(0, 0, 0, 0).unwrap();
        assert!(matches!(
            spectrum_diagonal(OpName::KPlus, &w, &p2(), DEFAULT_CAPACITY),
            Err(Error::NotDiagonal(_))
        ));
        let s = spectrum_diagonal(OpName::X3, &w, &p2(), DEFAULT_CAPACITY).unwrap();
        assert_eq!(s[0].1.re, 2.0);
        assert_eq!(s[1].1.re, -2.0);
        assert_eq!(s[1].0.sigma, Sign::Minus);
    }

    #[test]
    fn k3_spectrum_lowest() {
        let w = TruncationWindow::new(0, 0, 0, 0).unwrap();
        let s = spectrum_diagonal(OpName::K3, &w, &p2(), DEFAULT_CAPACITY).unwrap();
        assert!((s[0].1.re - 5.0 / 6.0).abs() < 1e-15);
    }
}
