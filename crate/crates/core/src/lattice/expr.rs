//! Linear combinations of operator words, evaluated on sparse states.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::TruncationWindow;
use crate::error::Result;
use crate::lattice::catalogue::{LatticeOperator, OpName};
use crate::lattice::matrix::{materialize, OperatorMatrix};
use crate::lattice::state::LatticeState;
use crate::params::DeformationParams;

/// `coeff · word[0] word[1] … word[n−1]`; the rightmost factor acts first.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub word: Vec<OpName>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Expr {
    pub terms: Vec<Term>,
}

/// Result of evaluating an expression on one state.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: LatticeState,
    /// Sum over terms of the plain norm of each term's image.
    pub operand_norm: f64,
    /// Whether any intermediate image had nonzero amplitude outside the window.
    pub escaped: bool,
    /// Squared coefficient norm of the amplitude outside the window, summed
    /// over all intermediate images.
    pub leakage_sqr: f64,
}

impl Expr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(coeff: impl Into<Complex64>, word: &[OpName]) -> Self {
        Self { terms: vec![Term { coeff: coeff.into(), word: word.to_vec() }] }
    }

    pub fn op(name: OpName) -> Self {
        Self::word(1.0, &[name])
    }

    pub fn plus(mut self, coeff: impl Into<Complex64>, word: &[OpName]) -> Self {
        self.terms.push(Term { coeff: coeff.into(), word: word.to_vec() });
        self
    }

    pub fn scaled(mut self, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        for t in &mut self.terms {
            t.coeff *= c;
        }
        self
    }

    /// `[a, b] = ab − ba`.
    pub fn commutator(a: OpName, b: OpName) -> Self {
        Self::word(1.0, &[a, b]).plus(-1.0, &[b, a])
    }

    pub fn operators(&self) -> impl Iterator<Item = OpName> + '_ {
        self.terms.iter().flat_map(|t| t.word.iter().copied())
    }

    /// Evaluates on the infinite lattice, tracking amplitude that leaves `w`.
    pub fn evaluate(
        &self,
        s: &LatticeState,
        w: &TruncationWindow,
        p: &DeformationParams,
    ) -> Result<Evaluation> {
        let mut value = LatticeState::zero();
        let mut operand_norm = 0.0;
        let mut escaped = false;
        let mut leakage_sqr = 0.0;
        for term in &self.terms {
            let mut cur = s.clone();
            for name in term.word.iter().rev() {
                cur = cur.apply_operator(&LatticeOperator::new(*name)?, p);
                let (_, leaked) = cur.restrict(w);
                if !cur.support_within(w) {
                    escaped = true;
                }
                leakage_sqr += leaked;
            }
            let img = cur.scaled(term.coeff);
            operand_norm += img.coefficient_norm_sqr().sqrt();
            value.axpy(1.0.into(), &img);
        }
        Ok(Evaluation { value, operand_norm, escaped, leakage_sqr })
    }

    /// Dense truncated matrix of the expression, built by matrix products.
    pub fn dense(
        &self,
        w: &TruncationWindow,
        p: &DeformationParams,
        cap: usize,
    ) -> Result<DMatrix<Complex64>> {
        let n = OperatorMatrix::identity(w, cap)?.dim();
        let mut cache: BTreeMap<OpName, SplitMatrix> = BTreeMap::new();
        let mut acc = SplitMatrix::zeros(n);
        for term in &self.terms {
            let mut m = SplitMatrix::identity(n);
            for name in &term.word {
                if !cache.contains_key(name) {
                    cache.insert(*name, SplitMatrix::from_operator(&materialize(*name, w, p, cap)?));
                }
                m = m.mul(&cache[name]);
            }
            acc.add_scaled(&m, term.coeff);
        }
        Ok(acc.into_complex())
    }
}

/// Complex matrix stored as real and imaginary parts, so products run on the
/// fast real kernel. A missing imaginary part is zero.
struct SplitMatrix {
    re: DMatrix<f64>,
    im: Option<DMatrix<f64>>,
}

impl SplitMatrix {
    fn zeros(n: usize) -> Self {
        Self { re: DMatrix::zeros(n, n), im: None }
    }

    fn identity(n: usize) -> Self {
        Self { re: DMatrix::identity(n, n), im: None }
    }

    fn from_operator(a: &OperatorMatrix) -> Self {
        let n = a.dim();
        let mut re = DMatrix::zeros(n, n);
        let mut im: Option<DMatrix<f64>> = None;
        for (row, col, v) in a.triplets() {
            re[(row, col)] = v.re;
            if v.im != 0.0 {
                im.get_or_insert_with(|| DMatrix::zeros(n, n))[(row, col)] = v.im;
            }
        }
        Self { re, im }
    }

    fn mul(&self, b: &SplitMatrix) -> SplitMatrix {
        let mut re = &self.re * &b.re;
        let im = match (&self.im, &b.im) {
            (None, None) => None,
            (Some(ai), None) => Some(ai * &b.re),
            (None, Some(bi)) => Some(&self.re * bi),
            (Some(ai), Some(bi)) => {
                re -= ai * bi;
                Some(ai * &b.re + &self.re * bi)
            }
        };
        SplitMatrix { re, im }
    }

    fn add_scaled(&mut self, m: &SplitMatrix, c: Complex64) {
        let n = self.re.nrows();
        self.re += &m.re * c.re;
        if let Some(mi) = &m.im {
            self.re -= mi * c.im;
        }
        let mut im_part = m.im.as_ref().map(|mi| mi * c.re);
        if c.im != 0.0 {
            let extra = &m.re * c.im;
            im_part = Some(match im_part {
                Some(x) => x + extra,
                None => extra,
            });
        }
        if let Some(x) = im_part {
            *self.im.get_or_insert_with(|| DMatrix::zeros(n, n)) += x;
        }
    }

    fn into_complex(self) -> DMatrix<Complex64> {
        match self.im {
            None => self.re.map(|x| Complex64::new(x, 0.0)),
            Some(im) => self.re.zip_map(&im, Complex64::new),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if t.coeff.im == 0.0 {
                write!(f, "({})", t.coeff.re)?;
            } else {
                write!(f, "({})", t.coeff)?;
            }
            for n in &t.word {
                write!(f, " {n}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{BasisIndex, Sign, DEFAULT_CAPACITY};

    #[test]
    fn casimir_on_one_vector() {
        let p = DeformationParams::new(2.0, 1.0).unwrap();
        let q = p.q();
        let w = TruncationWindow::new(0, 0, -3, 3).unwrap();
        let casimir = Expr::word(1.0, &[OpName::X3, OpName::X3])
            .plus(-q, &[OpName::XPlus, OpName::XMinus])
            .plus(-1.0 / q, &[OpName::XMinus, OpName::XPlus]);
        let d = LatticeState::basis(BasisIndex::new(0, Sign::Plus, 0, 0).unwrap()).unwrap();
        let e = casimir.evaluate(&d, &w, &p).unwrap();
        assert_eq!(e.value.len(), 1);
        assert!((e.value.get(&BasisIndex::unchecked(0, Sign::Plus, 0, 0)).re - 16.0).abs() < 1e-12);
        assert!(!e.escaped);
    }

    #[test]
    fn dense_matches_sparse_on_interior() {
        let p = DeformationParams::new(1.5, 1.0).unwrap().with_theta_angle(0.7);
        let w = TruncationWindow::new(0, 0, -3, 3).unwrap();
        let e = Expr::word(2.0, &[OpName::KPlus, OpName::KMinus])
            .plus(-1.0, &[OpName::K3])
            .plus(Complex64::new(0.5, -0.25), &[OpName::KPlus, OpName::TorbMinus])
            .plus(Complex64::new(0.0, 1.0), &[OpName::XPlus]);
        let d = e.dense(&w, &p, DEFAULT_CAPACITY).unwrap();
        let basis = crate::basis::build_window(&w, DEFAULT_CAPACITY).unwrap();
        for (i, idx) in basis.iter().enumerate() {
            let ev = e.evaluate(&LatticeState::basis(*idx).unwrap(), &w, &p).unwrap();
            if ev.escaped {
                continue;
            }
            for (j, jdx) in basis.iter().enumerate() {
                assert!((d[(j, i)] - ev.value.get(jdx)).norm() < 1e-13);
            }
        }
    }
}
