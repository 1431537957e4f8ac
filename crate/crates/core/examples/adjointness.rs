//! Conjugation properties under the Jackson inner product, checked both on
//! materialized matrices and directly through inner products of states.

use num_complex::Complex64;
use qeuclid::lattice::{apply, inner_product, OpName};
use qeuclid::verify::suites::adjointness;
use qeuclid::verify::VerifyConfig;
use qeuclid::{BasisIndex, DeformationParams, LatticeState, Sign, TruncationWindow};

fn main() -> qeuclid::Result<()> {
    let p = DeformationParams::new(1.5, 1.0)?;
    let cfg = VerifyConfig::new(TruncationWindow::new(-1, 1, -5, 5)?, p, 1e-12);
    for c in &adjointness(&cfg)?.checks {
        println!("{:<34} {:.2e}  {}", c.id, c.residual, c.outcome());
    }

    // <a, X+ b> = <(X+)* a, b> = -q <X- a, b>
    let a = LatticeState::from_entries([
        (BasisIndex::new(0, Sign::Plus, -1, 0)?, Complex64::new(1.0, 0.5)),
        (BasisIndex::new(1, Sign::Plus, -2, 1)?, Complex64::new(-0.3, 0.0)),
    ])?;
    let b = LatticeState::from_entries([
        (BasisIndex::new(0, Sign::Plus, -2, -1)?, Complex64::new(0.7, -0.2)),
        (BasisIndex::new(1, Sign::Plus, -3, 0)?, Complex64::new(0.4, 0.4)),
    ])?;
    let lhs = inner_product(&a, &apply(OpName::XPlus, &b, &p)?, &p);
    let rhs = inner_product(&apply(OpName::XMinus, &a, &p)?, &b, &p) * (-p.q());
    println!("\n<a, X+ b> = {lhs:.6}\n-q<X- a, b> = {rhs:.6}");
    Ok(())
}
