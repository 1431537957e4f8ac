//! The K-operators on the angular lattice: relations, the lowest-weight
//! condition, and K+K- against the recursion solution J.

use qeuclid::lattice::{apply, OpName};
use qeuclid::verify::suites::{j_solution, k_relations, lowest_weight};
use qeuclid::verify::VerifyConfig;
use qeuclid::{BasisIndex, DeformationParams, LatticeState, Sign, TruncationWindow};

fn main() -> qeuclid::Result<()> {
    let p = DeformationParams::new(2.0, 1.0)?;
    let cfg = VerifyConfig::new(TruncationWindow::new(0, 0, -6, 6)?, p, 1e-12);

    for c in k_relations(&cfg)?.checks.iter().chain(&lowest_weight(&cfg)?.checks) {
        println!("{:<58} {:.2e}  {}", c.id, c.residual, c.outcome());
    }

    println!("\nK+ K- on u_0 chi(+,0) e^(im phi):");
    for m in 0..4 {
        let d = LatticeState::basis(BasisIndex::new(0, Sign::Plus, 0, m)?)?;
        let kk = apply(OpName::KPlus, &apply(OpName::KMinus, &d, &p)?, &p)?;
        let xihat = p.qpow(-2 * m - 1);
        let got = kk.iter().next().map_or(0.0, |(_, a)| a.re);
        println!("  m = {m}: {got:>10.6}   J(xihat) = {:>10.6}", j_solution(xihat, 0.0, &p));
    }
    Ok(())
}
