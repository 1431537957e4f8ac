//! Residuals of the coordinate algebra and the Casimir on a window, with
//! the boundary columns that had to be excluded.

use qeuclid::verify::suites::{casimir, x_relations};
use qeuclid::verify::{check_relation, Relation, VerifyConfig};
use qeuclid::lattice::{Expr, OpName::*};
use qeuclid::{DeformationParams, TruncationWindow};

fn main() -> qeuclid::Result<()> {
    let w = TruncationWindow::new(-1, 1, -6, 6)?;
    for q in [1.1, 2.0, 3.0] {
        let cfg = VerifyConfig::new(w, DeformationParams::new(q, 1.0)?, 1e-12);
        println!("q = {q}");
        for report in [x_relations(&cfg)?, casimir(&cfg)?] {
            for c in &report.checks {
                println!(
                    "  {:<44} residual {:.2e}  interior {:>4}  excluded {:>3}  {}",
                    c.id, c.residual, c.interior, c.excluded_rows, c.outcome()
                );
            }
        }
    }

    // A relation of your own: X+ and X- commute up to lambda X3 X3.
    let cfg = VerifyConfig::new(w, DeformationParams::new(1.5, 1.0)?, 1e-12);
    let guess = Relation::vanishing("[X+, X-] = 0 ?", Expr::commutator(XPlus, XMinus));
    let r = check_relation(&guess, &cfg)?;
    println!("\n{}: residual {:.3}, pass {}", r.id, r.residual, r.pass);
    Ok(())
}
