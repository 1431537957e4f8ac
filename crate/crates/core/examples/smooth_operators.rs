//! Deformed operators acting on smooth test functions: pointwise values,
//! domain restrictions, and the dilation identity for Z_xi.

use num_complex::Complex64;
use qeuclid::smooth::{dilation, polynomial_gaussian, smooth_apply, ModeFn, SmoothFunction};
use qeuclid::{DeformationParams, OpName};

fn main() -> qeuclid::Result<()> {
    let p = DeformationParams::new(2.0, 1.0)?;
    let f = SmoothFunction::single(1, polynomial_gaussian(&[1.0, -0.5, 0.25]));

    for op in [OpName::X3, OpName::XPlus, OpName::TPlus, OpName::K3, OpName::TorbPlus] {
        let g = smooth_apply(op, &f, &p)?;
        for (m, c) in g.modes() {
            let v = c.value(1.0, 0.3).map_or_else(|e| e.to_string(), |v| format!("{v:.6}"));
            println!("{:<6} mode {m:+}: at r=1, xi=0.3 -> {v}", op.to_string());
        }
    }

    // t- needs q^2 xi^2 <= 1; at xi = 0.6 and q = 2 it is undefined.
    let g = smooth_apply(OpName::TMinus, &SmoothFunction::single(0, ModeFn::constant(1.0)), &p)?;
    println!("\nt- at xi=0.2: {:.6}", g.value(-1, 1.0, 0.2)?);
    println!("t- at xi=0.6: {}", g.value(-1, 1.0, 0.6).unwrap_err());

    // e^{a Z} xi e^{-a Z} = e^a xi
    let a = 2.0 * p.q().ln();
    let h = SmoothFunction::single(0, polynomial_gaussian(&[0.3, 1.0]));
    let lhs = dilation(a).apply(&smooth_apply(OpName::Xi, &dilation(-a).apply(&h)?, &p)?)?;
    let x = lhs.value(0, 0.8, 0.1)?;
    let y = h.value(0, 0.8, 0.1)? * Complex64::new(a.exp() * 0.1, 0.0);
    println!("\ndilated xi at 0.1: {x:.6} vs e^a xi f = {y:.6}");
    Ok(())
}
