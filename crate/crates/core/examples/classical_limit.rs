//! q = e^h -> 1: orbital angular momentum against its classical limit.
//!
//! cargo run --release --example classical_limit -- [out.csv]

use qeuclid::smooth::{limit_convergence, standard_test_function, ClassicalOp, SampleGrid};
use qeuclid::{DeformationParams, OpName};

fn main() -> qeuclid::Result<()> {
    let f = standard_test_function(3);
    let grid = SampleGrid::default();
    let hs = [0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625];
    let pairs = [
        (OpName::Torb3, ClassicalOp::L3),
        (OpName::TorbPlus, ClassicalOp::LPlus),
        (OpName::TorbMinus, ClassicalOp::LMinus),
        (OpName::XPlus, ClassicalOp::XPlus),
    ];
    for phase in [-1.0, 1.0] {
        let p = DeformationParams::with_phase(2.0, 1.0, phase.into())?;
        println!("theta phase {phase:+}");
        for (d, c) in pairs {
            let r = limit_convergence(d, c, &f, &hs, &grid, &p)?;
            let errs: Vec<String> = r.rows.iter().map(|x| format!("{:.2e}", x.max_abs_error)).collect();
            let slope = r.slope.map_or("-".to_string(), |s| format!("{s:.3}"));
            println!("  {:<6} -> {:<6} slope {:>7}  {}", d.to_string(), c.to_string(), slope, errs.join(" "));
        }
    }

    if let Some(path) = std::env::args().nth(1) {
        let p = DeformationParams::new(2.0, 1.0)?;
        let r = limit_convergence(OpName::TorbPlus, ClassicalOp::LPlus, &f, &hs, &grid, &p)?;
        r.write_csv(std::fs::File::create(&path)?)?;
        println!("wrote {path}");
    }
    Ok(())
}
