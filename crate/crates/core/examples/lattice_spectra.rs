//! Eigenvalues of the diagonal operators on a small window.
//!
//! cargo run --example lattice_spectra -- [q]

use qeuclid::lattice::spectrum_diagonal;
use qeuclid::{lattice_coordinates, DeformationParams, OpName, TruncationWindow, DEFAULT_CAPACITY};

fn main() -> qeuclid::Result<()> {
    let q: f64 = std::env::args().nth(1).map_or(Ok(2.0), |s| s.parse()).unwrap_or(2.0);
    let p = DeformationParams::new(q, 1.0)?;
    let w: TruncationWindow = "0:1,-2,1".parse()?;

    let ops = [OpName::X3, OpName::R2, OpName::T3, OpName::TauK, OpName::Torb3, OpName::XiHat];
    let columns: Vec<_> = ops
        .iter()
        .map(|&op| spectrum_diagonal(op, &w, &p, DEFAULT_CAPACITY))
        .collect::<Result<_, _>>()?;

    print!("{:<16} {:>9} {:>9}", "index", "r", "xi");
    for op in &ops {
        print!(" {:>12}", op.to_string());
    }
    println!();
    for (row, (idx, _)) in columns[0].iter().enumerate() {
        let c = lattice_coordinates(idx, &p);
        print!("{:<16} {:>9.4} {:>9.4}", idx.to_string(), c.r, c.xi);
        for col in &columns {
            print!(" {:>12.5}", col[row].1.re);
        }
        println!();
    }

    match spectrum_diagonal(OpName::KPlus, &w, &p, DEFAULT_CAPACITY) {
        Err(e) => println!("\n{e}"),
        Ok(_) => unreachable!("K+ shifts m"),
    }
    Ok(())
}
