//! Reading a state file, applying an operator, writing the result, and
//! dumping a materialized matrix, as the CLI does.

use qeuclid::lattice::{apply_in_window, io, materialize, OpName};
use qeuclid::{DeformationParams, TruncationWindow, DEFAULT_CAPACITY};

const STATE: &str = "\
# M sigma mt m re im
0 +1 0 0 1.0 0.0
0 +1 -1 0 0.5 -0.5
1 -1 -2 -1 0.25 0
";

fn main() -> qeuclid::Result<()> {
    let p = DeformationParams::new(1.5, 1.0)?;
    let w = TruncationWindow::new(0, 1, -2, 2)?;
    let s = io::read_state(STATE.as_bytes())?;

    let (image, leaked) = apply_in_window(OpName::TorbPlus, &s, &w, &p)?;
    println!("Torb+ image ({} terms, leaked norm {:.3e}):", image.len(), leaked.sqrt());
    io::write_state(&image, std::io::stdout().lock())?;

    println!();
    let a = materialize(OpName::KMinus, &TruncationWindow::new(0, 0, -1, 1)?, &p, DEFAULT_CAPACITY)?;
    io::write_matrix(&a, std::io::stdout().lock())?;
    Ok(())
}
