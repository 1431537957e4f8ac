//! t-operators assembled from coordinates, orbital angular momentum
//! assembled from t and K, and what the theta-phase does to the latter.

use num_complex::Complex64;
use qeuclid::verify::suites::{homomorphism, tensor};
use qeuclid::verify::VerifyConfig;
use qeuclid::{DeformationParams, TruncationWindow};

fn main() -> qeuclid::Result<()> {
    let w = TruncationWindow::new(0, 0, -5, 4)?;
    let base = DeformationParams::new(2.0, 1.0)?;
    let cfg = VerifyConfig::new(w, base, 1e-12);

    for c in &homomorphism(&cfg)?.checks {
        println!("{:<50} {:.2e}  {}", c.id, c.residual, c.outcome());
    }
    for phase in [Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)] {
        let r = tensor(&cfg.with_params(base.with_theta_phase(phase)?))?;
        println!("\ntheta phase {phase}: suite {}", if r.pass { "pass" } else { "FAIL" });
        for c in r.checks.iter().filter(|c| c.id.contains("sigma=+1")) {
            println!("  {:<40} {:.2e}  {}", c.id, c.residual, c.outcome());
        }
    }
    Ok(())
}
