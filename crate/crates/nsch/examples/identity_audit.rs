//! Runs the identity audit and prints its table.
//!
//! ```text
//! cargo run --release --example identity_audit -- [seed] [nx] [rho1] [rho2]
//! ```

use nsch::audit::{run_audit, Tolerances};
use nsch::{make_constants, Grid};

fn main() -> nsch::Result<()> {
    let a: Vec<String> = std::env::args().skip(1).collect();
    let num = |i: usize, d: f64| a.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let seed = num(0, 42.0) as u64;
    let nx = num(1, 64.0) as usize;
    let k = make_constants(num(2, 1000.0), num(3, 1.0))?;
    let report = run_audit(seed, Grid::unit_square(nx)?, k, Tolerances::default());
    print!("{}", report.to_table());
    if !report.passed() {
        std::process::exit(1);
    }
    Ok(())
}
