//! Constants, density laws and flux relations for a few density pairs.
//!
//! ```text
//! cargo run --release --example mixture_algebra
//! ```

use nsch::make_constants;
use nsch::mixture::{c_of_phi, flux_bundle, relate_fluxes, rho_of_c, rho_of_phi};

fn main() -> nsch::Result<()> {
    println!(
        "{:>12} {:>10} {:>10} {:>10}",
        "rho1/rho2", "alpha", "beta", "zeta"
    );
    for (r1, r2) in [(1.0, 1.0), (2.0, 1.0), (10.0, 1.0), (1000.0, 1.0)] {
        let k = make_constants(r1, r2)?;
        println!(
            "{:>12} {:>10.6} {:>10.6} {:>10.6}",
            format!("{r1}/{r2}"),
            k.alpha,
            k.beta,
            k.zeta
        );
    }

    let k = make_constants(3.0, 1.0)?;
    println!("\nphi -> c and the two density laws at (3, 1):");
    for phi in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        let c = c_of_phi(phi, &k)?;
        println!(
            "  phi {phi:>5.2}  c {c:>8.5}  rho(phi) {:.5}  rho(c) {:.5}",
            rho_of_phi(phi, &k)?,
            rho_of_c(c, &k)?
        );
    }

    // every flux is a multiple of the volume-frame flux h^u
    let b = flux_bundle(0.3, [1.0, -0.5], [-0.2, 0.4], &k);
    let rel = relate_fluxes(b.h_u, b.rho, &k);
    println!("\nconstituent data phi1 = 0.3, v1 = (1, -0.5), v2 = (-0.2, 0.4):");
    println!("  h^u      {:?}", b.h_u);
    println!("  Jtilde^u {:?}  from h^u {:?}", b.jtilde_u, rel.jtilde_u);
    println!("  h^v      {:?}  from h^u {:?}", b.h_v, rel.h_v);
    println!("  J^v      {:?}  from h^u {:?}", b.j_v, rel.j_v);
    Ok(())
}
