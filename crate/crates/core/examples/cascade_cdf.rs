//! CDF of the cascade sum A through both representations: the
//! extended-precision ₁F₂ expansion and adaptive quadrature of the density.
//! Near-integer k_A − m_A is routed to quadrature automatically.
//!
//! Run with `cargo run --example cascade_cdf`.

use ris_outage::e2e::{cdf_a_eval, cdf_a_quadrature, moment_match, pdf_a, KGParams};
use ris_outage::fading::MGDistribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nakagami = MGDistribution::from_nakagami(1.0, 1.0)?;
    let rice = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    let p = moment_match(&nakagami, &rice, 16)?;
    println!(
        "N = 16: k_A = {:.6}, m_A = {:.6}, Xi = {:.6}, sqrt(Omega_A) = {:.4}",
        p.k_a,
        p.m_a,
        p.xi,
        p.omega_a.sqrt()
    );
    println!("{:>8} {:>13} {:>24} {:>24} {:>10}", "x", "pdf", "cdf (routed)", "cdf (quadrature)", "path");
    for x in [2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 20.0] {
        let e = cdf_a_eval(&p, x)?;
        println!(
            "{x:>8} {:>13.6e} {:>24.16e} {:>24.16e} {:>10?}",
            pdf_a(&p, x)?,
            e.value,
            cdf_a_quadrature(&p, x)?,
            e.path
        );
    }

    let degenerate = KGParams::new(3.0, 1.0, 2.0)?;
    let e = cdf_a_eval(&degenerate, 1.0)?;
    println!("k_A - m_A = 2 (integer): F_A(1) = {} via {:?}", e.value, e.path);
    Ok(())
}
