//! Generalized-K surrogate of the RIS cascade `A = Σ|hᵢ||gᵢ|`: moments of
//! the sum by binomial convolution, then shapes from μ₂, μ₄, μ₆.
//!
//! Run with `cargo run --example moment_matching`.

use ris_outage::e2e::{moment_match, sum_moments};
use ris_outage::fading::MGDistribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rayleigh = MGDistribution::rayleigh();
    let p = moment_match(&rayleigh, &rayleigh, 1)?;
    println!("double Rayleigh: k_A = {}, m_A = {}, Xi = {}", p.k_a, p.m_a, p.xi);

    let rice = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    for m in [1.0, 5.0] {
        let nakagami = MGDistribution::from_nakagami(m, 1.0)?;
        println!("Nakagami(m={m}) x Rice(5 dB):");
        for n in [1, 2, 4, 8, 16, 32] {
            let p = moment_match(&nakagami, &rice, n)?;
            println!(
                "  N={n:>2}: mu_A(2) = {:>10.4}  k_A = {:>9.4}  m_A = {:>8.4}  Xi = {:.6}  k_A-m_A = {:.4}",
                sum_moments(&nakagami, &rice, n, 2)?,
                p.k_a,
                p.m_a,
                p.xi,
                p.order()
            );
        }
    }
    Ok(())
}
