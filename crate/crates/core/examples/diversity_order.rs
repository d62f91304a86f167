//! Diversity order: the closed form max(k_A, m_A) next to the slope
//! measured on the outage curve between 50 and 70 dB, which follows
//! min(k_A, m_A).
//!
//! Run with `cargo run --example diversity_order`.

use ris_outage::e2e::{moment_match, KGParams};
use ris_outage::fading::MGDistribution;
use ris_outage::outage::diversity_order;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rice = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    let mut cases =
        vec![("double Rayleigh", KGParams::new(1.0, 1.0, 1.0)?), ("k = 3.2, m = 1.4", KGParams::new(3.2, 1.4, 2.0)?)];
    for n in [1, 2, 4] {
        cases.push(("Nakagami(1) x Rice(5 dB)", moment_match(&MGDistribution::from_nakagami(1.0, 1.0)?, &rice, n)?));
    }
    for (name, p) in cases {
        let d = diversity_order(&p, true)?;
        println!(
            "{name:<26} N={:<2} max(k,m) = {:>8.4}  min(k,m) = {:>8.4}  measured slope = {:>8.4}",
            p.n_elements,
            d.closed_form,
            p.m_a,
            d.empirical_slope.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
