//! CDF and density of the end-to-end gain A_e2e = h_g·A: the five-term
//! ₁F₂ expansion against the integral oracle ∫ F_A(x/y) f_hg(y) dy.
//!
//! Run with `cargo run --example end_to_end_cdf`.

use ris_outage::e2e::{cdf_ae2e_eval, cdf_ae2e_quadrature, moment_match, pdf_ae2e};
use ris_outage::fading::MGDistribution;
use ris_outage::geometry::MisalignmentStats;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nakagami = MGDistribution::from_nakagami(2.0, 1.0)?;
    let rice = MGDistribution::from_rice(2.0, 20)?;
    let p = moment_match(&nakagami, &rice, 4)?;
    println!("k_A = {:.5}, m_A = {:.5}, Xi = {:.5}", p.k_a, p.m_a, p.xi);
    for zeta in [0.8, 3.0, 12.0] {
        let s = MisalignmentStats::new(0.3, zeta)?;
        println!("B_o = {}, zeta = {zeta}", s.b_o);
        for x in [0.05, 0.2, 0.5, 1.0, 1.5] {
            let e = cdf_ae2e_eval(&p, &s, x)?;
            let oracle = cdf_ae2e_quadrature(&p, &s, x)?;
            println!(
                "  x = {x:<5} F = {:.15e} ({:?})  oracle = {:.15e}  |diff| = {:.1e}  f = {:.6e}",
                e.value,
                e.path,
                oracle,
                (e.value - oracle).abs(),
                pdf_ae2e(&p, &s, x)?
            );
        }
    }
    Ok(())
}
