//! Disorientation/misalignment statistics from the physical geometry:
//! beam footprint, the peak loss B_o and the shape ζ of h_g, plus the
//! average SNR of a link budget.
//!
//! Run with `cargo run --example misalignment`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_outage::geometry::{
    average_snr, beamwidth, coherence_length, misalignment_stats, sample_hg, GeometryConfig, LinkBudget,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = GeometryConfig::default();
    println!("reference geometry: {g:?}");
    println!("coherence length rho(L2) = {}", coherence_length(&g)?);
    println!("beam radius w(L2)        = {} m", beamwidth(&g)?);
    let s = misalignment_stats(&g)?;
    println!("B_o = {:e}, zeta = {}", s.b_o, s.zeta);

    for (sigma_p, alpha) in [(0.05, 0.1), (0.5, 1.0), (2.5, 2.0)] {
        let g = GeometryConfig { sigma_p, alpha, ..g };
        let s = misalignment_stats(&g)?;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let mean = (0..n).map(|_| sample_hg(&s, &mut rng)).sum::<f64>() / n as f64;
        println!(
            "sigma_p = {sigma_p}, alpha = {alpha}: B_o = {:.4e}, zeta = {:.4}, E[h_g] = {:.4e} (sampled {:.4e})",
            s.b_o,
            s.zeta,
            s.hg_mean(),
            mean
        );
    }

    let lb = LinkBudget { l1: 1e-2, l2: 1e-2, n1: 2.0, n2: 2.0, dist1: 50.0, dist2: 5.0, p_s: 1.0, sigma_w2: 1e-14 };
    println!("average SNR of {lb:?}: {:.3} dB", 10.0 * average_snr(&lb).log10());
    Ok(())
}
