//! Mixture-Gamma envelope models: Nakagami-m is a single term, Rice is a
//! truncated series. Shows weights, moments, densities and sampling.
//!
//! Run with `cargo run --example fading_models`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ris_outage::fading::{product_moment, product_pdf, MGDistribution};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let nakagami = MGDistribution::from_nakagami(2.0, 1.0)?;
    let rice = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    for d in [&nakagami, &rice] {
        println!(
            "{}: {} terms, rate {}, sum of weights {:.15}",
            d.label(),
            d.terms().len(),
            d.rate(),
            d.normalization()
        );
        println!("  E[h^2] = {:.12}, E[h] = {:.12}", d.mean_power(), d.moment(1.0)?);
        println!("  f(0.5) = {:.9}, f(1.0) = {:.9}", d.envelope_pdf(0.5), d.envelope_pdf(1.0));
    }

    // product of the two hops, one RIS element
    println!("E[(|h||g|)^2] = {}", product_moment(&nakagami, &rice, 2)?);
    println!("f_|h||g|(0.8) = {}", product_pdf(&nakagami, &rice, 0.8)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 200_000;
    let mean_power: f64 = (0..n).map(|_| rice.sample_envelope(&mut rng).powi(2)).sum::<f64>() / n as f64;
    println!("sampled E[g^2] over {n} draws = {mean_power:.4} (exact {})", rice.mean_power());
    Ok(())
}
