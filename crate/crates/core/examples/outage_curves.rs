//! Outage probability in all four cases (ideal/impaired transceivers,
//! with/without misalignment), the high-SNR approximation, the floor
//! expression and the maximum threshold.
//!
//! Run with `cargo run --example outage_curves`.

use ris_outage::e2e::moment_match;
use ris_outage::fading::MGDistribution;
use ris_outage::geometry::MisalignmentStats;
use ris_outage::outage::{max_threshold, op_asymptotic, op_exact, op_floor, HardwareProfile, OutageScenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let kg = moment_match(&MGDistribution::from_nakagami(1.5, 1.0)?, &MGDistribution::from_rice(2.0, 20)?, 4)?;
    let mis = MisalignmentStats::new(0.5, 2.2)?;
    let impaired = HardwareProfile::new(0.1, 0.1)?;
    println!(
        "k_A = {:.4}, m_A = {:.4}; gamma_th^m = {} (ideal), {} (kappa = 0.1)",
        kg.k_a,
        kg.m_a,
        max_threshold(&HardwareProfile::ideal()),
        max_threshold(&impaired)
    );

    let cases = [
        ("ideal, aligned", HardwareProfile::ideal(), None),
        ("ideal, misaligned", HardwareProfile::ideal(), Some(mis)),
        ("impaired, aligned", impaired, None),
        ("impaired, misaligned", impaired, Some(mis)),
    ];
    for (name, hw, mis) in cases {
        println!("{name}:");
        for db in [0.0, 10.0, 20.0, 30.0, 40.0] {
            let s = OutageScenario::new(kg, mis, hw, 10f64.powf(db / 10.0), 1.0)?;
            let asym = op_asymptotic(&s).map(|v| format!("{v:.4e}")).unwrap_or_else(|e| e.to_string());
            println!("  {db:>4} dB: OP = {:.6e}, high-SNR approximation = {asym}", op_exact(&s)?);
        }
        if let Some(m) = mis {
            let s = OutageScenario::new(kg, Some(m), hw, 1.0, 1.0)?;
            // the floor expression is the coefficient of (γ_th/γ)^{ζ/2}, not a limit of OP
            println!("  floor expression = {:.6e}", op_floor(&s)?);
        }
    }

    let s = OutageScenario::new(kg, None, HardwareProfile::new(0.3, 0.3)?, 1e6, 6.0)?;
    println!("kappa = 0.3, gamma_th = 6 > 1/0.18: OP = {}", op_exact(&s)?);
    Ok(())
}
