//! Exploratory: how deep the outage tail reaches for large surfaces.
//!
//! A published deep-tail value of about 3.35e-11 cannot be reproduced
//! directly because one of its parameters (μ) is never defined. This
//! script scans the two readings that change the tail the most: the
//! Nakagami shape m and the element count N. It prints the outage at
//! γ/γ_th = 5 dB without misalignment, and with the misalignment law of
//! `examples/jitter_floor.scenario`. Treat the output as exploration, not
//! as a reproduction.
//!
//! Run with `cargo run --example deep_tail_exploration`.

use ris_outage::e2e::moment_match;
use ris_outage::fading::MGDistribution;
use ris_outage::geometry::MisalignmentStats;
use ris_outage::outage::{op_exact, HardwareProfile, OutageScenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rice = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    let mis = MisalignmentStats::new(0.19034272397329086, 1.8506371162127067)?;
    let gamma = 10f64.powf(0.5);
    println!("{:>4} {:>4} {:>14} {:>14}", "m", "N", "OP aligned", "OP misaligned");
    for m in [0.5, 1.0, 2.0, 5.0] {
        let nakagami = MGDistribution::from_nakagami(m, 1.0)?;
        for n in [2, 4, 8, 16, 32] {
            let kg = moment_match(&nakagami, &rice, n)?;
            let aligned = op_exact(&OutageScenario::new(kg, None, HardwareProfile::ideal(), gamma, 1.0)?)?;
            let misaligned = op_exact(&OutageScenario::new(kg, Some(mis), HardwareProfile::ideal(), gamma, 1.0)?)?;
            let marker = if (aligned / 3.35e-11).log10().abs() < 0.5 { "  <- near 3.35e-11" } else { "" };
            println!("{m:>4} {n:>4} {aligned:>14.4e} {misaligned:>14.4e}{marker}");
        }
    }
    Ok(())
}
