//! Monte Carlo ground truth: outage estimates with binomial standard
//! errors, compared with the closed form, and reproducibility across
//! worker counts.
//!
//! Run with `cargo run --example monte_carlo`.

use ris_outage::e2e::moment_match;
use ris_outage::fading::MGDistribution;
use ris_outage::geometry::MisalignmentStats;
use ris_outage::montecarlo::{simulate_cdf, simulate_op, MCConfig, Workers};
use ris_outage::outage::{op_exact, HardwareProfile, OutageScenario};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d1 = MGDistribution::from_nakagami(1.0, 1.0)?;
    let d2 = MGDistribution::from_rice(10f64.powf(0.5), 20)?;
    let n = 4;
    let kg = moment_match(&d1, &d2, n)?;
    let cfg = MCConfig::new(1_000_000, 2024);
    let hw = HardwareProfile::new(0.1, 0.05)?;
    let mis = MisalignmentStats::new(0.6, 3.0)?;
    for (label, mis) in [("aligned", None), ("misaligned", Some(mis))] {
        for db in [-2.0, 2.0, 6.0] {
            let gamma = 10f64.powf(db / 10.0);
            let exact = op_exact(&OutageScenario::new(kg, mis, hw, gamma, 1.0)?)?;
            let est = simulate_op(&d1, &d2, n, mis.as_ref(), &hw, gamma, 1.0, &cfg)?;
            println!(
                "{label:<10} {db:>5} dB: closed form {exact:.5e}, MC {:.5e} ± {:.1e} (z = {:+.2}, {:.2} s)",
                est.op_hat,
                est.stderr,
                (est.op_hat - exact) / est.stderr,
                est.elapsed
            );
        }
    }

    let one = simulate_op(&d1, &d2, n, None, &hw, 1.0, 1.0, &cfg.with_workers(Workers::Fixed(1)))?;
    let four = simulate_op(&d1, &d2, n, None, &hw, 1.0, 1.0, &cfg.with_workers(Workers::Fixed(4)))?;
    println!("1 worker: {}, 4 workers: {} (identical: {})", one.op_hat, four.op_hat, one.op_hat == four.op_hat);

    let grid = [2.0, 3.0, 4.0, 5.0];
    for pt in simulate_cdf(&d1, &d2, n, None, &grid, &cfg)? {
        println!("empirical F_A({}) = {:.5} ± {:.1e}", pt.x, pt.cdf, pt.stderr);
    }
    Ok(())
}
