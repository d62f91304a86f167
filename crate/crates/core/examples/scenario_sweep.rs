//! Library use of the scenario front-end: parse a scenario, evaluate the
//! sweep, and write the same CSV/SVG artifacts as `ris-outage run`.
//!
//! Run with `cargo run --example scenario_sweep -- [scenario] [output dir]`;
//! defaults to `examples/ideal_n4.scenario` and a temporary directory.

use std::path::PathBuf;

use ris_outage::cli::{load_scenario, svg, sweep, write_atomic};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let scenario = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/ideal_n4.scenario"));
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("ris-outage-sweep"));

    let s = load_scenario(&scenario, None)?;
    let rows = sweep::evaluate(&s, false, None)?;
    for r in &rows {
        println!("{:>8} {:.6e} {}", r.sweep_value, r.op_exact, r.flags.join(";"));
    }
    std::fs::create_dir_all(&out)?;
    write_atomic(&out.join("curve.csv"), sweep::to_csv(&rows).as_bytes())?;
    write_atomic(&out.join("curve.svg"), svg::render(&rows, s.sweep.variable.name()).as_bytes())?;
    println!("wrote {}", out.display());
    Ok(())
}
