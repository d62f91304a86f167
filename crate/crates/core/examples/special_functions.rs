//! Real-argument special functions: Gamma, Bessel K, ₁F₂, erf, and the
//! extended-precision ₁F₂ used where the outage series cancel.
//!
//! Run with `cargo run --example special_functions`.

use ris_outage::special::extended::{self, RM};
use ris_outage::special::{bessel_k, erf, gamma, hyp1f2, ln_bessel_k, SeriesControl};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("Gamma(4.5)         = {}", gamma(4.5)?);
    println!("Gamma(171.2)       = {:e}", gamma(171.2)?);
    println!("K_0(2)             = {}", bessel_k(0.0, 2.0)?);
    println!("K_7.25(3.3)        = {}", bessel_k(7.25, 3.3)?);
    // large orders overflow f64 near the origin; the log form stays finite
    println!("ln K_146.3(1e-6)   = {}", ln_bessel_k(146.3, 1e-6)?);
    println!("erf(1)             = {}", erf(1.0));

    let ctl = SeriesControl::default();
    println!("1F2(1.5; 2.5, 0.7; 4) = {}", hyp1f2(1.5, 2.5, 0.7, 4.0, ctl)?);

    // The same series at 256 bits; `mass` is Σ|term|, the size the partial
    // sums pass through before cancellation.
    let p = 256;
    let big = |x: f64| extended::from_f64(x, p);
    let s = extended::hyp1f2(&big(1.5), &big(2.5), &big(-20.3), &big(400.0), p, 100_000)?;
    let ratio = s.mass.div(&s.value.abs(), p, RM);
    println!(
        "1F2(1.5; 2.5, -20.3; 400) = {:e}  ({} terms, mass/|value| = {:e})",
        extended::to_f64(&s.value),
        s.terms,
        extended::to_f64(&ratio)
    );
    Ok(())
}
