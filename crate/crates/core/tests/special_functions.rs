//! Special functions against closed forms and high-precision references.

// reference values are quoted from a 50-digit evaluation
#![allow(clippy::excessive_precision)]

use ris_outage::quadrature::{try_integrate_to_infinity, QuadOptions};
use ris_outage::special::{bessel_k, erf, gamma, hyp1f2, SeriesControl};
use ris_outage::Error;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn gamma_reference_values() {
    assert_eq!(gamma(5.0).unwrap(), 24.0);
    assert!(rel(gamma(0.5).unwrap(), std::f64::consts::PI.sqrt()) < 1e-15);
    // 50-digit reference: Γ(3.7) = 4.17065178379660316539…
    assert!(rel(gamma(3.7).unwrap(), 4.170_651_783_796_603_2) < 1e-12);
}

#[test]
fn gamma_reflection_and_errors() {
    // Γ(−1/2) = −2√π
    assert!(rel(gamma(-0.5).unwrap(), -2.0 * std::f64::consts::PI.sqrt()) < 1e-13);
    assert!(matches!(gamma(0.0), Err(Error::Pole(_))));
    assert!(matches!(gamma(-3.0), Err(Error::Pole(_))));
    assert!(matches!(gamma(172.0), Err(Error::Overflow(_))));
}

#[test]
fn erf_reference_values() {
    assert_eq!(erf(0.0), 0.0);
    assert!((erf(10.0) - 1.0).abs() <= 1e-15);
    // erf(1) = 0.84270079294971486934…
    assert!(rel(erf(1.0), 0.842_700_792_949_714_87) < 1e-12);
    for x in [0.1, 0.7, 2.5, 5.9] {
        assert_eq!(erf(-x), -erf(x));
    }
}

#[test]
fn bessel_k_reference_values() {
    let half = (std::f64::consts::PI / 2.0).sqrt() * (-1.0f64).exp();
    assert!(rel(bessel_k(0.5, 1.0).unwrap(), half) < 1e-13);
    assert_eq!(bessel_k(-2.7, 3.1).unwrap(), bessel_k(2.7, 3.1).unwrap());
    assert!(rel(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_33) < 1e-10);
    assert!(rel(bessel_k(2.3, 0.7).unwrap(), 5.975_961_761_210_582) < 1e-10);
    assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain(_))));
}

#[test]
fn bessel_k_matches_integral_representation() {
    // K_ν(x) = ∫₀^∞ e^{−x cosh t} cosh(νt) dt
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_subdivisions: 4000 };
    for (nu, x) in [(0.0, 1.0), (1.0, 0.3), (3.5, 2.0), (0.25, 20.0)] {
        let integrand = |t: f64| {
            let c = -x * t.cosh();
            Ok(0.5 * ((c + nu * t).exp() + (c - nu * t).exp()))
        };
        let oracle = try_integrate_to_infinity(integrand, 0.0, opts).unwrap().value;
        assert!(rel(bessel_k(nu, x).unwrap(), oracle) < 1e-10, "nu = {nu}, x = {x}");
    }
}

#[test]
fn hyp1f2_reference_values() {
    let ctl = SeriesControl::default();
    assert_eq!(hyp1f2(0.3, 1.7, 2.2, 0.0, ctl).unwrap(), 1.0);
    // ₁F₂(1; 1, 1; z) = I₀(2√z) = Σ zⁿ/(n!)²
    let z: f64 = 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..60 {
        term *= z / (n as f64 * n as f64);
        sum += term;
    }
    assert!(rel(hyp1f2(1.0, 1.0, 1.0, z, ctl).unwrap(), sum) < 1e-14);
    // 500-term extended-precision summation: 1.86745276335486606610…
    assert!(rel(hyp1f2(0.7, 1.3, 2.1, 2.5, ctl).unwrap(), 1.867_452_763_354_866_1) < 1e-11);
    // ₁F₂(a; a, 1/2; z) = cosh(2√z)
    assert!(rel(hyp1f2(0.9, 0.9, 0.5, 3.0, ctl).unwrap(), (2.0 * 3f64.sqrt()).cosh()) < 1e-13);
}

#[test]
fn hyp1f2_errors() {
    let ctl = SeriesControl::default();
    assert!(matches!(hyp1f2(1.0, -2.0, 1.0, 1.0, ctl), Err(Error::Domain(_))));
    let tight = SeriesControl::new(1e-12, 64).unwrap();
    assert!(matches!(hyp1f2(1.0, 1.0, 1.0, 1e4, tight), Err(Error::NoConvergence { .. })));
    assert!(SeriesControl::new(1e-2, 100).is_err());
    assert!(SeriesControl::new(1e-12, 10).is_err());
}
