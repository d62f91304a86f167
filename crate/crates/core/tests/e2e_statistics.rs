//! Cascade statistics: moment matching against an extended-precision
//! re-implementation, closed-form CDFs against their quadrature oracles and
//! against Monte Carlo.

// reference values are quoted from a 50-digit evaluation
#![allow(clippy::excessive_precision)]

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{cascade, nakagami, rice_db};
use ris_outage::e2e::{
    cdf_a, cdf_a_eval, cdf_a_quadrature, cdf_a_series, cdf_ae2e, cdf_ae2e_quadrature, moment_match, pdf_a, pdf_ae2e,
    sum_moments, EvalPath, KGParams,
};
use ris_outage::fading::{product_moment, MGDistribution};
use ris_outage::geometry::MisalignmentStats;
use ris_outage::montecarlo::{simulate_cdf, MCConfig};
use ris_outage::quadrature::{try_integrate, try_integrate_to_infinity, QuadOptions};
use ris_outage::special::bessel_k;

const OPTS: QuadOptions = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-11, max_subdivisions: 4000 };

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn sum_moment_identities() {
    let r = MGDistribution::rayleigh();
    let d = rice_db(5.0);
    for l in 0..=6 {
        assert_eq!(sum_moments(&r, &d, 1, l).unwrap(), product_moment(&r, &d, l as u32).unwrap());
    }
    let two = sum_moments(&r, &r, 2, 2).unwrap();
    assert!(rel(two, 2.0 + std::f64::consts::PI.powi(2) / 8.0) < 1e-14);
    assert!((sum_moments(&nakagami(2.0), &d, 7, 0).unwrap() - 1.0).abs() < 1e-13);
}

#[test]
fn double_rayleigh_match_is_exact() {
    let r = MGDistribution::rayleigh();
    let p = moment_match(&r, &r, 1).unwrap();
    assert_eq!(p.moments, Some([1.0, 4.0, 36.0]));
    for v in [p.k_a, p.m_a, p.xi, p.omega_a] {
        assert!((v - 1.0).abs() < 1e-12);
    }
}

#[test]
fn moment_match_matches_extended_precision_reference() {
    // (m, K_r dB, N) → (k_A, m_A, Ξ, Ω_A) from a 50-digit re-implementation
    let cases = [
        (
            (1.0, 5.0, 16),
            [34.664_034_343_150_724, 13.034_774_551_266_551, 1.566_626_437_431_746_4, 184.099_126_551_886_74],
        ),
        (
            (3.0, 5.0, 4),
            [22.232_584_042_281_136, 5.962_209_080_325_964, 3.093_717_204_058_462_4, 13.849_558_193_839_314],
        ),
        ((0.5, 0.0, 1), [1.794_509_464_821_638, 0.421_706_751_394_578_64, 0.869_917_672_401_680_1, 1.0]),
    ];
    for ((m, k_db, n), reference) in cases {
        let (_, _, p) = cascade(m, k_db, n);
        for (v, r) in [p.k_a, p.m_a, p.xi, p.omega_a].into_iter().zip(reference) {
            assert!(rel(v, r) < 1e-9, "m = {m}, K = {k_db} dB, N = {n}: {v} vs {r}");
        }
        assert!(p.k_a >= p.m_a);
        assert!(rel(p.xi, (p.k_a * p.m_a / p.omega_a).sqrt()) < 1e-12);
        assert_eq!(p.omega_a, p.moments.unwrap()[0]);
    }
}

#[test]
fn moment_match_is_scale_covariant() {
    let base = moment_match(&nakagami(2.0), &nakagami(1.5), 6).unwrap();
    let s2 = 3.7;
    let scaled = moment_match(&MGDistribution::from_nakagami(2.0, s2).unwrap(), &nakagami(1.5), 6).unwrap();
    assert!(rel(scaled.omega_a, s2 * base.omega_a) < 1e-9);
    assert!(rel(scaled.k_a, base.k_a) < 1e-9 && rel(scaled.m_a, base.m_a) < 1e-9);
}

#[test]
fn pdf_a_values_normalization_and_power() {
    let dr = KGParams::new(1.0, 1.0, 1.0).unwrap();
    assert!(rel(pdf_a(&dr, 1.0).unwrap(), 4.0 * bessel_k(0.0, 2.0).unwrap()) < 1e-13);
    assert!((pdf_a(&dr, 1.0).unwrap() - 0.455_575).abs() < 1e-6);
    for (_, _, p) in [cascade(1.0, 5.0, 16), cascade(0.7, 2.0, 2), cascade(4.0, 8.0, 4)] {
        let pdf = |x: f64| if x > 0.0 { pdf_a(&p, x) } else { Ok(0.0) };
        assert!((try_integrate_to_infinity(pdf, 0.0, OPTS).unwrap().value - 1.0).abs() < 1e-8);
        let power = try_integrate_to_infinity(|x| Ok(x * x * pdf(x)?), 0.0, OPTS).unwrap().value;
        assert!(rel(power, p.omega_a) < 1e-6);
    }
}

#[test]
fn cdf_a_endpoints_and_double_rayleigh() {
    let (_, _, p) = cascade(1.0, 5.0, 16);
    assert_eq!(cdf_a(&p, 0.0).unwrap(), 0.0);
    assert!((cdf_a(&p, 10.0 * p.omega_a.sqrt()).unwrap() - 1.0).abs() < 1e-8);
    let dr = KGParams::new(1.0, 1.0, 1.0).unwrap();
    let e = cdf_a_eval(&dr, 1.0).unwrap();
    assert_eq!(e.path, EvalPath::Quadrature);
    assert!((e.value - (1.0 - 2.0 * bessel_k(1.0, 2.0).unwrap())).abs() < 1e-9);
    assert!((e.value - 0.720_268).abs() < 1e-6);
}

#[test]
fn cdf_a_series_survives_huge_intermediate_terms() {
    // terms of order 2^3500 cancel to a CDF of 1; a rounded-to-infinity partial
    // sum at low precision must not be accepted as the answer
    let (_, _, p) = cascade(1.0, 5.0, 4);
    for x in [235.7, 745.4] {
        assert_eq!(cdf_a(&p, x).unwrap(), 1.0, "x = {x}");
    }
}

#[test]
fn cdf_a_series_agrees_with_quadrature_on_random_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xCDF);
    let mut compared = 0;
    for _ in 0..100 {
        let (_, _, p) = cascade(rng.gen_range(0.5..5.0), rng.gen_range(0.0..10.0), [1, 2, 4, 16][rng.gen_range(0..4)]);
        if p.is_degenerate() {
            continue;
        }
        for f in [0.2, 0.6, 1.0, 1.4, 2.2] {
            let x = f * p.omega_a.sqrt();
            let d = (cdf_a_series(&p, x).unwrap() - cdf_a_quadrature(&p, x).unwrap()).abs();
            assert!(d <= 1e-7, "{p:?} at x = {x}: |diff| = {d:e}");
            compared += 1;
        }
    }
    assert!(compared >= 450);
}

#[test]
fn cdf_a_matches_pdf_histogram_from_simulation() {
    let (d1, d2, p) = cascade(1.0, 5.0, 16);
    let s = p.omega_a.sqrt();
    let edges: Vec<f64> = [0.80, 0.81, 0.95, 0.96, 1.00, 1.01, 1.05, 1.06, 1.20, 1.21].iter().map(|f| f * s).collect();
    let mc = simulate_cdf(&d1, &d2, 16, None, &edges, &MCConfig::new(10_000_000, 0x1157)).unwrap();
    let n = 1e7;
    for pair in mc.chunks(2) {
        let (a, b) = (pair[0].x, pair[1].x);
        let hist = pair[1].cdf - pair[0].cdf;
        let mass = try_integrate(|x| pdf_a(&p, x), a, b, OPTS).unwrap().value;
        let se = (hist * (1.0 - hist) / n).sqrt();
        assert!((hist - mass).abs() <= 3.0 * se, "bin [{a}, {b}]: {hist} vs {mass} (se {se:e})");
    }
}

fn e2e_case() -> (MGDistribution, MGDistribution, KGParams, MisalignmentStats) {
    let (d1, d2, p) = cascade(2.0, 5.0, 16);
    (d1, d2, p, MisalignmentStats::new(0.6, 2.7).unwrap())
}

#[test]
fn cdf_ae2e_endpoints_and_concentration_limit() {
    let (_, _, p, s) = e2e_case();
    assert_eq!(cdf_ae2e(&p, &s, 0.0).unwrap(), 0.0);
    assert_eq!(cdf_ae2e_quadrature(&p, &s, 0.0).unwrap(), 0.0);
    assert!((cdf_ae2e(&p, &s, 50.0 * p.omega_a.sqrt()).unwrap() - 1.0).abs() < 1e-6);
    // ζ = 10⁴: h_g concentrates at B_o; the gap is about x f_A(x/B_o)/(B_o ζ),
    // so a moderately spread cascade is used
    let (_, _, p) = cascade(1.0, 5.0, 2);
    let sharp = MisalignmentStats::new(0.6, 1e4).unwrap();
    for f in [0.8, 1.0, 1.2] {
        let x = f * p.omega_a.sqrt() * sharp.b_o;
        let d = (cdf_ae2e_quadrature(&p, &sharp, x).unwrap() - cdf_a(&p, x / sharp.b_o).unwrap()).abs();
        assert!(d < 1e-4, "x = {x}: {d:e}");
    }
}

#[test]
fn pdf_ae2e_normalization_and_derivative() {
    let (_, _, p, s) = e2e_case();
    let pdf = |x: f64| if x > 0.0 { pdf_ae2e(&p, &s, x) } else { Ok(0.0) };
    let mass =
        try_integrate_to_infinity(pdf, 0.0, QuadOptions { abs_tol: 1e-10, rel_tol: 1e-9, max_subdivisions: 2000 })
            .unwrap()
            .value;
    assert!((mass - 1.0).abs() < 1e-6, "mass = {mass}");
    let scale = p.omega_a.sqrt() * s.b_o;
    // bulk of the law: in the far tail a difference of CDF values near 1
    // cannot resolve a density of order 1e-11 in double precision
    for i in 1..=20 {
        let x = scale * (0.3 + 0.05 * i as f64);
        let h = 1e-4 * x;
        let diff = (cdf_ae2e(&p, &s, x + h).unwrap() - cdf_ae2e(&p, &s, x - h).unwrap()) / (2.0 * h);
        let exact = pdf_ae2e(&p, &s, x).unwrap();
        assert!(rel(diff, exact) < 1e-5, "x = {x}: {diff} vs {exact}");
    }
}

#[test]
fn cdf_ae2e_matches_simulation() {
    let (d1, d2, p, s) = e2e_case();
    let scale = p.omega_a.sqrt() * s.b_o;
    let grid: Vec<f64> = (1..=10).map(|i| scale * 0.15 * i as f64).collect();
    let mc = simulate_cdf(&d1, &d2, 16, Some(&s), &grid, &MCConfig::new(10_000_000, 0xE2E)).unwrap();
    for pt in &mc {
        let exact = cdf_ae2e(&p, &s, pt.x).unwrap();
        assert!((pt.cdf - exact).abs() <= 4.0 * pt.stderr, "x = {}: {} vs {exact} (se {:e})", pt.x, pt.cdf, pt.stderr);
    }
    // bin masses of the density against the same sample set
    let n = 1e7;
    for w in mc.windows(2) {
        let hist = w[1].cdf - w[0].cdf;
        let mass = try_integrate(|x| pdf_ae2e(&p, &s, x), w[0].x, w[1].x, QuadOptions::default()).unwrap().value;
        let se = (hist * (1.0 - hist) / n).sqrt();
        assert!((hist - mass).abs() <= 3.0 * se, "bin [{}, {}]: {hist} vs {mass}", w[0].x, w[1].x);
    }
}
