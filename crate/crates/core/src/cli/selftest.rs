//! Built-in oracle suite run by `ris-outage run --selftest`.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::e2e::{
    cdf_a, cdf_a_quadrature, cdf_a_series, cdf_ae2e_quadrature, cdf_ae2e_series, e2e_is_degenerate, moment_match,
    pdf_a, KGParams,
};
use crate::fading::MGDistribution;
use crate::geometry::MisalignmentStats;
use crate::outage::{op_exact, HardwareProfile, OutageScenario};
use crate::quadrature::{try_integrate_to_infinity, QuadOptions};
use crate::special::bessel_k;

type Check = fn() -> Result<String, String>;

const CHECKS: &[(&str, Check)] = &[
    ("double-Rayleigh moment match", double_rayleigh_match),
    ("double-Rayleigh CDF vs 1 - 2 K1(2)", double_rayleigh_cdf),
    ("pdf_A normalization", normalization),
    ("cdf_A series vs quadrature", dual_path_cascade),
    ("cdf_Ae2e series vs quadrature", dual_path_e2e),
    ("maximum-threshold outage", max_threshold_outage),
    ("monotone outage in gamma", monotone_in_gamma),
];

/// Number of randomized parameter sets per dual-path check.
const SETS: usize = 12;

fn err(e: crate::Error) -> String {
    e.to_string()
}

fn double_rayleigh_match() -> Result<String, String> {
    let p = moment_match(&MGDistribution::rayleigh(), &MGDistribution::rayleigh(), 1).map_err(err)?;
    let worst = [p.k_a - 1.0, p.m_a - 1.0, p.xi - 1.0].iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if worst < 1e-6 {
        Ok(format!("k_A = {}, m_A = {}, Xi = {}", p.k_a, p.m_a, p.xi))
    } else {
        Err(format!("k_A = {}, m_A = {}, Xi = {}", p.k_a, p.m_a, p.xi))
    }
}

fn double_rayleigh_cdf() -> Result<String, String> {
    let p = KGParams::new(1.0, 1.0, 1.0).map_err(err)?;
    let oracle = 1.0 - 2.0 * bessel_k(1.0, 2.0).map_err(err)?;
    let v = cdf_a(&p, 1.0).map_err(err)?;
    let msg = format!("|{v} - {oracle}| = {:e}", (v - oracle).abs());
    if (v - oracle).abs() < 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn normalization() -> Result<String, String> {
    let p = KGParams::new(5.3, 2.2, 3.0).map_err(err)?;
    let opts = QuadOptions { abs_tol: 1e-14, rel_tol: 1e-12, max_subdivisions: 2000 };
    let mass =
        try_integrate_to_infinity(|x| if x > 0.0 { pdf_a(&p, x) } else { Ok(0.0) }, 0.0, opts).map_err(err)?.value;
    if (mass - 1.0).abs() < 1e-8 {
        Ok(format!("mass = {mass}"))
    } else {
        Err(format!("mass = {mass}"))
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> Result<KGParams, String> {
    let m = rng.gen_range(0.5..5.0);
    let k_db: f64 = rng.gen_range(0.0..10.0);
    let n = [1, 2, 4, 16][rng.gen_range(0..4)];
    let d1 = MGDistribution::from_nakagami(m, 1.0).map_err(err)?;
    let d2 = MGDistribution::from_rice(10f64.powf(k_db / 10.0), 20).map_err(err)?;
    moment_match(&d1, &d2, n).map_err(err)
}

fn dual_path_cascade() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xD0A1);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..SETS {
        let p = random_params(&mut rng)?;
        if p.is_degenerate() {
            continue;
        }
        for f in [0.3, 0.8, 1.0, 1.3, 2.0] {
            let x = f * p.omega_a.sqrt();
            let d = (cdf_a_series(&p, x).map_err(err)? - cdf_a_quadrature(&p, x).map_err(err)?).abs();
            worst = worst.max(d);
            compared += 1;
        }
    }
    let msg = format!("{compared} points, max |diff| = {worst:e}");
    if worst <= 1e-7 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn dual_path_e2e() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xE2E);
    let mut worst = 0.0f64;
    let mut compared = 0;
    for _ in 0..SETS {
        let p = random_params(&mut rng)?;
        let s = MisalignmentStats::new(rng.gen_range(0.05..1.0), rng.gen_range(0.3..40.0)).map_err(err)?;
        if e2e_is_degenerate(&p, &s) {
            continue;
        }
        for f in [0.3, 1.0, 2.0] {
            let x = f * p.omega_a.sqrt() * s.b_o;
            let d = (cdf_ae2e_series(&p, &s, x).map_err(err)? - cdf_ae2e_quadrature(&p, &s, x).map_err(err)?).abs();
            worst = worst.max(d);
            compared += 1;
        }
    }
    let msg = format!("{compared} points, max |diff| = {worst:e}");
    if worst <= 1e-6 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn max_threshold_outage() -> Result<String, String> {
    let kg = KGParams::new(3.3, 1.2, 2.0).map_err(err)?;
    let hw = HardwareProfile::new(0.3, 0.3).map_err(err)?;
    for gamma in [1e-2, 1.0, 1e3, 1e12] {
        let v = op_exact(&OutageScenario::new(kg, None, hw, gamma, 6.0).map_err(err)?).map_err(err)?;
        if v != 1.0 {
            return Err(format!("gamma = {gamma}: OP = {v}"));
        }
    }
    Ok("OP = 1 for gamma_th = 6 > 1/0.18".into())
}

fn monotone_in_gamma() -> Result<String, String> {
    let kg = KGParams::new(4.7, 1.9, 5.0).map_err(err)?;
    let mut prev = f64::INFINITY;
    for i in 0..40 {
        let gamma = 10f64.powf(-1.0 + i as f64 * 0.1);
        let v = op_exact(&OutageScenario::new(kg, None, HardwareProfile::ideal(), gamma, 1.0).map_err(err)?)
            .map_err(err)?;
        if v > prev {
            return Err(format!("OP rises at gamma = {gamma}: {prev} -> {v}"));
        }
        prev = v;
    }
    Ok("40-point sweep nonincreasing".into())
}

/// Runs every check, printing one PASS/FAIL line each; true when all pass.
pub fn run(out: &mut impl Write) -> std::io::Result<bool> {
    let mut all = true;
    for (name, check) in CHECKS {
        match check() {
            Ok(detail) => writeln!(out, "PASS {name}: {detail}")?,
            Err(detail) => {
                all = false;
                writeln!(out, "FAIL {name}: {detail}")?
            }
        }
    }
    Ok(all)
}
