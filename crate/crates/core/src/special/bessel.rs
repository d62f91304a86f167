//! Modified Bessel function of the second kind for real order.
//!
//! The order is split as ν = n + μ with |μ| ≤ 1/2. `K_μ` and `K_{μ+1}` come
//! from Temme's series (x ≤ 2) or Steed's continued fraction (x > 2), and
//! forward recurrence — stable for K — climbs to `K_ν`. All work carries a
//! separate log-scale so that large orders at small x, or large x, neither
//! overflow nor underflow before the final exponentiation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Taylor coefficients of 1/Γ(z) = Σ_{k≥1} c_k z^k.
const RGAMMA_TAYLOR: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_86,
    -0.655_878_071_520_253_88,
    -0.042_002_635_034_095_236,
    0.166_538_611_382_291_49,
    -0.042_197_734_555_544_337,
    -0.009_621_971_527_876_973_6,
    0.007_218_943_246_663_099_5,
    -0.001_165_167_591_859_065_1,
    -0.000_215_241_674_114_950_97,
    0.000_128_050_282_388_116_19,
    -2.013_485_478_078_823_9e-5,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607_1e-7,
    6.116_095_104_481_415_8e-9,
    5.002_007_644_469_222_9e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071_3e-12,
    -3.696_805_618_642_205_7e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_8e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
];

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;
const RESCALE: f64 = 1e250;

/// Temme's auxiliary functions: (Γ₁(μ), Γ₂(μ), 1/Γ(1+μ), 1/Γ(1−μ)).
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ c_k μ^{k−1}, 1/Γ(1−μ) = Σ c_k (−μ)^{k−1}
    let mut gam1 = 0.0;
    let mut gam2 = 0.0;
    let mut pw = 1.0; // μ^{2j} for the pair (c_{2j+1}, c_{2j+2})
    for pair in RGAMMA_TAYLOR.chunks(2) {
        gam2 += pair[0] * pw;
        gam1 -= pair[1] * pw;
        pw *= mu * mu;
    }
    let rg_plus = gam2 - mu * gam1;
    let rg_minus = gam2 + mu * gam1;
    (gam1, gam2, rg_plus, rg_minus)
}

/// Returns (K_μ(x), K_{μ+1}(x), ln-scale) with K = value · exp(scale).
fn k_pair(mu: f64, x: f64) -> Result<(f64, f64, f64)> {
    if x <= 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        let mu2 = mu * mu;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            let del1 = c * (p - fi * ff);
            sum1 += del1;
            if del.abs() < sum.abs() * EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { what: "bessel_k series", iterations: MAX_ITER });
        }
        Ok((sum, sum1 * 2.0 / x, 0.0))
    } else {
        let mu2 = mu * mu;
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut h = d;
        let mut delh = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        let mut converged = false;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            a -= 2.0 * fi;
            c = -a * c / (fi + 1.0);
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { what: "bessel_k continued fraction", iterations: MAX_ITER });
        }
        h *= a1;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) / x;
        Ok((kmu, k1, -x))
    }
}

/// `ln K_ν(x)` for x > 0; never overflows.
pub fn ln_bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires finite x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain(format!("bessel_k requires a finite order, got {nu}")));
    }
    let nu = nu.abs();
    let n = (nu + 0.5).floor();
    let mu = nu - n;
    let (mut k0, mut k1, mut scale) = k_pair(mu, x)?;
    let two_over_x = 2.0 / x;
    for i in 1..=(n as usize) {
        let next = (mu + i as f64) * two_over_x * k1 + k0;
        k0 = k1;
        k1 = next;
        if k1 > RESCALE {
            k0 /= RESCALE;
            k1 /= RESCALE;
            scale += RESCALE.ln();
        }
    }
    Ok(k0.ln() + scale)
}

/// Modified Bessel function of the second kind `K_ν(x)`, x > 0.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    let lk = ln_bessel_k(nu, x)?;
    if lk > f64::MAX.ln() {
        return Err(Error::Overflow("bessel_k"));
    }
    Ok(lk.exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadOptions};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    // K_ν(x) = ∫₀^∞ exp(−x cosh t) cosh(νt) dt
    fn k_integral(nu: f64, x: f64) -> f64 {
        let upper = (2.0 * (60.0 + nu * 8.0) / x).acosh().max(1.0) + 2.0;
        let opts = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, ..QuadOptions::default() };
        integrate(|t| (-x * t.cosh() + nu * t).exp() * 0.5 * (1.0 + (-2.0 * nu * t).exp()), 0.0, upper, opts)
            .unwrap()
            .value
    }

    #[test]
    fn half_integer_closed_form() {
        let v = bessel_k(0.5, 1.0).unwrap();
        let exact = (PI / 2.0).sqrt() * (-1.0_f64).exp();
        assert!(rel(v, exact) < 1e-14);
        // K_{3/2}(x) = √(π/(2x)) e^{−x} (1 + 1/x)
        let x = 3.7;
        let exact = (PI / (2.0 * x)).sqrt() * (-x).exp() * (1.0 + 1.0 / x);
        assert!(rel(bessel_k(1.5, x).unwrap(), exact) < 1e-13);
    }

    #[test]
    fn symmetric_in_order() {
        for &(nu, x) in &[(0.3, 0.2), (2.7, 5.0), (11.1, 40.0)] {
            assert_eq!(bessel_k(-nu, x).unwrap(), bessel_k(nu, x).unwrap());
        }
    }

    #[test]
    fn reference_values() {
        // 30-digit references
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), 0.421_024_438_240_708_333_335_627_379_213) < 1e-13);
        assert!(rel(bessel_k(1.0, 2.0).unwrap(), 0.139_865_881_816_522_427_284_598_807_035) < 1e-13);
        assert!(rel(bessel_k(0.0, 2.0).unwrap(), 0.113_893_872_749_533_435_652_719_574_932) < 1e-13);
        assert!(rel(bessel_k(7.25, 3.3).unwrap(), 10.062_993_861_132_049_529_623_447_817_5) < 1e-12);
        assert!(rel(bessel_k(20.5, 700.0).unwrap(), 6.303_180_387_379_731_869_507_544_505_19e-306) < 1e-10);
        let lk = ln_bessel_k(146.3, 1e-6).unwrap();
        let lref = 1.242_612_525_755_835_937_652_870_584_61_f64.ln() + 1174.0 * 10f64.ln();
        assert!((lk - lref).abs() < 1e-10 * lref);
        assert_eq!(bessel_k(146.3, 1e-6), Err(Error::Overflow("bessel_k")));
    }

    #[test]
    fn integral_representation_oracle() {
        assert!(rel(bessel_k(0.0, 1.0).unwrap(), k_integral(0.0, 1.0)) < 1e-10);
        for &nu in &[0.0, 0.25, 0.5, 1.0, 2.3, 7.9, 20.0, 49.5] {
            for &x in &[1e-3, 0.1, 1.0, 1.99, 2.01, 5.0, 30.0, 200.0] {
                let exact = k_integral(nu, x);
                if !(exact.is_finite() && exact > 1e-300 && exact < 1e300) {
                    continue;
                }
                let v = bessel_k(nu, x).unwrap();
                assert!(rel(v, exact) < 1e-10, "nu={nu} x={x}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(bessel_k(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_k(1.0, -1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn decreasing_in_x() {
        for &nu in &[0.0, 0.4, 3.3, 25.0] {
            let mut prev = f64::INFINITY;
            for i in 1..400 {
                let x = i as f64 * 0.05;
                let v = ln_bessel_k(nu, x).unwrap();
                assert!(v < prev);
                prev = v;
            }
        }
    }
}
