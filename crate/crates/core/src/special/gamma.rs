use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_741_780_329_736_4;

/// Largest argument for which Γ(x) is finite in f64.
const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// `sin(πx)` with exact zeros at the integers and argument reduction mod 2.
pub fn sin_pi(x: f64) -> f64 {
    if x.fract() == 0.0 {
        return 0.0;
    }
    let r = x.rem_euclid(2.0);
    if r <= 0.25 {
        (PI * r).sin()
    } else if r <= 0.75 {
        (PI * (0.5 - r)).cos()
    } else if r <= 1.25 {
        (PI * (1.0 - r)).sin()
    } else if r <= 1.75 {
        -(PI * (r - 1.5)).cos()
    } else {
        (PI * (r - 2.0)).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

// Lanczos for x >= 0.5; the power is split so that t^(z+1/2) does not overflow near 171.
fn gamma_lanczos(x: f64) -> f64 {
    let z = x - 1.0;
    let mut a = LANCZOS[0];
    let t = z + LANCZOS_G + 0.5;
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + i as f64);
    }
    let h = t.powf(0.5 * (z + 0.5));
    (2.0 * PI).sqrt() * h * (h * (-t).exp()) * a
}

/// The Gamma function Γ(x).
///
/// Exact factorials are used at positive integers, the Stirling series for
/// `x ≥ 10`, Lanczos (g = 7) on `[1/2, 10)` and the reflection formula below.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow("gamma"));
    }
    if x.fract() == 0.0 && x <= 171.0 {
        let n = x as u32;
        return Ok((1..n).fold(1.0, |acc, k| acc * k as f64));
    }
    if x >= 10.0 {
        return Ok(gamma_stirling(x));
    }
    if x >= 0.5 {
        return Ok(gamma_lanczos(x));
    }
    // Γ(x) Γ(1 − x) = π / sin(πx)
    if 1.0 - x > GAMMA_MAX_ARG {
        // |Γ(x)| underflows gracefully for very negative non-integers.
        let (lg, sign) = ln_gamma_signed(x)?;
        return Ok(sign * lg.exp());
    }
    let v = PI / (sin_pi(x) * gamma_lanczos(1.0 - x));
    if !v.is_finite() {
        return Err(Error::Overflow("gamma"));
    }
    Ok(v)
}

// Γ(x) = √(2π) x^{x−1/2} e^{−x} e^{S(x)}, x ≥ 10, with the power split to avoid overflow.
fn gamma_stirling(x: f64) -> f64 {
    let h = x.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * h * (h * (-x).exp()) * stirling_correction(x).exp()
}

// S(x) = Σ B_{2j} / (2j(2j−1) x^{2j−1}); truncation error below 1e-17 for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    r * (1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0 + r2 * (1.0 / 1188.0 + r2 * (-691.0 / 360_360.0 + r2 / 156.0))))))
}

fn ln_gamma_stirling(x: f64) -> f64 {
    (x - 0.5) * x.ln() - x + LN_SQRT_2PI + stirling_correction(x)
}

/// `(ln|Γ(x)|, sign Γ(x))` for any finite non-pole `x`.
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of non-finite argument {x}")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x >= 10.0 {
        return Ok((ln_gamma_stirling(x), 1.0));
    }
    if x > 0.0 {
        return Ok((gamma_lanczos_or_exact(x).ln(), 1.0));
    }
    let s = sin_pi(x);
    let (lg, _) = ln_gamma_signed(1.0 - x)?;
    Ok(((PI / s.abs()).ln() - lg, s.signum()))
}

fn gamma_lanczos_or_exact(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos argument in its accurate range.
        gamma_lanczos(x + 1.0) / x
    } else if x.fract() == 0.0 {
        (1..x as u32).fold(1.0, |acc, k| acc * k as f64)
    } else {
        gamma_lanczos(x)
    }
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    ln_gamma_signed(x).map(|(v, _)| v)
}
