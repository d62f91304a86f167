//! Arbitrary-precision helpers for series that cancel catastrophically.
//!
//! The CDF expansions of the generalized-K family are differences of
//! ₁F₂ series whose individual terms can exceed the result by thirty or more
//! orders of magnitude. They are summed here in binary floating point of
//! adaptively chosen precision: every evaluation also reports the total
//! absolute mass it summed, which bounds the accumulated rounding error, and
//! [`adaptive_eval`] raises the precision until that bound is negligible
//! against the result.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};

use crate::error::{Error, Result};

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Number of Bernoulli numbers B₂ … B_{2J} used by the Stirling series.
const STIRLING_TERMS: usize = 300;

/// Precision ceiling (bits) for [`adaptive_eval`].
pub const MAX_PRECISION: usize = 4096;

/// Relative accuracy demanded of an adaptive evaluation.
const TARGET_REL: f64 = 1e-13;

/// Converts to the nearest `f64` (flushing to 0 / ±∞ outside its range).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf() {
        return if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
    }
    let (words, _, sign, e, _) = x.as_raw_parts().expect("finite value has raw parts");
    let top = *words.last().expect("mantissa has at least one word");
    let second = if words.len() > 1 { words[words.len() - 2] } else { 0 };
    // 0.m × 2^e with the leading word holding the top 64 bits
    let hi = top as f64 + second as f64 / 18_446_744_073_709_551_616.0;
    let v = ldexp(hi, e as i64 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(k as i32)
}

/// Base-2 logarithm of |x| to within about one unit (the binary exponent).
pub fn log2_abs(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (words, _, _, e, _) = x.as_raw_parts().expect("finite value has raw parts");
    let top = *words.last().expect("mantissa has at least one word") as f64;
    e as f64 - 64.0 + top.log2()
}

/// Exact conversion of an `f64` (every finite double is representable).
pub fn from_f64(x: f64, p: usize) -> BigFloat {
    BigFloat::from_f64(x, p.max(64))
}

fn from_biguint(n: &BigUint) -> BigFloat {
    let words: Vec<Word> = n.to_u64_digits();
    if words.is_empty() {
        return BigFloat::from_u64(0, 64);
    }
    let e = (words.len() * 64) as i32;
    BigFloat::from_words(&words, Sign::Pos, e)
}

fn from_bigint(n: &BigInt) -> BigFloat {
    let mut v = from_biguint(n.magnitude());
    if n.sign() == num_bigint::Sign::Minus {
        v.inv_sign();
    }
    v
}

/// Bernoulli numbers B_{2n}, n = 1..=STIRLING_TERMS, as exact rationals,
/// from the tangent numbers: B_{2n} = (−1)^{n−1} 2n T_n / (4ⁿ (4ⁿ − 1)).
fn bernoulli_rationals() -> &'static [(BigInt, BigInt)] {
    static CELL: OnceLock<Vec<(BigInt, BigInt)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let n = STIRLING_TERMS;
        let mut t: Vec<BigUint> = vec![BigUint::from(0u32); n + 1];
        t[1] = BigUint::from(1u32);
        for k in 2..=n {
            t[k] = &t[k - 1] * BigUint::from((k - 1) as u64);
        }
        for k in 2..=n {
            for j in k..=n {
                t[j] = &t[j - 1] * BigUint::from((j - k) as u64) + &t[j] * BigUint::from((j - k + 2) as u64);
            }
        }
        (1..=n)
            .map(|k| {
                let four_k = BigUint::from(1u32) << (2 * k);
                let den = &four_k * (&four_k - BigUint::from(1u32));
                let num = BigInt::from(&t[k] * BigUint::from(2 * k as u64));
                let num = if k % 2 == 1 { num } else { -num };
                (num, BigInt::from(den))
            })
            .collect()
    })
}

/// Stirling coefficients B_{2j} / (2j (2j − 1)) at precision `p`, cached per precision.
fn stirling_coefficients(p: usize) -> Arc<Vec<BigFloat>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<BigFloat>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("coefficient cache poisoned").get(&p) {
        return Arc::clone(v);
    }
    let coeffs: Vec<BigFloat> = bernoulli_rationals()
        .iter()
        .enumerate()
        .map(|(idx, (num, den))| {
            let j = (idx + 1) as u64;
            let den = den * BigInt::from(2 * j * (2 * j - 1));
            from_bigint(num).div(&from_bigint(&den), p, RM)
        })
        .collect();
    let coeffs = Arc::new(coeffs);
    cache.lock().expect("coefficient cache poisoned").insert(p, Arc::clone(&coeffs));
    coeffs
}

/// ln Γ(z) for real z ≥ 1/2, via upward shift and the Stirling series.
fn ln_gamma_positive(z: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let j = STIRLING_TERMS as f64;
    let log2_fact = crate::special::ln_gamma(2.0 * j + 1.0).expect("finite") / std::f64::consts::LN_2;
    let z_min = ((log2_fact + p as f64) / (2.0 * j)).exp2() / (2.0 * std::f64::consts::PI);
    let z_f = to_f64(z);
    let shift = if z_f < z_min { (z_min - z_f).ceil() as u64 } else { 0 };

    let mut zs = z.clone();
    let mut prod = BigFloat::from_u64(1, p);
    for _ in 0..shift {
        prod = prod.mul(&zs, p, RM);
        zs = zs.add(&BigFloat::from_u64(1, p), p, RM);
    }

    let half = BigFloat::from_f64(0.5, p);
    let ln_z = zs.ln(p, RM, cc);
    let two_pi = cc.pi(p, RM).mul(&BigFloat::from_u64(2, p), p, RM);
    let mut acc = zs.sub(&half, p, RM).mul(&ln_z, p, RM);
    acc = acc.sub(&zs, p, RM);
    acc = acc.add(&two_pi.ln(p, RM, cc).mul(&half, p, RM), p, RM);

    let coeffs = stirling_coefficients(p);
    let inv = BigFloat::from_u64(1, p).div(&zs, p, RM);
    let inv2 = inv.mul(&inv, p, RM);
    let mut pw = inv;
    let floor = log2_abs(&acc).max(0.0) - p as f64 - 8.0;
    for c in coeffs.iter() {
        let term = c.mul(&pw, p, RM);
        acc = acc.add(&term, p, RM);
        if log2_abs(&term) < floor {
            break;
        }
        pw = pw.mul(&inv2, p, RM);
    }
    if shift > 0 {
        acc = acc.sub(&prod.ln(p, RM, cc), p, RM);
    }
    acc
}

/// Γ(x) at precision `p` for any finite real `x` that is not a pole.
pub fn gamma(x: &BigFloat, p: usize, cc: &mut Consts) -> Result<BigFloat> {
    let xf = to_f64(x);
    if !xf.is_finite() {
        return Err(Error::Domain(format!("extended gamma of non-finite argument {xf}")));
    }
    if x.is_int() && !x.is_positive() {
        return Err(Error::Pole(xf));
    }
    let pw = p + 64 + (xf.abs().max(2.0).log2() as usize) * 2;
    if xf >= 0.5 {
        return Ok(ln_gamma_positive(x, pw, cc).exp(pw, RM, cc));
    }
    // Γ(x) = π / (sin(πx) Γ(1 − x)); reduce x mod 2 exactly before the sine.
    let two = BigFloat::from_u64(2, pw);
    let k = x.div(&two, pw, RM).round(0, RoundingMode::ToEven);
    let reduced = x.sub(&k.mul(&two, pw, RM), pw, RM);
    let pi = cc.pi(pw, RM);
    let s = pi.mul(&reduced, pw, RM).sin(pw, RM, cc);
    let one_minus = BigFloat::from_u64(1, pw).sub(x, pw, RM);
    let g = ln_gamma_positive(&one_minus, pw, cc).exp(pw, RM, cc);
    Ok(pi.div(&s.mul(&g, pw, RM), pw, RM))
}

/// `base^e` for positive `base`.
pub fn powf(base: &BigFloat, e: &BigFloat, p: usize, cc: &mut Consts) -> BigFloat {
    let pw = p + 32;
    base.ln(pw, RM, cc).mul(e, pw, RM).exp(pw, RM, cc)
}

/// Value and total absolute mass of a summed series.
#[derive(Debug, Clone)]
pub struct SeriesSum {
    pub value: BigFloat,
    pub mass: BigFloat,
    pub terms: usize,
}

/// `₁F₂(a; b1, b2; z)` summed at precision `p`, with the absolute mass Σ|tₙ|.
///
/// Terminates once a term is negligible against the accumulated mass and the
/// term ratio has dropped below one half (so the tail is geometrically bounded).
pub fn hyp1f2(
    a: &BigFloat,
    b1: &BigFloat,
    b2: &BigFloat,
    z: &BigFloat,
    p: usize,
    max_terms: usize,
) -> Result<SeriesSum> {
    let mut term = BigFloat::from_u64(1, p);
    let mut sum = term.clone();
    let mut mass = term.clone();
    let half = BigFloat::from_f64(0.5, 64);
    for n in 0..max_terms as u64 {
        let nb = BigFloat::from_u64(n, 64);
        let num = a.add(&nb, p, RM).mul(z, p, RM);
        let den = b1.add(&nb, p, RM).mul(&b2.add(&nb, p, RM), p, RM).mul(&BigFloat::from_u64(n + 1, 64), p, RM);
        if den.is_zero() {
            return Err(Error::Domain("1F2 lower parameter hits a non-positive integer".into()));
        }
        let ratio = num.div(&den, p, RM);
        term = term.mul(&ratio, p, RM);
        if term.is_zero() {
            return Ok(SeriesSum { value: sum, mass, terms: n as usize + 1 });
        }
        sum = sum.add(&term, p, RM);
        mass = mass.add(&term.abs(), p, RM);
        let negligible = log2_abs(&term) < log2_abs(&mass) - p as f64 - 8.0;
        if negligible && ratio.abs().cmp(&half) == Some(-1) {
            return Ok(SeriesSum { value: sum, mass, terms: n as usize + 1 });
        }
    }
    Err(Error::NoConvergence { what: "extended-precision 1F2", iterations: max_terms })
}

/// One evaluation of a cancelling expression at a given precision:
/// its value, log₂ of the absolute mass summed, and the number of
/// series terms behind it (drives the rounding-error model).
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub value: BigFloat,
    pub log2_mass: f64,
    pub terms: usize,
}

/// Re-evaluates `eval` at rising precision until the rounding bound
/// `mass · 16(terms + 64) · 2^{−p}` is below `1e-13 · |value|`.
///
/// Fails with [`Error::PrecisionExhausted`] once the required precision
/// would exceed [`MAX_PRECISION`].
pub fn adaptive_eval<F>(mut eval: F) -> Result<f64>
where
    F: FnMut(usize, &mut Consts) -> Result<Evaluation>,
{
    let mut cc = Consts::new().map_err(|e| Error::Domain(format!("constant cache: {e:?}")))?;
    let mut p = 128;
    loop {
        let ev = eval(p, &mut cc)?;
        let v = to_f64(&ev.value);
        let log2_err = ev.log2_mass + (16.0 * (ev.terms as f64 + 64.0)).log2() - p as f64;
        // a zero or non-finite value is never accepted: it is rounding noise
        let log2_target =
            if v == 0.0 || !v.is_finite() { f64::NEG_INFINITY } else { v.abs().log2() + TARGET_REL.log2() };
        if log2_err <= log2_target {
            return Ok(v);
        }
        let deficit = if v == 0.0 || !v.is_finite() || log2_target < log2_err - 2.0 * p as f64 {
            // value is rounding noise: aim for the mass scale first
            (ev.log2_mass - p as f64).max(0.0) + 64.0
        } else {
            log2_err - log2_target
        };
        let next = p + (deficit.ceil() as usize).max(32) + 16;
        if next > MAX_PRECISION {
            return Err(Error::PrecisionExhausted { bits: next });
        }
        p = next.div_ceil(64) * 64;
    }
}
