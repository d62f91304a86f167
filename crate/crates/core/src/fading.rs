//! Mixture-Gamma (MG) envelope distributions.
//!
//! An MG envelope has density `f(x) = Σ_m 2 a_m x^{2b_m − 1} e^{−c x²}` with
//! a common rate `c`; its squared value is a mixture of Gamma laws with
//! shapes `b_m` and rate `c`, mixed with probabilities `a_m Γ(b_m) c^{−b_m}`.

use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_bessel_k, ln_gamma};

/// Largest accepted Rice expansion length (factorials beyond this lose range).
pub const MAX_RICE_TERMS: usize = 60;

/// One mixture component: weight coefficient `a` and shape `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MGTerm {
    pub a: f64,
    pub b: f64,
}

/// Mixture-Gamma envelope law with a common rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MGDistribution {
    terms: Vec<MGTerm>,
    rate: f64,
    label: String,
}

impl MGDistribution {
    /// Validates positivity and the normalization `Σ a Γ(b) c^{−b} = 1` (to 1e-9).
    pub fn new(terms: Vec<MGTerm>, rate: f64, label: impl Into<String>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Domain("mixture-Gamma law needs at least one term".into()));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::Domain(format!("mixture-Gamma rate must be positive, got {rate}")));
        }
        for t in &terms {
            if !(t.a > 0.0 && t.b > 0.0 && t.a.is_finite() && t.b.is_finite()) {
                return Err(Error::Domain(format!("mixture-Gamma term {t:?} is not strictly positive")));
            }
        }
        let d = Self { terms, rate, label: label.into() };
        let total = d.normalization();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("mixture-Gamma weights sum to {total}, not 1")));
        }
        Ok(d)
    }

    /// Nakagami-m envelope with spread Ω: one term, `a = (m/Ω)^m/Γ(m)`, `b = m`, `c = m/Ω`.
    pub fn from_nakagami(m: f64, omega: f64) -> Result<Self> {
        if !(m >= 0.5 && m.is_finite()) {
            return Err(Error::Domain(format!("Nakagami m must be at least 0.5, got {m}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("Nakagami spread must be positive, got {omega}")));
        }
        let rate = m / omega;
        let a = (m * rate.ln() - ln_gamma(m)?).exp();
        Self::new(vec![MGTerm { a, b: m }], rate, format!("Nakagami(m={m}, omega={omega})"))
    }

    /// Rice envelope (unit mean power) with linear K-factor `k_r`, expanded into
    /// `n_terms` Gamma components with `b_k = k` and `c = 1 + k_r`.
    ///
    /// Component weights follow `δ_k = K^{k−1}(1+K)^k / (e^K ((k−1)!)²)`,
    /// renormalized over the retained terms; zero-weight components (all
    /// `k > 1` when `k_r = 0`) are dropped.
    pub fn from_rice(k_r: f64, n_terms: usize) -> Result<Self> {
        if !(k_r >= 0.0 && k_r.is_finite()) {
            return Err(Error::Domain(format!("Rice K-factor must be non-negative, got {k_r}")));
        }
        if n_terms == 0 {
            return Err(Error::Domain("Rice expansion needs at least one term".into()));
        }
        if n_terms > MAX_RICE_TERMS {
            return Err(Error::Overflow("Rice expansion with more than 60 terms"));
        }
        let rate = 1.0 + k_r;
        let mut log_delta = Vec::with_capacity(n_terms);
        for k in 1..=n_terms {
            let kf = k as f64;
            if k_r == 0.0 && k > 1 {
                break;
            }
            let lk = if k == 1 { 0.0 } else { (kf - 1.0) * k_r.ln() };
            log_delta.push((kf, lk + kf * rate.ln() - k_r - 2.0 * ln_gamma(kf)?));
        }
        // denominator Σ δ_k Γ(b_k) c^{−b_k}, accumulated relative to the largest term
        let log_mass: Vec<f64> =
            log_delta.iter().map(|&(b, ld)| Ok(ld + ln_gamma(b)? - b * rate.ln())).collect::<Result<_>>()?;
        let peak = log_mass.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let log_denominator = peak + log_mass.iter().map(|l| (l - peak).exp()).sum::<f64>().ln();
        let terms = log_delta
            .iter()
            .map(|&(b, ld)| MGTerm { a: (ld - log_denominator).exp(), b })
            .filter(|t| t.a > 0.0)
            .collect();
        Self::new(terms, rate, format!("Rice(K={k_r}, terms={n_terms})"))
    }

    /// Rayleigh envelope with unit mean power.
    pub fn rayleigh() -> Self {
        Self { terms: vec![MGTerm { a: 1.0, b: 1.0 }], rate: 1.0, label: "Rayleigh".into() }
    }

    pub fn terms(&self) -> &[MGTerm] {
        &self.terms
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Mixture probabilities `a_m Γ(b_m) c^{−b_m}`.
    pub fn weights(&self) -> Vec<f64> {
        self.terms.iter().map(|t| (t.a.ln() + ln_gamma(t.b).expect("b > 0") - t.b * self.rate.ln()).exp()).collect()
    }

    /// `Σ a Γ(b) c^{−b}`; equals 1 for every constructed distribution.
    pub fn normalization(&self) -> f64 {
        self.weights().iter().sum()
    }

    /// Envelope density `Σ 2 a x^{2b−1} e^{−c x²}`.
    pub fn envelope_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if x == 0.0 {
            return self
                .terms
                .iter()
                .map(|t| match t.b {
                    b if b < 0.5 => f64::INFINITY,
                    0.5 => 2.0 * t.a,
                    _ => 0.0,
                })
                .sum();
        }
        let lx = x.ln();
        self.terms.iter().map(|t| (2.0 * t.a).ln() + (2.0 * t.b - 1.0) * lx - self.rate * x * x).map(f64::exp).sum()
    }

    /// Envelope moment `E[xⁿ] = Σ a Γ(b + n/2) c^{−b−n/2}` for real `n > −2 min b`.
    pub fn moment(&self, n: f64) -> Result<f64> {
        let mut total = 0.0;
        for t in &self.terms {
            let s = t.b + 0.5 * n;
            let v = (t.a.ln() + ln_gamma(s)? - s * self.rate.ln()).exp();
            if !v.is_finite() {
                return Err(Error::Overflow("mixture-Gamma moment"));
            }
            total += v;
        }
        Ok(total)
    }

    /// Mean power `E[x²]`.
    pub fn mean_power(&self) -> f64 {
        self.moment(2.0).expect("second moment is finite")
    }

    /// Precomputed exact sampler (component pick, then a Gamma draw).
    pub fn sampler(&self) -> EnvelopeSampler {
        let weights = self.weights();
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let cumulative = weights
            .iter()
            .map(|w| {
                acc += w / total;
                acc
            })
            .collect();
        let gammas = self
            .terms
            .iter()
            .map(|t| Gamma::new(t.b, 1.0 / self.rate).expect("shape and scale are positive"))
            .collect();
        EnvelopeSampler { cumulative, gammas }
    }

    /// Draws one envelope sample. Prefer [`MGDistribution::sampler`] in loops.
    pub fn sample_envelope<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.sampler().sample(rng)
    }
}

/// Exact MG envelope sampler: picks component `m` with probability
/// `a_m Γ(b_m) c^{−b_m}`, draws `|h|² ~ Gamma(b_m, rate c)` and returns `|h|`.
#[derive(Debug, Clone)]
pub struct EnvelopeSampler {
    cumulative: Vec<f64>,
    gammas: Vec<Gamma<f64>>,
}

impl Distribution<f64> for EnvelopeSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let idx = if self.gammas.len() == 1 {
            0
        } else {
            let u: f64 = rng.gen();
            self.cumulative.iter().position(|&c| u < c).unwrap_or(self.gammas.len() - 1)
        };
        self.gammas[idx].sample(rng).sqrt()
    }
}

/// `E[(|h||g|)ⁿ]` for independent envelopes: the product of single moments,
/// `Σ_m Σ_k a_m a_k Γ(b_m + n/2) Γ(b_k + n/2) c₁^{−b_m−n/2} c₂^{−b_k−n/2}`.
pub fn product_moment(d1: &MGDistribution, d2: &MGDistribution, n: u32) -> Result<f64> {
    let v = d1.moment(n as f64)? * d2.moment(n as f64)?;
    if !v.is_finite() {
        return Err(Error::Overflow("product moment"));
    }
    Ok(v)
}

/// Density of `χ = |h||g|`: a mixture of generalized-K densities,
/// `Σ 4 a_m a_k (c₂/c₁)^{(b_m−b_k)/2} x^{b_m+b_k−1} K_{b_m−b_k}(2√(c₁c₂) x)`.
pub fn product_pdf(d1: &MGDistribution, d2: &MGDistribution, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("product density requires x > 0, got {x}")));
    }
    let (c1, c2) = (d1.rate, d2.rate);
    let arg = 2.0 * (c1 * c2).sqrt() * x;
    let lx = x.ln();
    let mut total = 0.0;
    for t1 in &d1.terms {
        for t2 in &d2.terms {
            let nu = t1.b - t2.b;
            let l =
                (4.0 * t1.a * t2.a).ln() + 0.5 * nu * (c2 / c1).ln() + (t1.b + t2.b - 1.0) * lx + ln_bessel_k(nu, arg)?;
            total += l.exp();
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const RICE_5DB: f64 = 3.162_277_660_168_379_5;

    #[test]
    fn nakagami_mapping() {
        let d = MGDistribution::from_nakagami(1.0, 1.0).unwrap();
        assert_eq!(d.terms(), &[MGTerm { a: 1.0, b: 1.0 }]);
        assert_eq!(d.rate(), 1.0);
        let d = MGDistribution::from_nakagami(3.0, 1.0).unwrap();
        assert!((d.terms()[0].a - 13.5).abs() < 1e-12);
        assert_eq!(d.terms()[0].b, 3.0);
        assert_eq!(d.rate(), 3.0);
        assert!((d.normalization() - 1.0).abs() < 1e-12);
        assert!((MGDistribution::from_nakagami(2.5, 3.0).unwrap().mean_power() - 3.0).abs() < 1e-12);
        assert!(MGDistribution::from_nakagami(0.4, 1.0).is_err());
        assert!(MGDistribution::from_nakagami(1.0, 0.0).is_err());
    }

    #[test]
    fn rice_mapping() {
        let d = MGDistribution::from_rice(0.0, 20).unwrap();
        assert_eq!(d.terms().len(), 1);
        assert!((d.terms()[0].a - 1.0).abs() < 1e-15);
        assert_eq!(d.rate(), 1.0);
        let d = MGDistribution::from_rice(RICE_5DB, 20).unwrap();
        assert_eq!(d.terms().len(), 20);
        assert!((d.normalization() - 1.0).abs() < 1e-9);
        assert!(d.terms().iter().all(|t| t.a > 0.0));
        assert!((d.mean_power() - 1.0).abs() < 1e-6);
        assert!(MGDistribution::from_rice(-1.0, 20).is_err());
        assert_eq!(MGDistribution::from_rice(1.0, 61), Err(Error::Overflow("Rice expansion with more than 60 terms")));
    }

    #[test]
    fn envelope_density_values() {
        let d = MGDistribution::rayleigh();
        assert_eq!(d.envelope_pdf(0.0), 0.0);
        assert!((d.envelope_pdf(1.0) - 2.0 / std::f64::consts::E).abs() < 1e-15);
        assert!(d.envelope_pdf(40.0) < 1e-300);
    }

    #[test]
    fn rayleigh_product_moments() {
        let r = MGDistribution::rayleigh();
        assert!((product_moment(&r, &r, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((product_moment(&r, &r, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((product_moment(&r, &r, 1).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn double_rayleigh_product_density() {
        let r = MGDistribution::rayleigh();
        for &x in &[0.1, 0.5, 1.0, 2.5] {
            let expect = 4.0 * x * crate::special::bessel_k(0.0, 2.0 * x).unwrap();
            assert!((product_pdf(&r, &r, x).unwrap() - expect).abs() < 1e-14 * expect.max(1.0));
        }
    }

    #[test]
    fn sampler_is_deterministic() {
        let d = MGDistribution::from_rice(RICE_5DB, 20).unwrap();
        let s = d.sampler();
        let a: Vec<f64> = (&s).sample_iter(ChaCha8Rng::seed_from_u64(7)).take(16).collect();
        let b: Vec<f64> = (&s).sample_iter(ChaCha8Rng::seed_from_u64(7)).take(16).collect();
        assert_eq!(a, b);
    }
}
