//! Beam footprint geometry and UAV disorientation/misalignment statistics.
//!
//! The geometric loss `h_g` of a Gaussian beam caught by a circular aperture
//! under random position/orientation jitter has density
//! `f(x) = (ζ/B_o)(x/B_o)^{ζ−1}` on `[0, B_o]`. This module derives `B_o`
//! and `ζ` from the physical configuration, and the average SNR `γ` from the
//! link budget.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::erf;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Physical RIS→UAV configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    /// RIS→UAV distance, m.
    pub l2: f64,
    /// Beam-waist radius, m.
    pub w_o: f64,
    /// Carrier frequency, Hz.
    pub f: f64,
    /// Refraction structure parameter C_n², m^(−2/3).
    pub cn2: f64,
    /// Receiver effective-area radius, m.
    pub alpha: f64,
    /// Mean azimuth angle, rad.
    pub theta: f64,
    /// Mean polar angle, rad.
    pub phi: f64,
    /// Position-jitter standard deviation (per axis).
    pub sigma_p: f64,
    /// Orientation-jitter standard deviation, rad.
    pub sigma_o: f64,
    /// Mean x-offset entering ζ, m.
    pub d_x: f64,
}

impl Default for GeometryConfig {
    /// L2 = 5 m, w_o = 1 mm, f = 100 GHz, C_n² = 2.3e−9, α = 10 cm,
    /// θ = 7π/4, φ = 2π/3, σ_p = 0.05, σ_o = d_x = 0.
    fn default() -> Self {
        Self {
            l2: 5.0,
            w_o: 1e-3,
            f: 100e9,
            cn2: 2.3e-9,
            alpha: 0.1,
            theta: 7.0 * std::f64::consts::FRAC_PI_4,
            phi: 2.0 * std::f64::consts::FRAC_PI_3,
            sigma_p: 0.05,
            sigma_o: 0.0,
            d_x: 0.0,
        }
    }
}

impl GeometryConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [("l2", self.l2), ("w_o", self.w_o), ("f", self.f), ("alpha", self.alpha)];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("geometry field {name} must be positive, got {v}")));
            }
        }
        let non_negative = [("cn2", self.cn2), ("sigma_p", self.sigma_p), ("sigma_o", self.sigma_o)];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("geometry field {name} must be non-negative, got {v}")));
            }
        }
        if !(self.theta.is_finite() && self.phi.is_finite() && self.d_x.is_finite()) {
            return Err(Error::Domain("geometry angles and offset must be finite".into()));
        }
        Ok(())
    }

    /// Wavenumber `2πf/c`.
    pub fn wavenumber(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.f / SPEED_OF_LIGHT
    }

    /// Jitter variance `4σ_p² + 4d_x²σ_o²` in the denominator of ζ.
    pub fn jitter_variance(&self) -> f64 {
        4.0 * self.sigma_p * self.sigma_p + 4.0 * self.d_x * self.d_x * self.sigma_o * self.sigma_o
    }
}

/// Coherence length `ρ(L2) = (0.55 C_n² k² L2)^{−3/5}`.
pub fn coherence_length(g: &GeometryConfig) -> Result<f64> {
    if g.cn2 == 0.0 {
        return Err(Error::Domain("coherence length is infinite without turbulence (cn2 = 0)".into()));
    }
    if !(g.cn2 > 0.0 && g.l2 > 0.0) {
        return Err(Error::Domain("coherence length needs cn2 > 0 and l2 > 0".into()));
    }
    let k = g.wavenumber();
    Ok((0.55 * g.cn2 * k * k * g.l2).powf(-0.6))
}

/// Beamwidth at the receiver,
/// `w(L2) = w_o √(1 + (1 + 2w_o²/ρ²)(c L2/(π f w_o²))²)`;
/// `cn2 = 0` takes the turbulence-free limit ρ → ∞.
pub fn beamwidth(g: &GeometryConfig) -> Result<f64> {
    g.validate()?;
    let turbulence = if g.cn2 == 0.0 {
        0.0
    } else {
        let rho = coherence_length(g)?;
        2.0 * g.w_o * g.w_o / (rho * rho)
    };
    let spread = SPEED_OF_LIGHT * g.l2 / (std::f64::consts::PI * g.f * g.w_o * g.w_o);
    Ok(g.w_o * (1.0 + (1.0 + turbulence) * spread * spread).sqrt())
}

/// Footprint intermediates kept for auditing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryTrace {
    pub w_l2: f64,
    /// Coherence length; `+∞` without turbulence.
    pub rho_l2: f64,
    pub rho_y: f64,
    pub rho_z: f64,
    pub rho_yz: f64,
    pub rho_min: f64,
    pub rho_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub k_m: f64,
}

/// Misalignment statistics `(B_o, ζ)` of the geometric loss `h_g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MisalignmentStats {
    /// Maximum geometric gain, in (0, 1].
    pub b_o: f64,
    /// Shape exponent ζ > 0.
    pub zeta: f64,
    /// Geometry intermediates when derived from a [`GeometryConfig`].
    pub trace: Option<GeometryTrace>,
}

impl MisalignmentStats {
    /// Statistics given directly by `(B_o, ζ)`.
    pub fn new(b_o: f64, zeta: f64) -> Result<Self> {
        if !(b_o > 0.0 && b_o <= 1.0) {
            return Err(Error::Domain(format!("B_o must lie in (0, 1], got {b_o}")));
        }
        if !(zeta > 0.0 && zeta.is_finite()) {
            return Err(Error::Domain(format!("zeta must be positive and finite, got {zeta}")));
        }
        Ok(Self { b_o, zeta, trace: None })
    }

    /// CDF of `h_g`: `(x/B_o)^ζ` on `[0, B_o]`.
    pub fn hg_cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else if x >= self.b_o {
            1.0
        } else {
            (x / self.b_o).powf(self.zeta)
        }
    }

    /// Mean of `h_g`, `B_o ζ/(ζ + 1)`.
    pub fn hg_mean(&self) -> f64 {
        self.b_o * self.zeta / (self.zeta + 1.0)
    }
}

// k_i = √π ρ_i erf(v_i) / (2 v_i e^{−v_i²})
fn k_factor(rho: f64, v: f64) -> f64 {
    std::f64::consts::PI.sqrt() * rho * erf(v) / (2.0 * v * (-v * v).exp())
}

/// Derives `(B_o, ζ)` and all footprint intermediates.
pub fn misalignment_stats(g: &GeometryConfig) -> Result<MisalignmentStats> {
    g.validate()?;
    let jitter = g.jitter_variance();
    if jitter == 0.0 {
        return Err(Error::DegenerateJitter);
    }
    let w = beamwidth(g)?;
    let rho_l2 = if g.cn2 == 0.0 { f64::INFINITY } else { coherence_length(g)? };
    let (sp, cp) = g.phi.sin_cos();
    let (st, ct) = g.theta.sin_cos();
    let rho_y = cp * cp + sp * sp * ct * ct;
    let rho_z = sp * sp;
    let rho_yz = -cp * sp * st;
    let disc = ((rho_y - rho_z).powi(2) + 4.0 * rho_yz * rho_yz).sqrt();
    let rho_min = 2.0 / (rho_y + rho_z + disc);
    // 2/(s − d) rewritten with s² − d² = 4(ρ_y ρ_z − ρ_yz²) = 4 sin²φ cos²θ to avoid cancellation
    let det = (sp * ct).powi(2);
    let rho_max = (rho_y + rho_z + disc) / (2.0 * det);
    if !(rho_max.is_finite() && rho_max > 0.0) {
        return Err(Error::Domain(format!(
            "beam footprint is degenerate at theta = {}, phi = {} (edge-on aperture)",
            g.theta, g.phi
        )));
    }
    let v = |rho: f64| g.alpha / w * (std::f64::consts::PI / (2.0 * rho)).sqrt();
    let v_min = v(rho_min);
    let v_max = v(rho_max);
    let b_o = erf(v_min) * erf(v_max);
    let k_min = k_factor(rho_min, v_min);
    let k_max = k_factor(rho_max, v_max);
    let k_m = 0.5 * (k_min + k_max);
    let zeta = k_m * w * w / jitter;
    if !(b_o > 0.0 && zeta > 0.0 && zeta.is_finite()) {
        return Err(Error::Domain(format!("geometry yields B_o = {b_o}, zeta = {zeta}")));
    }
    Ok(MisalignmentStats {
        b_o,
        zeta,
        trace: Some(GeometryTrace {
            w_l2: w,
            rho_l2,
            rho_y,
            rho_z,
            rho_yz,
            rho_min,
            rho_max,
            v_min,
            v_max,
            k_min,
            k_max,
            k_m,
        }),
    })
}

/// Density of `h_g`: `(ζ/B_o)(x/B_o)^{ζ−1}` on `[0, B_o]`, zero elsewhere.
pub fn hg_pdf(s: &MisalignmentStats, x: f64) -> f64 {
    if x < 0.0 || x > s.b_o {
        return 0.0;
    }
    if x == 0.0 {
        return match s.zeta {
            z if z < 1.0 => f64::INFINITY,
            1.0 => 1.0 / s.b_o,
            _ => 0.0,
        };
    }
    let u = x / s.b_o;
    s.zeta / s.b_o * ((s.zeta - 1.0) * u.ln()).exp()
}

/// Inverse-CDF draw `B_o U^{1/ζ}`, `U ~ Uniform(0, 1]`.
pub fn sample_hg<R: Rng + ?Sized>(s: &MisalignmentStats, rng: &mut R) -> f64 {
    let u = 1.0 - rng.gen::<f64>();
    hg_from_uniform(s, u)
}

/// The inverse CDF of `h_g` at `u ∈ (0, 1]`.
pub fn hg_from_uniform(s: &MisalignmentStats, u: f64) -> f64 {
    s.b_o * u.powf(1.0 / s.zeta)
}

/// Link budget of the two hops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub l1: f64,
    pub l2: f64,
    pub n1: f64,
    pub n2: f64,
    /// S→RIS distance, m.
    pub dist1: f64,
    /// RIS→UAV distance, m.
    pub dist2: f64,
    /// Transmit power, W.
    pub p_s: f64,
    /// Noise power, W.
    pub sigma_w2: f64,
}

/// Average SNR `γ = (l₁² L₁^{−n₁})(l₂² L₂^{−n₂}) P_s / σ_w²`.
pub fn average_snr(lb: &LinkBudget) -> f64 {
    let h1 = lb.l1 * lb.l1 * lb.dist1.powf(-lb.n1);
    let h2 = lb.l2 * lb.l2 * lb.dist2.powf(-lb.n2);
    h1 * h2 * lb.p_s / lb.sigma_w2
}
