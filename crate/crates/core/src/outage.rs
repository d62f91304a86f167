//! Outage probability of the RIS-assisted link.
//!
//! All four cases (ideal or impaired transceivers, with or without
//! disorientation/misalignment) reduce to one CDF evaluation:
//! `OP = F(√(γ_th_eff / γ))` with `γ_th_eff = γ_th / (1 − (κ_s² + κ_d²) γ_th)`,
//! where `F` is the CDF of `A` or of `A_e2e`. Above the maximum threshold
//! `1/(κ_s² + κ_d²)` the link is always in outage.

use serde::{Deserialize, Serialize};

use crate::e2e::{self, CdfEval, EvalPath, KGParams};
use crate::error::{Error, Result};
use crate::geometry::MisalignmentStats;
use crate::special::ln_gamma_signed;

/// Transmitter and receiver error-vector magnitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardwareProfile {
    pub kappa_s: f64,
    pub kappa_d: f64,
}

impl HardwareProfile {
    /// Validated profile; both EVMs must lie in `[0, 1)`. Practical
    /// front-ends sit roughly in `[0.07, 0.3]`, which is not enforced.
    pub fn new(kappa_s: f64, kappa_d: f64) -> Result<Self> {
        for (name, k) in [("kappa_s", kappa_s), ("kappa_d", kappa_d)] {
            if !(0.0..1.0).contains(&k) {
                return Err(Error::Domain(format!("{name} must lie in [0, 1), got {k}")));
            }
        }
        Ok(Self { kappa_s, kappa_d })
    }

    /// Ideal transceivers, κ_s = κ_d = 0.
    pub fn ideal() -> Self {
        Self::default()
    }

    /// Aggregate distortion κ_s² + κ_d².
    pub fn distortion(&self) -> f64 {
        self.kappa_s * self.kappa_s + self.kappa_d * self.kappa_d
    }
}

/// Maximum SNR threshold `1/(κ_s² + κ_d²)`; infinite for ideal hardware.
pub fn max_threshold(hw: &HardwareProfile) -> f64 {
    let d = hw.distortion();
    if d == 0.0 {
        f64::INFINITY
    } else {
        1.0 / d
    }
}

/// Effective threshold `γ_th / (1 − (κ_s² + κ_d²) γ_th)`, or `None` when
/// `γ_th` is at or above the maximum threshold.
pub fn effective_threshold(hw: &HardwareProfile, gamma_th: f64) -> Option<f64> {
    if gamma_th >= max_threshold(hw) {
        return None;
    }
    Some(gamma_th / (1.0 - hw.distortion() * gamma_th))
}

/// Everything needed to evaluate one outage point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageScenario {
    pub kg: KGParams,
    /// Misalignment statistics; `None` means no disorientation/misalignment.
    pub mis: Option<MisalignmentStats>,
    pub hw: HardwareProfile,
    /// Average SNR γ (linear).
    pub gamma: f64,
    /// SNR threshold γ_th (linear).
    pub gamma_th: f64,
}

impl OutageScenario {
    pub fn new(
        kg: KGParams,
        mis: Option<MisalignmentStats>,
        hw: HardwareProfile,
        gamma: f64,
        gamma_th: f64,
    ) -> Result<Self> {
        if !(gamma > 0.0) || !(gamma_th > 0.0) {
            return Err(Error::Domain(format!("gamma and gamma_th must be positive, got {gamma}, {gamma_th}")));
        }
        Ok(Self { kg, mis, hw, gamma, gamma_th })
    }

    /// CDF argument `√(γ_th_eff/γ)`, or `None` above the maximum threshold.
    pub fn cdf_argument(&self) -> Option<f64> {
        effective_threshold(&self.hw, self.gamma_th).map(|t| (t / self.gamma).sqrt())
    }
}

/// Outage probability with the CDF evaluation path reported. Above the
/// maximum threshold the value is exactly 1 and the path is `Series`.
pub fn op_exact_eval(s: &OutageScenario) -> Result<CdfEval> {
    let Some(x) = s.cdf_argument() else {
        return Ok(CdfEval { value: 1.0, path: EvalPath::Series });
    };
    match &s.mis {
        None => e2e::cdf_a_eval(&s.kg, x),
        Some(m) => e2e::cdf_ae2e_eval(&s.kg, m, x),
    }
}

/// Outage probability `P(γ_u ≤ γ_th)`.
pub fn op_exact(s: &OutageScenario) -> Result<f64> {
    op_exact_eval(s).map(|e| e.value)
}

/// `ln|C_p|` and sign of `C_p = Γ(q−p)/(Γ(q)Γ(p+1))`.
fn ln_branch_coefficient(p: f64, q: f64) -> Result<(f64, f64)> {
    let (lg, sign) = ln_gamma_signed(q - p)?;
    Ok((lg - ln_gamma_signed(q)?.0 - ln_gamma_signed(p + 1.0)?.0, sign))
}

/// High-SNR approximation: the CDF expansions with every ₁F₂ factor set to 1.
///
/// Without misalignment `OP ≈ Σ_p C_p (Ξx)^{2p}`; with misalignment
/// `OP ≈ (Ξu)^ζ Γ(k−ζ/2)Γ(m−ζ/2)/(Γ(k)Γ(m)) − Σ_p C_p (Ξu)^{2p} ζ/(2p−ζ)`,
/// `u = x/B_o`.
pub fn op_asymptotic(s: &OutageScenario) -> Result<f64> {
    let kg = &s.kg;
    let degenerate = match &s.mis {
        None => kg.is_degenerate(),
        Some(m) => e2e::e2e_is_degenerate(kg, m),
    };
    if degenerate {
        return Err(Error::DegenerateParameters(kg.order()));
    }
    let Some(x) = s.cdf_argument() else {
        return Ok(1.0);
    };
    let (k, m) = (kg.k_a, kg.m_a);
    let u = match &s.mis {
        None => x,
        Some(mis) => x / mis.b_o,
    };
    let ln_y = (kg.xi * u).ln();
    let mut total = 0.0;
    for (p, q) in [(m, k), (k, m)] {
        let (lc, sign) = ln_branch_coefficient(p, q)?;
        let mut term = sign * (lc + 2.0 * p * ln_y).exp();
        if let Some(mis) = &s.mis {
            term *= -mis.zeta / (2.0 * p - mis.zeta);
        }
        total += term;
    }
    if let Some(mis) = &s.mis {
        let half = 0.5 * mis.zeta;
        let (g1, s1) = ln_gamma_signed(k - half)?;
        let (g2, s2) = ln_gamma_signed(m - half)?;
        let (gk, _) = ln_gamma_signed(k)?;
        let (gm, _) = ln_gamma_signed(m)?;
        total += s1 * s2 * (mis.zeta * ln_y + g1 + g2 - gk - gm).exp();
    }
    if !total.is_finite() {
        return Err(Error::Overflow("high-SNR expansion outside its regime"));
    }
    Ok(total)
}

/// Closed-form outage floor `Ξ^ζ Γ(k−ζ/2)Γ(m−ζ/2) / (B_o^ζ Γ(k)Γ(m))`;
/// 1 at or above the maximum threshold.
///
/// Requires misalignment and `ζ < 2 min(k, m)`.
pub fn op_floor(s: &OutageScenario) -> Result<f64> {
    let Some(mis) = &s.mis else {
        return Err(Error::Domain("the outage floor requires misalignment statistics".into()));
    };
    if s.cdf_argument().is_none() {
        return Ok(1.0);
    }
    floor_value(&s.kg, mis)
}

/// The floor expression for given cascade and misalignment parameters.
pub fn floor_value(kg: &KGParams, mis: &MisalignmentStats) -> Result<f64> {
    let limit = 2.0 * kg.m_a.min(kg.k_a);
    if mis.zeta >= limit {
        return Err(Error::FloorUndefined { zeta: mis.zeta, limit });
    }
    let half = 0.5 * mis.zeta;
    let ln = mis.zeta * (kg.xi / mis.b_o).ln() + ln_gamma_signed(kg.k_a - half)?.0 + ln_gamma_signed(kg.m_a - half)?.0
        - ln_gamma_signed(kg.k_a)?.0
        - ln_gamma_signed(kg.m_a)?.0;
    Ok(ln.exp())
}

/// Diversity order: the closed form `max(k, m)` and, optionally, the
/// measured log-log slope of the ideal no-misalignment OP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityOrder {
    pub closed_form: f64,
    pub empirical_slope: Option<f64>,
}

/// Lower and upper ends (dB of γ/γ_th) of the empirical slope window.
pub const DIVERSITY_WINDOW_DB: (f64, f64) = (50.0, 70.0);

pub fn diversity_order(p: &KGParams, empirical: bool) -> Result<DiversityOrder> {
    let closed_form = p.k_a.max(p.m_a);
    if !empirical {
        return Ok(DiversityOrder { closed_form, empirical_slope: None });
    }
    let (lo, hi) = DIVERSITY_WINDOW_DB;
    let op_at = |db: f64| {
        let gamma = 10f64.powf(db / 10.0);
        op_exact(&OutageScenario::new(*p, None, HardwareProfile::ideal(), gamma, 1.0)?)
    };
    let slope = -(op_at(hi)?.log10() - op_at(lo)?.log10()) / ((hi - lo) / 10.0);
    Ok(DiversityOrder { closed_form, empirical_slope: Some(slope) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kg() -> KGParams {
        KGParams::new(3.2, 1.4, 2.0).unwrap()
    }

    #[test]
    fn max_threshold_values() {
        assert!((max_threshold(&HardwareProfile::new(0.3, 0.3).unwrap()) - 1.0 / 0.18).abs() < 1e-12);
        assert_eq!(max_threshold(&HardwareProfile::ideal()), f64::INFINITY);
        assert!((max_threshold(&HardwareProfile::new(0.07, 0.07).unwrap()) - 102.040_816_326_530_6).abs() < 1e-9);
        assert!(HardwareProfile::new(1.0, 0.0).is_err());
    }

    #[test]
    fn ideal_no_mis_is_cdf_of_cascade() {
        let s = OutageScenario::new(kg(), None, HardwareProfile::ideal(), 10.0, 2.0).unwrap();
        assert_eq!(op_exact(&s).unwrap(), e2e::cdf_a(&kg(), (2.0f64 / 10.0).sqrt()).unwrap());
    }

    #[test]
    fn above_maximum_threshold_is_certain_outage() {
        let hw = HardwareProfile::new(0.3, 0.3).unwrap();
        for gamma in [1.0, 1e3, 1e9] {
            let s = OutageScenario::new(kg(), None, hw, gamma, 6.0).unwrap();
            assert_eq!(op_exact(&s).unwrap(), 1.0);
        }
        let mis = MisalignmentStats::new(0.5, 1.0).unwrap();
        let s = OutageScenario::new(kg(), Some(mis), hw, 10.0, 6.0).unwrap();
        assert_eq!(op_floor(&s).unwrap(), 1.0);
    }

    #[test]
    fn asymptote_tracks_exact_at_high_snr() {
        let s = OutageScenario::new(kg(), None, HardwareProfile::ideal(), 1e4, 1.0).unwrap();
        let r = op_asymptotic(&s).unwrap() / op_exact(&s).unwrap();
        assert!((r - 1.0).abs() < 0.05, "{r}");
    }

    #[test]
    fn floor_is_hardware_independent() {
        let mis = MisalignmentStats::new(0.5, 1.0).unwrap();
        let a = OutageScenario::new(kg(), Some(mis), HardwareProfile::ideal(), 100.0, 1.0).unwrap();
        let b = OutageScenario { hw: HardwareProfile::new(0.3, 0.3).unwrap(), ..a };
        assert_eq!(op_floor(&a).unwrap(), op_floor(&b).unwrap());
        let wide = MisalignmentStats::new(0.5, 3.0).unwrap();
        assert!(matches!(op_floor(&OutageScenario { mis: Some(wide), ..a }), Err(Error::FloorUndefined { .. })));
    }

    #[test]
    fn diversity_closed_form_and_slope() {
        let d = diversity_order(&kg(), true).unwrap();
        assert_eq!(d.closed_form, 3.2);
        assert!((d.empirical_slope.unwrap() - 1.4).abs() < 0.1);
    }
}
