//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use ris_outage::e2e::{moment_match, KGParams};
use ris_outage::fading::MGDistribution;
use ris_outage::geometry::MisalignmentStats;
use ris_outage::outage::{op_exact, HardwareProfile, OutageScenario};

/// Rice fading with a K-factor in dB, expanded to 20 mixture terms.
pub fn rice_db(k_db: f64) -> MGDistribution {
    MGDistribution::from_rice(10f64.powf(k_db / 10.0), 20).unwrap()
}

/// Unit-power Nakagami fading.
pub fn nakagami(m: f64) -> MGDistribution {
    MGDistribution::from_nakagami(m, 1.0).unwrap()
}

/// Nakagami(m) × Rice(k_db) cascade over `n` elements.
pub fn cascade(m: f64, k_db: f64, n: usize) -> (MGDistribution, MGDistribution, KGParams) {
    let (d1, d2) = (nakagami(m), rice_db(k_db));
    let kg = moment_match(&d1, &d2, n).unwrap();
    (d1, d2, kg)
}

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

pub fn outage(kg: KGParams, mis: Option<MisalignmentStats>, hw: HardwareProfile, gamma: f64, gamma_th: f64) -> f64 {
    op_exact(&OutageScenario::new(kg, mis, hw, gamma, gamma_th).unwrap()).unwrap()
}

/// Average SNR at which the closed-form outage probability equals `target`
/// (bisection in log γ; OP is nonincreasing in γ).
pub fn gamma_for_outage(
    kg: KGParams,
    mis: Option<MisalignmentStats>,
    hw: HardwareProfile,
    gamma_th: f64,
    target: f64,
) -> f64 {
    let (mut lo, mut hi) = (-4.0f64, 10.0f64);
    for _ in 0..45 {
        let mid = 0.5 * (lo + hi);
        if outage(kg, mis, hw, 10f64.powf(mid), gamma_th) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    10f64.powf(0.5 * (lo + hi))
}
