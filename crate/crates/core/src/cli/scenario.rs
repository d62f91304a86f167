//! Scenario files: TOML text describing one outage curve.
//!
//! ```toml
//! [fading.hop1]
//! kind = "nakagami"      # or "rice" { k_r_db, n_terms } / "rayleigh"
//! m = 1.0
//! omega = 1.0
//!
//! [fading.hop2]
//! kind = "rice"
//! k_r_db = 5.0
//! n_terms = 20
//!
//! [ris]
//! n_elements = 16
//!
//! [geometry]             # optional; absent = no disorientation/misalignment
//! sigma_p = 0.05         # unspecified fields take the reference defaults
//!
//! [hardware]             # optional; EVMs default to 0
//! kappa_s = 0.0
//! kappa_d = 0.0
//!
//! [link]                 # fixed operating point for non-swept quantities
//! gamma_th = 1.0
//! gamma_over_gamma_th_db = 5.0   # or gamma_db = ...
//!
//! [sweep]
//! variable = "gamma_over_gamma_th_db"
//! range = { start = -5.0, stop = 5.0, points = 11 }
//!
//! [mc]                   # optional Monte Carlo settings
//! samples = 1000000
//! seed = 1
//! ```

use std::fmt;

use serde::Deserialize;

use crate::fading::MGDistribution;
use crate::geometry::GeometryConfig;
use crate::montecarlo::MCConfig;
use crate::outage::HardwareProfile;

/// Fading law of one hop.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum HopSpec {
    Nakagami {
        m: f64,
        #[serde(default = "unit")]
        omega: f64,
    },
    Rice {
        k_r_db: f64,
        #[serde(default = "default_rice_terms")]
        n_terms: usize,
    },
    Rayleigh,
}

fn unit() -> f64 {
    1.0
}

fn default_rice_terms() -> usize {
    20
}

impl HopSpec {
    pub fn distribution(&self) -> crate::Result<MGDistribution> {
        match *self {
            HopSpec::Nakagami { m, omega } => MGDistribution::from_nakagami(m, omega),
            HopSpec::Rice { k_r_db, n_terms } => MGDistribution::from_rice(db_to_linear(k_r_db), n_terms),
            HopSpec::Rayleigh => Ok(MGDistribution::rayleigh()),
        }
    }
}

/// Power-ratio conversion `10^(x/10)`.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FadingBlock {
    pub hop1: HopSpec,
    pub hop2: HopSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RisBlock {
    pub n_elements: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkBlock {
    /// SNR threshold γ_th, linear.
    pub gamma_th: f64,
    /// Average SNR relative to the threshold, dB.
    pub gamma_over_gamma_th_db: Option<f64>,
    /// Absolute average SNR, dB.
    pub gamma_db: Option<f64>,
}

impl Default for LinkBlock {
    fn default() -> Self {
        Self { gamma_th: 1.0, gamma_over_gamma_th_db: None, gamma_db: None }
    }
}

/// The quantity varied along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    GammaOverGammaThDb,
    GammaTh,
    SigmaP,
    L2,
    Alpha,
    Phi,
    /// Sets κ_s = κ_d to the swept value.
    Kappa,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVariable::GammaOverGammaThDb => "gamma_over_gamma_th_db",
            SweepVariable::GammaTh => "gamma_th",
            SweepVariable::SigmaP => "sigma_p",
            SweepVariable::L2 => "l2",
            SweepVariable::Alpha => "alpha",
            SweepVariable::Phi => "phi",
            SweepVariable::Kappa => "kappa",
        }
    }

    fn needs_geometry(&self) -> bool {
        matches!(self, SweepVariable::SigmaP | SweepVariable::L2 | SweepVariable::Alpha | SweepVariable::Phi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub variable: SweepVariable,
    pub range: SweepRange,
}

/// A parsed scenario file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub fading: FadingBlock,
    pub ris: RisBlock,
    pub geometry: Option<GeometryConfig>,
    #[serde(default)]
    pub hardware: HardwareProfile,
    #[serde(default)]
    pub link: LinkBlock,
    pub sweep: SweepBlock,
    pub mc: Option<MCConfig>,
}

/// A scenario-file diagnostic (TOML syntax errors carry line and column).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioError(pub String);

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ScenarioError {}

fn invalid(field: &str, msg: impl fmt::Display) -> ScenarioError {
    ScenarioError(format!("invalid field `{field}`: {msg}"))
}

/// Operating point of one sweep value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSpec {
    pub geometry: Option<GeometryConfig>,
    pub hw: HardwareProfile,
    pub gamma: f64,
    pub gamma_th: f64,
}

impl ScenarioFile {
    /// Parses and validates scenario text.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ScenarioError(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    /// Replaces the threshold by `2^r − 1` for a spectral-efficiency target `r`.
    pub fn set_rate_threshold(&mut self, rate: f64) -> Result<(), ScenarioError> {
        let gamma_th = rate.exp2() - 1.0;
        if !(gamma_th > 0.0 && gamma_th.is_finite()) {
            return Err(invalid("--rate-threshold", format!("2^{rate} - 1 is not a positive threshold")));
        }
        self.link.gamma_th = gamma_th;
        Ok(())
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let SweepRange { start, stop, points } = self.sweep.range;
        if points == 0 {
            return Err(invalid("sweep.range.points", "must be at least 1"));
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(invalid("sweep.range", "start and stop must be finite"));
        }
        if start > stop || (points > 1 && start == stop) {
            return Err(invalid("sweep.range", format!("start {start} must be below stop {stop}")));
        }
        if self.ris.n_elements == 0 {
            return Err(invalid("ris.n_elements", "must be at least 1"));
        }
        let var = self.sweep.variable;
        if var.needs_geometry() && self.geometry.is_none() {
            return Err(invalid("sweep.variable", format!("sweeping `{}` needs a [geometry] block", var.name())));
        }
        if !(self.link.gamma_th > 0.0) {
            return Err(invalid("link.gamma_th", "must be positive"));
        }
        let fixed_snr = self.link.gamma_over_gamma_th_db.is_some() as u8 + self.link.gamma_db.is_some() as u8;
        if fixed_snr > 1 {
            return Err(invalid("link", "give only one of `gamma_over_gamma_th_db` and `gamma_db`"));
        }
        if fixed_snr == 0 && var != SweepVariable::GammaOverGammaThDb {
            return Err(invalid("link", "the average SNR needs `gamma_over_gamma_th_db` or `gamma_db`"));
        }
        if let Some(g) = &self.geometry {
            g.validate().map_err(|e| invalid("geometry", e))?;
        }
        HardwareProfile::new(self.hardware.kappa_s, self.hardware.kappa_d).map_err(|e| invalid("hardware", e))?;
        for v in self.sweep_values() {
            self.point(v)?;
        }
        Ok(())
    }

    /// Linearly spaced sweep values; the last point is exactly `stop`.
    pub fn sweep_values(&self) -> Vec<f64> {
        let SweepRange { start, stop, points } = self.sweep.range;
        if points == 1 {
            return vec![start];
        }
        let step = (stop - start) / (points - 1) as f64;
        (0..points).map(|i| if i + 1 == points { stop } else { start + step * i as f64 }).collect()
    }

    /// The operating point at sweep value `v`.
    pub fn point(&self, v: f64) -> Result<PointSpec, ScenarioError> {
        let mut geometry = self.geometry;
        let mut hw = self.hardware;
        let mut gamma_th = self.link.gamma_th;
        let mut ratio_db = self.link.gamma_over_gamma_th_db;
        let field = self.sweep.variable.name();
        match self.sweep.variable {
            SweepVariable::GammaOverGammaThDb => ratio_db = Some(v),
            SweepVariable::GammaTh => gamma_th = v,
            SweepVariable::Kappa => hw = HardwareProfile::new(v, v).map_err(|e| invalid(field, e))?,
            var => {
                let g = geometry.as_mut().expect("validated: geometry sweeps need a geometry block");
                match var {
                    SweepVariable::SigmaP => g.sigma_p = v,
                    SweepVariable::L2 => g.l2 = v,
                    SweepVariable::Alpha => g.alpha = v,
                    _ => g.phi = v,
                }
                g.validate().map_err(|e| invalid(field, e))?;
            }
        }
        if !(gamma_th > 0.0) {
            return Err(invalid(field, format!("threshold {gamma_th} must be positive")));
        }
        let gamma = match (self.sweep.variable, self.link.gamma_db) {
            (SweepVariable::GammaOverGammaThDb, _) | (_, None) => {
                // γ/γ_th is held fixed unless the threshold itself is swept
                let base = if self.sweep.variable == SweepVariable::GammaTh { self.link.gamma_th } else { gamma_th };
                base * db_to_linear(ratio_db.expect("validated: an SNR is given"))
            }
            (_, Some(db)) => db_to_linear(db),
        };
        Ok(PointSpec { geometry, hw, gamma, gamma_th })
    }
}
