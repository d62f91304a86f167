//! Human-readable dump of every derived quantity of a scenario.

use std::fmt::Write;

use super::scenario::ScenarioFile;
use super::sweep::{misalignment, prepare};
use super::CliError;
use crate::error::Error;
use crate::outage::{diversity_order, floor_value, max_threshold, DIVERSITY_WINDOW_DB};

/// Renders the derived parameters at the first sweep point.
pub fn report(s: &ScenarioFile) -> Result<String, CliError> {
    let prep = prepare(s)?;
    let kg = prep.kg;
    let v0 = s.sweep_values()[0];
    let point = s.point(v0).map_err(|e| CliError::Parse(e.0))?;
    let numeric = |e: Error| CliError::Numeric(e.to_string());

    let mut out = String::new();
    let _ = writeln!(out, "hop 1: {}", prep.d1.label());
    let _ = writeln!(out, "hop 2: {}", prep.d2.label());
    let _ = writeln!(out, "N = {}", s.ris.n_elements);
    if let Some([m2, m4, m6]) = kg.moments {
        let _ = writeln!(out, "mu_A(2) = {m2:e}\nmu_A(4) = {m4:e}\nmu_A(6) = {m6:e}");
    }
    let _ = writeln!(out, "k_A = {}\nm_A = {}\nXi = {}\nOmega_A = {}", kg.k_a, kg.m_a, kg.xi, kg.omega_a);
    let path = if kg.is_degenerate() { "quadrature (k_A - m_A near an integer)" } else { "series" };
    let _ = writeln!(out, "k_A - m_A = {} -> CDF path: {path}", kg.order());

    let _ = writeln!(out, "operating point ({} = {v0}):", s.sweep.variable.name());
    let _ = writeln!(
        out,
        "  gamma = {} ({:.4} dB)\n  gamma_th = {}",
        point.gamma,
        10.0 * point.gamma.log10(),
        point.gamma_th
    );
    let gmax = max_threshold(&point.hw);
    let _ = writeln!(
        out,
        "  kappa_s = {}, kappa_d = {}\n  gamma_th^m = {}",
        point.hw.kappa_s,
        point.hw.kappa_d,
        if gmax.is_infinite() { "infinity".to_string() } else { gmax.to_string() }
    );

    let (mis, no_jitter) = misalignment(point.geometry.as_ref()).map_err(numeric)?;
    match (&mis, no_jitter) {
        (None, false) => {
            let _ = writeln!(out, "misalignment: none (no [geometry] block)\nfloor: n/a (no misalignment)");
        }
        (None, true) => {
            let _ = writeln!(out, "misalignment: none (zero jitter variance)\nfloor: n/a (no misalignment)");
        }
        (Some(m), _) => {
            if let Some(t) = &m.trace {
                let _ = writeln!(out, "w(L2) = {}\nrho(L2) = {}", t.w_l2, t.rho_l2);
                let _ = writeln!(out, "rho_min = {}\nrho_max = {}", t.rho_min, t.rho_max);
                let _ = writeln!(out, "v_min = {}\nv_max = {}\nk_m = {}", t.v_min, t.v_max, t.k_m);
            }
            let _ = writeln!(out, "B_o = {:e}\nzeta = {}", m.b_o, m.zeta);
            match floor_value(&kg, m) {
                Ok(v) => {
                    let _ = writeln!(out, "floor: {v:e}");
                }
                Err(Error::FloorUndefined { zeta, limit }) => {
                    let _ = writeln!(
                        out,
                        "floor: UNDEFINED (Γ-argument condition violated: zeta = {zeta} >= 2 min(k_A, m_A) = {limit})"
                    );
                }
                Err(e) => return Err(numeric(e)),
            }
        }
    }
    let d = diversity_order(&kg, true).map_err(numeric)?;
    let (lo, hi) = DIVERSITY_WINDOW_DB;
    let _ = writeln!(
        out,
        "diversity: closed form max(k_A, m_A) = {}; empirical slope over {lo}-{hi} dB = {:.4}; min(k_A, m_A) = {}",
        d.closed_form,
        d.empirical_slope.unwrap_or(f64::NAN),
        kg.m_a
    );
    Ok(out)
}
