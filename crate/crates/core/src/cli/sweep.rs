//! Curve evaluation: one row per sweep value.

use rayon::prelude::*;

use super::scenario::ScenarioFile;
use super::CliError;
use crate::e2e::{moment_match, EvalPath, KGParams};
use crate::error::Error;
use crate::fading::MGDistribution;
use crate::geometry::{misalignment_stats, MisalignmentStats};
use crate::montecarlo::{simulate_op, MCConfig, Workers};
use crate::outage::{max_threshold, op_asymptotic, op_exact_eval, op_floor, OutageScenario};

/// CSV header of `curve.csv`.
pub const CSV_HEADER: &str = "sweep_value,op_exact,op_asymptotic,op_floor,op_mc,mc_stderr,flags";

/// One evaluated sweep point; `None` columns are written empty.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub op_exact: f64,
    pub op_asymptotic: Option<f64>,
    pub op_floor: Option<f64>,
    pub op_mc: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub flags: Vec<&'static str>,
}

/// Fading laws and cascade parameters shared by every sweep point.
pub struct Prepared {
    pub d1: MGDistribution,
    pub d2: MGDistribution,
    pub kg: KGParams,
}

pub fn prepare(s: &ScenarioFile) -> Result<Prepared, CliError> {
    let d1 = s.fading.hop1.distribution().map_err(|e| CliError::Parse(format!("fading.hop1: {e}")))?;
    let d2 = s.fading.hop2.distribution().map_err(|e| CliError::Parse(format!("fading.hop2: {e}")))?;
    let kg = moment_match(&d1, &d2, s.ris.n_elements).map_err(|e| CliError::Numeric(e.to_string()))?;
    Ok(Prepared { d1, d2, kg })
}

/// Misalignment statistics of a geometry; vanishing jitter means the
/// no-misalignment path, reported with the `no_jitter` flag.
pub fn misalignment(
    geometry: Option<&crate::geometry::GeometryConfig>,
) -> crate::Result<(Option<MisalignmentStats>, bool)> {
    match geometry.map(misalignment_stats) {
        None => Ok((None, false)),
        Some(Ok(m)) => Ok((Some(m), false)),
        Some(Err(Error::DegenerateJitter)) => Ok((None, true)),
        Some(Err(e)) => Err(e),
    }
}

struct Closed {
    row: SweepRow,
    outage: OutageScenario,
}

fn closed_form(s: &ScenarioFile, prep: &Prepared, v: f64) -> crate::Result<Closed> {
    let point = s.point(v).map_err(|e| Error::Config(e.0))?;
    let mut flags = Vec::new();
    let (mis, no_jitter) = misalignment(point.geometry.as_ref())?;
    if no_jitter {
        flags.push("no_jitter");
    }
    if point.gamma_th >= max_threshold(&point.hw) {
        flags.push("above_max_threshold");
    }
    let outage = OutageScenario::new(prep.kg, mis, point.hw, point.gamma, point.gamma_th)?;
    let exact = op_exact_eval(&outage)?;
    match exact.path {
        EvalPath::Series => {}
        EvalPath::Quadrature => flags.push("quadrature"),
        EvalPath::QuadratureFallback => flags.push("quadrature_fallback"),
    }
    let op_asymptotic = match op_asymptotic(&outage) {
        Ok(v) if v > 0.0 && v <= 1.0 => Some(v),
        Ok(_) => {
            // a truncated expansion outside [0, 1] means γ is far below the high-SNR regime
            flags.push("asymptotic_out_of_regime");
            None
        }
        Err(Error::DegenerateParameters(_) | Error::Overflow(_)) => {
            flags.push("asymptotic_undefined");
            None
        }
        Err(e) => return Err(e),
    };
    let op_floor = match (&outage.mis, op_floor(&outage)) {
        (None, _) => None,
        (Some(_), Ok(v)) => Some(v),
        (Some(_), Err(Error::FloorUndefined { .. })) => {
            flags.push("floor_undefined");
            None
        }
        (Some(_), Err(e)) => return Err(e),
    };
    Ok(Closed {
        row: SweepRow {
            sweep_value: v,
            op_exact: exact.value,
            op_asymptotic,
            op_floor,
            op_mc: None,
            mc_stderr: None,
            flags,
        },
        outage,
    })
}

/// Evaluates every sweep point; closed forms run in parallel on
/// `threads` workers (all cores when `None`), Monte Carlo points one after
/// another, each parallel internally.
pub fn evaluate(s: &ScenarioFile, with_mc: bool, threads: Option<usize>) -> Result<Vec<SweepRow>, CliError> {
    let prep = prepare(s)?;
    let values = s.sweep_values();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Io(format!("cannot start worker pool: {e}")))?;
    let var = s.sweep.variable.name();
    let failure = |i: usize, v: f64, e: Error| match e {
        Error::Config(msg) => CliError::Parse(msg),
        e => CliError::Numeric(format!("sweep point {i} ({var} = {v}): {e}")),
    };
    let closed: Vec<Closed> = pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| closed_form(s, &prep, v).map_err(|e| failure(i, v, e)))
            .collect::<Result<_, _>>()
    })?;
    if !with_mc {
        return Ok(closed.into_iter().map(|c| c.row).collect());
    }
    let mut cfg = s.mc.unwrap_or_default();
    if let Some(n) = threads {
        cfg.workers = Workers::Fixed(n);
    }
    closed
        .into_iter()
        .enumerate()
        .map(|(i, Closed { mut row, outage })| {
            let est =
                monte_carlo(&prep, &outage, s.ris.n_elements, &cfg).map_err(|e| failure(i, row.sweep_value, e))?;
            row.op_mc = Some(est.op_hat);
            row.mc_stderr = Some(est.stderr);
            if est.low_count {
                row.flags.push("mc_low_count");
            }
            Ok(row)
        })
        .collect()
}

fn monte_carlo(
    prep: &Prepared,
    o: &OutageScenario,
    n_elements: usize,
    cfg: &MCConfig,
) -> crate::Result<crate::montecarlo::MCEstimate> {
    simulate_op(&prep.d1, &prep.d2, n_elements, o.mis.as_ref(), &o.hw, o.gamma, o.gamma_th, cfg)
}

fn field(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// RFC-4180-style CSV (LF line endings); flags are `;`-separated.
pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{},{},{},{},{}\n",
            r.sweep_value,
            r.op_exact,
            field(r.op_asymptotic),
            field(r.op_floor),
            field(r.op_mc),
            field(r.mc_stderr),
            r.flags.join(";"),
        ));
    }
    out
}
