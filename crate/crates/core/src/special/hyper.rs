use crate::error::{Error, Result};

/// Truncation policy for hypergeometric power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol <= 1e-3) {
            return Err(Error::Config(format!("rel_tol must lie in (0, 1e-3], got {rel_tol}")));
        }
        if max_terms < 64 {
            return Err(Error::Config(format!("max_terms must be at least 64, got {max_terms}")));
        }
        Ok(Self { rel_tol, max_terms })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 10_000 }
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `₁F₂(a; b1, b2; z) = Σ_n (a)_n / ((b1)_n (b2)_n) zⁿ / n!`.
///
/// Summation stops once three consecutive terms fall below
/// `rel_tol · |partial sum|`.
pub fn hyp1f2(a: f64, b1: f64, b2: f64, z: f64, ctl: SeriesControl) -> Result<f64> {
    for b in [b1, b2] {
        if b <= 0.0 && b.fract() == 0.0 {
            return Err(Error::Domain(format!("1F2 lower parameter {b} is a non-positive integer")));
        }
    }
    if !(a.is_finite() && b1.is_finite() && b2.is_finite() && z.is_finite()) {
        return Err(Error::Domain("1F2 with non-finite argument".into()));
    }
    let mut acc = CompensatedSum::default();
    acc.add(1.0);
    if z == 0.0 {
        return Ok(1.0);
    }
    let mut term = 1.0;
    let mut small_run = 0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        term *= (a + nf) / ((b1 + nf) * (b2 + nf) * (nf + 1.0)) * z;
        acc.add(term);
        if !term.is_finite() {
            return Err(Error::Overflow("hyp1f2"));
        }
        if term.abs() < ctl.rel_tol * acc.value().abs() || term == 0.0 {
            small_run += 1;
            if small_run == 3 {
                return Ok(acc.value());
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::NoConvergence { what: "hyp1f2", iterations: ctl.max_terms })
}
