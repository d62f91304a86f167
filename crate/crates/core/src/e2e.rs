//! Statistics of the RIS cascade `A = Σ|hᵢ||gᵢ|` and of `A_e2e = h_g·A`.
//!
//! `A` is replaced by a generalized-K law matched on its second, fourth and
//! sixth moments. Its CDF, and the CDF of `A_e2e`, have two computational
//! representations each:
//!
//! * a ₁F₂ expansion, summed in extended precision because its two branches
//!   cancel heavily (see [`crate::special::extended`]);
//! * an adaptive quadrature oracle.
//!
//! The public CDFs use the expansion wherever it is well defined and fall
//! back to quadrature near its removable singularities (integer `k − m`,
//! `ζ/2 − k` or `ζ/2 − m` at a non-negative integer) or when the required
//! precision exceeds [`MAX_PRECISION`](crate::special::extended::MAX_PRECISION).

use astro_float::{BigFloat, Consts};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{product_moment, MGDistribution};
use crate::geometry::MisalignmentStats;
use crate::quadrature::{try_integrate, try_integrate_to_infinity, QuadOptions};
use crate::special::extended::{self, adaptive_eval, Evaluation, MAX_PRECISION, RM};
use crate::special::{ln_bessel_k, ln_gamma};

/// Width of the band around the expansions' removable singularities inside
/// which quadrature is used instead.
pub const DEGENERACY_GUARD: f64 = 1e-3;

const SERIES_MAX_TERMS: usize = 100_000;

/// Moment-matched generalized-K parameters of the cascade sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KGParams {
    /// Larger shape parameter.
    pub k_a: f64,
    /// Smaller shape parameter.
    pub m_a: f64,
    /// Scale Ξ = √(k m / Ω).
    pub xi: f64,
    /// Mean square Ω = E[A²].
    pub omega_a: f64,
    /// Number of RIS elements (0 when the parameters were given directly).
    pub n_elements: usize,
    /// Matched moments (μ₂, μ₄, μ₆), when derived from fading laws.
    pub moments: Option<[f64; 3]>,
}

impl KGParams {
    /// Parameters given directly by the two shapes and Ω; shapes are reordered
    /// so that `k_a ≥ m_a`.
    pub fn new(k: f64, m: f64, omega_a: f64) -> Result<Self> {
        for (name, v) in [("k", k), ("m", m), ("omega", omega_a)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("generalized-K {name} must be positive, got {v}")));
            }
        }
        let (k_a, m_a) = if k >= m { (k, m) } else { (m, k) };
        Ok(Self { k_a, m_a, xi: (k_a * m_a / omega_a).sqrt(), omega_a, n_elements: 0, moments: None })
    }

    /// `k_a − m_a`, the Bessel order of the density.
    pub fn order(&self) -> f64 {
        self.k_a - self.m_a
    }

    /// True when `k_a − m_a` lies within the guard band of an integer.
    pub fn is_degenerate(&self) -> bool {
        near_integer(self.order())
    }
}

fn near_integer(v: f64) -> bool {
    (v - v.round()).abs() <= DEGENERACY_GUARD
}

/// How a CDF value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalPath {
    /// Extended-precision ₁F₂ expansion.
    Series,
    /// Quadrature because the parameters sit in a degeneracy band.
    Quadrature,
    /// Quadrature because the expansion needed more precision than allowed.
    QuadratureFallback,
}

/// A CDF value with the path that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdfEval {
    pub value: f64,
    pub path: EvalPath,
}

/// Moments `μ_A(l)`, `l = 0..=order`, of a sum of `n` i.i.d. envelope products,
/// by iterated binomial convolution of the single-product moments.
pub fn sum_moment_vector(
    d1: &MGDistribution,
    d2: &MGDistribution,
    n_elements: usize,
    order: usize,
) -> Result<Vec<f64>> {
    if n_elements == 0 {
        return Err(Error::Domain("the RIS needs at least one element".into()));
    }
    let single: Vec<f64> = (0..=order).map(|l| product_moment(d1, d2, l as u32)).collect::<Result<_>>()?;
    let binom = binomial_rows(order);
    let mut acc = single.clone();
    for _ in 1..n_elements {
        acc = (0..=order).map(|l| (0..=l).map(|j| binom[l][j] * acc[j] * single[l - j]).sum()).collect();
    }
    if acc.iter().any(|v: &f64| !v.is_finite()) {
        return Err(Error::Overflow("sum moments"));
    }
    Ok(acc)
}

fn binomial_rows(order: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0]];
    for l in 1..=order {
        let prev = &rows[l - 1];
        let mut row = vec![1.0; l + 1];
        for j in 1..l {
            row[j] = prev[j - 1] + prev[j];
        }
        rows.push(row);
    }
    rows
}

/// `μ_A(order) = E[(Σ_{i=1}^{N} |hᵢ||gᵢ|)^order]`.
pub fn sum_moments(d1: &MGDistribution, d2: &MGDistribution, n_elements: usize, order: usize) -> Result<f64> {
    Ok(sum_moment_vector(d1, d2, n_elements, order)?[order])
}

/// Matches a generalized-K law to μ_A(2), μ_A(4), μ_A(6).
///
/// The shapes are the roots of `a t² + b t + c` with
/// `a = μ₆μ₂ + μ₂²μ₄ − 2μ₄²`, `b = μ₆μ₂ − 4μ₄² + 3μ₂²μ₄`, `c = 2μ₂²μ₄`.
pub fn moment_match(d1: &MGDistribution, d2: &MGDistribution, n_elements: usize) -> Result<KGParams> {
    let mu = sum_moment_vector(d1, d2, n_elements, 6)?;
    let (m2, m4, m6) = (mu[2], mu[4], mu[6]);
    let a = m6 * m2 + m2 * m2 * m4 - 2.0 * m4 * m4;
    let b = m6 * m2 - 4.0 * m4 * m4 + 3.0 * m2 * m2 * m4;
    let c = 2.0 * m2 * m2 * m4;
    let mut disc = b * b - 4.0 * a * c;
    // a double root (e.g. double Rayleigh) may land a few ulps below zero
    let scale = (b * b).max((4.0 * a * c).abs());
    if disc < 0.0 && disc > -64.0 * f64::EPSILON * scale {
        disc = 0.0;
    }
    if !(disc >= 0.0) {
        return Err(Error::MomentMatchFailure(format!("negative discriminant {disc:e} (a={a:e}, b={b:e}, c={c:e})")));
    }
    if a == 0.0 {
        return Err(Error::MomentMatchFailure("leading coefficient vanishes".into()));
    }
    let sq = disc.sqrt();
    // numerically stable quadratic roots
    let qq = -0.5 * (b + b.signum() * sq);
    let r1 = qq / a;
    let r2 = c / qq;
    if !(r1 > 0.0 && r2 > 0.0 && r1.is_finite() && r2.is_finite()) {
        return Err(Error::MomentMatchFailure(format!("non-positive shape roots {r1}, {r2}")));
    }
    let (k_a, m_a) = if r1 >= r2 { (r1, r2) } else { (r2, r1) };
    Ok(KGParams { k_a, m_a, xi: (k_a * m_a / m2).sqrt(), omega_a: m2, n_elements, moments: Some([m2, m4, m6]) })
}

/// `ln f_A(x)` for x > 0.
pub fn ln_pdf_a(p: &KGParams, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("pdf of A requires x > 0, got {x}")));
    }
    let (k, m, xi) = (p.k_a, p.m_a, p.xi);
    Ok((4.0f64).ln() + (k + m) * xi.ln() - ln_gamma(k)? - ln_gamma(m)?
        + (k + m - 1.0) * x.ln()
        + ln_bessel_k(k - m, 2.0 * xi * x)?)
}

/// Generalized-K density `4Ξ^{k+m}/(Γ(k)Γ(m)) x^{k+m−1} K_{k−m}(2Ξx)`.
pub fn pdf_a(p: &KGParams, x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(ln_pdf_a(p, x)?.exp())
}

fn quad_opts() -> QuadOptions {
    QuadOptions { abs_tol: 0.0, rel_tol: 1e-12, max_subdivisions: 5000 }
}

/// CDF of A by adaptive quadrature of its density; the upper tail is
/// integrated instead when `x` lies above √Ω.
pub fn cdf_a_quadrature(p: &KGParams, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(1.0);
    }
    let f = |t: f64| if t > 0.0 { pdf_a(p, t) } else { Ok(0.0) };
    if x <= p.omega_a.sqrt() {
        Ok(try_integrate(f, 0.0, x, quad_opts())?.value.clamp(0.0, 1.0))
    } else {
        let tail = try_integrate_to_infinity(f, x, quad_opts())?.value;
        Ok((1.0 - tail).clamp(0.0, 1.0))
    }
}

struct BigShapes {
    k: BigFloat,
    m: BigFloat,
    xi: BigFloat,
}

impl BigShapes {
    fn new(kg: &KGParams, prec: usize) -> Self {
        Self {
            k: extended::from_f64(kg.k_a, prec),
            m: extended::from_f64(kg.m_a, prec),
            xi: extended::from_f64(kg.xi, prec),
        }
    }

    /// (p, q) = (m, k) and (k, m).
    fn branches(&self) -> [(&BigFloat, &BigFloat); 2] {
        [(&self.m, &self.k), (&self.k, &self.m)]
    }
}

/// `C_p = Γ(q − p) / (Γ(q) Γ(p + 1))` (the Ξ^{2p} factor is applied by the caller).
fn branch_coefficient(p: &BigFloat, q: &BigFloat, prec: usize, cc: &mut Consts) -> Result<BigFloat> {
    let one = BigFloat::from_u64(1, prec);
    let g_qp = extended::gamma(&q.sub(p, prec, RM), prec, cc)?;
    let g_q = extended::gamma(q, prec, cc)?;
    let g_p1 = extended::gamma(&p.add(&one, prec, RM), prec, cc)?;
    Ok(g_qp.div(&g_q.mul(&g_p1, prec, RM), prec, RM))
}

/// Accumulates `coef · series` into a running value and absolute mass.
struct Accumulator {
    value: BigFloat,
    mass: BigFloat,
    terms: usize,
    prec: usize,
}

impl Accumulator {
    fn new(prec: usize) -> Self {
        Self { value: BigFloat::from_u64(0, prec), mass: BigFloat::from_u64(0, prec), terms: 0, prec }
    }

    fn add_term(&mut self, v: &BigFloat) {
        self.value = self.value.add(v, self.prec, RM);
        self.mass = self.mass.add(&v.abs(), self.prec, RM);
        self.terms += 1;
    }

    fn add_series(&mut self, coef: &BigFloat, s: &extended::SeriesSum) {
        let p = self.prec;
        self.value = self.value.add(&coef.mul(&s.value, p, RM), p, RM);
        self.mass = self.mass.add(&coef.abs().mul(&s.mass, p, RM), p, RM);
        self.terms += s.terms;
    }

    fn finish(self) -> Evaluation {
        Evaluation { log2_mass: extended::log2_abs(&self.mass), value: self.value, terms: self.terms }
    }
}

/// `F_A(x) = Σ_{p ∈ {m,k}} C_p (Ξx)^{2p} ₁F₂(p; 1 + p, 1 − q + p; Ξ²x²)`.
fn cdf_a_series_eval(kg: &KGParams, x: f64, prec: usize, cc: &mut Consts) -> Result<Evaluation> {
    let s = BigShapes::new(kg, prec);
    let one = BigFloat::from_u64(1, prec);
    let two = BigFloat::from_u64(2, prec);
    let xb = extended::from_f64(x, prec);
    let y = s.xi.mul(&xb, prec, RM);
    let z = y.mul(&y, prec, RM);
    let mut acc = Accumulator::new(prec);
    for (p, q) in s.branches() {
        let coef =
            branch_coefficient(p, q, prec, cc)?.mul(&extended::powf(&y, &two.mul(p, prec, RM), prec, cc), prec, RM);
        let b1 = one.add(p, prec, RM);
        let b2 = one.sub(q, prec, RM).add(p, prec, RM);
        let series = extended::hyp1f2(p, &b1, &b2, &z, prec, SERIES_MAX_TERMS)?;
        acc.add_series(&coef, &series);
    }
    Ok(acc.finish())
}

/// Extended-precision expansion of F_A; fails on degenerate parameters or
/// when the precision cap is reached.
pub fn cdf_a_series(p: &KGParams, x: f64) -> Result<f64> {
    if p.is_degenerate() {
        return Err(Error::DegenerateParameters(p.order()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    adaptive_eval(|prec, cc| cdf_a_series_eval(p, x, prec, cc)).map(|v| v.clamp(0.0, 1.0))
}

/// Bits the expansion needs at argument `Ξx`: its terms grow like `e^{2Ξx}`
/// while the sum stays O(1), so the cap is known to be exceeded in advance.
fn predicted_bits(xi_x: f64) -> f64 {
    2.0 * xi_x * std::f64::consts::LOG2_E + 64.0
}

fn exceeds_precision_cap(xi_x: f64) -> bool {
    predicted_bits(xi_x) > MAX_PRECISION as f64
}

fn is_fallback(e: &Error) -> bool {
    matches!(e, Error::PrecisionExhausted { .. } | Error::NoConvergence { .. })
}

/// CDF of A with the evaluation path reported.
pub fn cdf_a_eval(p: &KGParams, x: f64) -> Result<CdfEval> {
    if x <= 0.0 {
        return Ok(CdfEval { value: 0.0, path: EvalPath::Series });
    }
    if p.is_degenerate() {
        return Ok(CdfEval { value: cdf_a_quadrature(p, x)?, path: EvalPath::Quadrature });
    }
    if exceeds_precision_cap(p.xi * x) {
        return Ok(CdfEval { value: cdf_a_quadrature(p, x)?, path: EvalPath::QuadratureFallback });
    }
    match cdf_a_series(p, x) {
        Ok(value) => Ok(CdfEval { value, path: EvalPath::Series }),
        Err(e) if is_fallback(&e) => Ok(CdfEval { value: cdf_a_quadrature(p, x)?, path: EvalPath::QuadratureFallback }),
        Err(e) => Err(e),
    }
}

/// CDF of the cascade sum A.
pub fn cdf_a(p: &KGParams, x: f64) -> Result<f64> {
    cdf_a_eval(p, x).map(|e| e.value)
}

/// True when the `A_e2e` expansion has a removable singularity near these
/// parameters: integer `k − m`, or `ζ/2 − k`, `ζ/2 − m` near a non-negative integer.
pub fn e2e_is_degenerate(p: &KGParams, s: &MisalignmentStats) -> bool {
    let half = 0.5 * s.zeta;
    p.is_degenerate()
        || [p.k_a, p.m_a].iter().any(|&shape| half - shape > -DEGENERACY_GUARD && near_integer(half - shape))
}

/// `F_{A_e2e}(x)` expansion with `u = x/B_o`:
/// `(Ξu)^ζ Γ(k−ζ/2)Γ(m−ζ/2)/(Γ(k)Γ(m))
///  + Σ_p C_p (Ξu)^{2p} [₁F₂(p; 1+p, b_p; Ξ²u²) − 2p/(2p−ζ) ₁F₂(p−ζ/2; b_p, 1+p−ζ/2; Ξ²u²)]`,
/// `b_p = 1 − q + p`.
fn cdf_e2e_series_eval(
    kg: &KGParams,
    st: &MisalignmentStats,
    x: f64,
    prec: usize,
    cc: &mut Consts,
) -> Result<Evaluation> {
    let s = BigShapes::new(kg, prec);
    let one = BigFloat::from_u64(1, prec);
    let two = BigFloat::from_u64(2, prec);
    let zeta = extended::from_f64(st.zeta, prec);
    let half_zeta = zeta.div(&two, prec, RM);
    let u = extended::from_f64(x, prec).div(&extended::from_f64(st.b_o, prec), prec, RM);
    let y = s.xi.mul(&u, prec, RM);
    let z = y.mul(&y, prec, RM);
    let mut acc = Accumulator::new(prec);

    let g = extended::gamma(&s.k.sub(&half_zeta, prec, RM), prec, cc)?
        .mul(&extended::gamma(&s.m.sub(&half_zeta, prec, RM), prec, cc)?, prec, RM)
        .div(&extended::gamma(&s.k, prec, cc)?.mul(&extended::gamma(&s.m, prec, cc)?, prec, RM), prec, RM);
    acc.add_term(&g.mul(&extended::powf(&y, &zeta, prec, cc), prec, RM));

    for (p, q) in s.branches() {
        let two_p = two.mul(p, prec, RM);
        let coef = branch_coefficient(p, q, prec, cc)?.mul(&extended::powf(&y, &two_p, prec, cc), prec, RM);
        let b1 = one.add(p, prec, RM);
        let bp = one.sub(q, prec, RM).add(p, prec, RM);
        let first = extended::hyp1f2(p, &b1, &bp, &z, prec, SERIES_MAX_TERMS)?;
        acc.add_series(&coef, &first);

        let a2 = p.sub(&half_zeta, prec, RM);
        let b2 = one.add(&a2, prec, RM);
        let ratio = two_p.div(&two_p.sub(&zeta, prec, RM), prec, RM);
        let second = extended::hyp1f2(&a2, &bp, &b2, &z, prec, SERIES_MAX_TERMS)?;
        acc.add_series(&coef.mul(&ratio, prec, RM).neg(), &second);
    }
    Ok(acc.finish())
}

/// Extended-precision expansion of F_{A_e2e}; fails on degenerate parameters
/// or when the precision cap is reached.
pub fn cdf_ae2e_series(p: &KGParams, s: &MisalignmentStats, x: f64) -> Result<f64> {
    if e2e_is_degenerate(p, s) {
        return Err(Error::DegenerateParameters(p.order()));
    }
    if x <= 0.0 {
        return Ok(0.0);
    }
    adaptive_eval(|prec, cc| cdf_e2e_series_eval(p, s, x, prec, cc)).map(|v| v.clamp(0.0, 1.0))
}

/// Oracle: `F_{A_e2e}(x) = ∫₀^{B_o} F_A(x/y) f_{h_g}(y) dy`, evaluated after
/// the substitution `y = B_o e^{−t/ζ}` as `∫₀^∞ F_A((x/B_o) e^{t/ζ}) e^{−t} dt`
/// (bounded integrand for every ζ). The inner `F_A` is the quadrature form of
/// [`cdf_a`], so the oracle shares no code with the series expansions.
pub fn cdf_ae2e_quadrature(p: &KGParams, s: &MisalignmentStats, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    let u = x / s.b_o;
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-10, max_subdivisions: 4000 };
    let r = try_integrate_to_infinity(
        |t| {
            let w = (-t).exp();
            if w == 0.0 {
                return Ok(0.0);
            }
            let arg = u * (t / s.zeta).exp();
            let f = if arg.is_finite() { cdf_a_quadrature(p, arg)? } else { 1.0 };
            Ok(f * w)
        },
        0.0,
        opts,
    )?;
    Ok(r.value.clamp(0.0, 1.0))
}

/// CDF of `A_e2e` with the evaluation path reported.
pub fn cdf_ae2e_eval(p: &KGParams, s: &MisalignmentStats, x: f64) -> Result<CdfEval> {
    if x <= 0.0 {
        return Ok(CdfEval { value: 0.0, path: EvalPath::Series });
    }
    if e2e_is_degenerate(p, s) {
        return Ok(CdfEval { value: cdf_ae2e_quadrature(p, s, x)?, path: EvalPath::Quadrature });
    }
    if exceeds_precision_cap(p.xi * x / s.b_o) {
        return Ok(CdfEval { value: cdf_ae2e_quadrature(p, s, x)?, path: EvalPath::QuadratureFallback });
    }
    match cdf_ae2e_series(p, s, x) {
        Ok(value) => Ok(CdfEval { value, path: EvalPath::Series }),
        Err(e) if is_fallback(&e) => {
            Ok(CdfEval { value: cdf_ae2e_quadrature(p, s, x)?, path: EvalPath::QuadratureFallback })
        }
        Err(e) => Err(e),
    }
}

/// CDF of the end-to-end gain `A_e2e = h_g A`.
pub fn cdf_ae2e(p: &KGParams, s: &MisalignmentStats, x: f64) -> Result<f64> {
    cdf_ae2e_eval(p, s, x).map(|e| e.value)
}

/// Density of `A_e2e`, the derivative of the quadrature form:
/// `∫₀^∞ f_A(u e^{t/ζ}) (e^{t/ζ}/B_o) e^{−t} dt`, `u = x/B_o`.
pub fn pdf_ae2e(p: &KGParams, s: &MisalignmentStats, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("pdf of A_e2e requires x > 0, got {x}")));
    }
    let u = x / s.b_o;
    let opts = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-11, max_subdivisions: 4000 };
    let r = try_integrate_to_infinity(
        |t| {
            let g = t / s.zeta;
            let arg = u * g.exp();
            if !arg.is_finite() || (-t).exp() == 0.0 {
                return Ok(0.0);
            }
            Ok((ln_pdf_a(p, arg)? + g - t).exp() / s.b_o)
        },
        0.0,
        opts,
    )?;
    Ok(r.value)
}
