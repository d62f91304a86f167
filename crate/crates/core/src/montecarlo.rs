//! Monte Carlo ground truth for the outage probability and the cascade CDFs.
//!
//! Samples are generated in fixed-size chunks. Chunk `i` draws from a
//! ChaCha8 stream seeded with the configured seed and stream number `i`, so
//! the estimate is a pure function of `(inputs, seed, chunk_size)` and never
//! of the number of workers. Counts are aggregated as integers.
//!
//! Hardware distortion is not drawn as explicit noise: given a channel draw
//! the SDNR `γ A_e2e² / (γ (κ_s² + κ_d²) A_e2e² + 1)` is exact, so outage is a
//! deterministic function of `(A, h_g)`.

use std::time::Instant;

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{EnvelopeSampler, MGDistribution};
use crate::geometry::{sample_hg, MisalignmentStats};
use crate::outage::HardwareProfile;

/// Default number of samples per chunk.
pub const DEFAULT_CHUNK: u64 = 1 << 16;

/// Estimates below this many outage events carry a low-count warning.
pub const LOW_COUNT: u64 = 10;

/// Size of the worker pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Workers {
    /// One worker per available core.
    #[default]
    Auto,
    /// A fixed number of workers.
    #[serde(untagged)]
    Fixed(usize),
}

/// Monte Carlo configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MCConfig {
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub workers: Workers,
}

impl Default for MCConfig {
    fn default() -> Self {
        Self { samples: 1_000_000, seed: 0x5EED, chunk_size: DEFAULT_CHUNK, workers: Workers::Auto }
    }
}

impl MCConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        Self { samples, seed, ..Self::default() }
    }

    pub fn with_workers(self, workers: Workers) -> Self {
        Self { workers, ..self }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Config("Monte Carlo needs at least one sample".into()));
        }
        if self.chunk_size == 0 {
            return Err(Error::Config("chunk_size must be positive".into()));
        }
        if self.workers == Workers::Fixed(0) {
            return Err(Error::Config("workers must be positive".into()));
        }
        Ok(())
    }

    /// `(chunk index, samples in chunk)` for every chunk.
    fn chunks(&self) -> impl ParallelIterator<Item = (u64, u64)> + '_ {
        let n_chunks = self.samples.div_ceil(self.chunk_size);
        (0..n_chunks).into_par_iter().map(move |i| {
            let start = i * self.chunk_size;
            (i, self.chunk_size.min(self.samples - start))
        })
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Workers::Fixed(n) = self.workers {
            builder = builder.num_threads(n);
        }
        builder.build().map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))
    }

    fn stream(&self, chunk: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chunk);
        rng
    }
}

/// An outage-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MCEstimate {
    pub op_hat: f64,
    /// Binomial standard error `√(p̂(1 − p̂)/n)`.
    pub stderr: f64,
    pub n: u64,
    /// Wall-clock seconds.
    pub elapsed: f64,
    /// Fewer than [`LOW_COUNT`] outage events were observed: the estimate
    /// cannot certify the tail.
    pub low_count: bool,
}

/// One point of an empirical CDF.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub x: f64,
    pub cdf: f64,
    pub stderr: f64,
}

fn binomial(count: u64, n: u64) -> (f64, f64) {
    let p = count as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}

/// Draws `A_e2e = h_g Σ|hᵢ||gᵢ|` (with `h_g = 1` when `mis` is absent).
struct GainSampler<'a> {
    hop1: EnvelopeSampler,
    hop2: EnvelopeSampler,
    n_elements: usize,
    mis: Option<&'a MisalignmentStats>,
}

impl<'a> GainSampler<'a> {
    fn new(
        d1: &MGDistribution,
        d2: &MGDistribution,
        n_elements: usize,
        mis: Option<&'a MisalignmentStats>,
    ) -> Result<Self> {
        if n_elements == 0 {
            return Err(Error::Config("the RIS needs at least one element".into()));
        }
        Ok(Self { hop1: d1.sampler(), hop2: d2.sampler(), n_elements, mis })
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let a: f64 = (0..self.n_elements).map(|_| self.hop1.sample(rng) * self.hop2.sample(rng)).sum();
        match self.mis {
            Some(s) => sample_hg(s, rng) * a,
            None => a,
        }
    }
}

/// Estimates `P(γ_u ≤ γ_th)` by simulating the channel.
#[allow(clippy::too_many_arguments)]
pub fn simulate_op(
    d1: &MGDistribution,
    d2: &MGDistribution,
    n_elements: usize,
    mis: Option<&MisalignmentStats>,
    hw: &HardwareProfile,
    gamma: f64,
    gamma_th: f64,
    cfg: &MCConfig,
) -> Result<MCEstimate> {
    cfg.validate()?;
    if !(gamma > 0.0 && gamma_th > 0.0) {
        return Err(Error::Config(format!("gamma and gamma_th must be positive, got {gamma}, {gamma_th}")));
    }
    let start = Instant::now();
    let sampler = GainSampler::new(d1, d2, n_elements, mis)?;
    let distortion = hw.distortion();
    let outages: u64 = cfg.pool()?.install(|| {
        cfg.chunks()
            .map(|(chunk, len)| {
                let mut rng = cfg.stream(chunk);
                (0..len)
                    .filter(|_| {
                        let g2 = sampler.sample(&mut rng).powi(2);
                        let sdnr = gamma * g2 / (gamma * distortion * g2 + 1.0);
                        sdnr <= gamma_th
                    })
                    .count() as u64
            })
            .sum()
    });
    let (op_hat, stderr) = binomial(outages, cfg.samples);
    Ok(MCEstimate {
        op_hat,
        stderr,
        n: cfg.samples,
        elapsed: start.elapsed().as_secs_f64(),
        low_count: outages < LOW_COUNT,
    })
}

/// Empirical CDF of `A` (or `A_e2e` when `mis` is present) on a strictly
/// increasing, non-negative grid, from one shared sample set.
pub fn simulate_cdf(
    d1: &MGDistribution,
    d2: &MGDistribution,
    n_elements: usize,
    mis: Option<&MisalignmentStats>,
    grid: &[f64],
    cfg: &MCConfig,
) -> Result<Vec<CdfPoint>> {
    cfg.validate()?;
    if grid.is_empty() || grid[0] < 0.0 || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config("CDF grid must be non-empty, non-negative and strictly increasing".into()));
    }
    let sampler = GainSampler::new(d1, d2, n_elements, mis)?;
    let counts = cfg.pool()?.install(|| {
        cfg.chunks()
            .map(|(chunk, len)| {
                let mut rng = cfg.stream(chunk);
                let mut hist = vec![0u64; grid.len()];
                for _ in 0..len {
                    let v = sampler.sample(&mut rng);
                    // first grid point with v <= x; every later point counts it too
                    let idx = grid.partition_point(|&x| x < v);
                    if idx < grid.len() {
                        hist[idx] += 1;
                    }
                }
                hist
            })
            .reduce(
                || vec![0u64; grid.len()],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            )
    });
    let mut cumulative = 0;
    Ok(grid
        .iter()
        .zip(counts)
        .map(|(&x, c)| {
            cumulative += c;
            let (cdf, stderr) = binomial(cumulative, cfg.samples);
            CdfPoint { x, cdf, stderr }
        })
        .collect())
}
