//! Seeded photon-counting campaigns for the odd-count decision rule.
//!
//! Photon numbers are drawn by inverse-CDF lookup in the exact distribution
//! of the displaced cat. Bins with zero probability (the odd bins of the
//! undisplaced cat) can never be selected, so a null campaign produces no
//! odd counts for any seed.
//!
//! # Reproducibility
//!
//! Every campaign is split into shards of [`SHARD_SHOTS`] shots. Shard `i`
//! of the signal campaign draws from `ChaCha20Rng::seed_from_u64(seed)` on
//! stream `2i`, shard `i` of the null campaign from stream `2i + 1`. Each
//! uniform deviate is `rand`'s standard `f64` in `[0, 1)`. Shards are merged
//! by summing histograms, so the result does not depend on how many worker
//! threads ran them.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, CatParams};
use crate::error::{Error, Result};

/// Identifier of the generator and stream-splitting rule recorded in outputs.
pub const RNG_ALGORITHM: &str = "chacha20/seed_from_u64/stream-per-shard/v1";
pub const SHARD_SHOTS: u64 = 1 << 16;
/// The sampling table stops once this much probability is covered; the
/// remainder goes to the last bin.
pub const TABLE_COVERAGE: f64 = 1.0 - 1e-12;
/// Largest photon-number table the sampler will build.
pub const MAX_TABLE_LEN: usize = 1 << 24;
/// Two-sided 95% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub algorithm: String,
}

impl RngSpec {
    pub fn new(seed: u64) -> Self {
        RngSpec {
            seed,
            algorithm: RNG_ALGORITHM.to_string(),
        }
    }

    fn check(&self) -> Result<()> {
        if self.algorithm == RNG_ALGORITHM {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "unsupported generator {:?}, expected {RNG_ALGORITHM:?}",
                self.algorithm
            )))
        }
    }

    fn shard_rng(&self, campaign: Campaign, shard: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(2 * shard + campaign as u64);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Campaign {
    Signal = 0,
    Null = 1,
}

/// Cumulative photon-number distribution truncated at [`TABLE_COVERAGE`].
#[derive(Debug, Clone)]
pub struct SamplingTable {
    cdf: Vec<f64>,
}

impl SamplingTable {
    pub fn new(params: &CatParams) -> Result<Self> {
        let mu = params.branch_intensity();
        let limit = (4.0 * mu) as usize + 200;
        if limit > MAX_TABLE_LEN {
            return Err(Error::Truncation {
                n_max: MAX_TABLE_LEN,
                lost: 1.0,
                tolerance: 1.0 - TABLE_COVERAGE,
            });
        }
        let probs = analytic::photon_distribution(params, limit);
        let mut cdf = Vec::new();
        let mut total = 0.0;
        for p in probs {
            total += p;
            cdf.push(total);
            if total >= TABLE_COVERAGE {
                *cdf.last_mut().expect("non-empty") = 1.0;
                return Ok(SamplingTable { cdf });
            }
        }
        Err(Error::Truncation {
            n_max: limit,
            lost: 1.0 - total,
            tolerance: 1.0 - TABLE_COVERAGE,
        })
    }

    /// Highest photon number that can be drawn.
    pub fn n_max(&self) -> usize {
        self.cdf.len() - 1
    }

    /// Probability of each bin as used by the sampler.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .map(|&c| {
                let p = c - prev;
                prev = c;
                p
            })
            .collect()
    }

    /// Photon number for a uniform deviate `u ∈ [0, 1)`.
    pub fn lookup(&self, u: f64) -> usize {
        self.cdf.partition_point(|&c| c <= u)
    }
}

/// Photon-number histogram; `counts[n]` is the number of shots with `n`
/// photons.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn odd(&self) -> u64 {
        self.counts.iter().skip(1).step_by(2).sum()
    }

    pub fn even(&self) -> u64 {
        self.counts.iter().step_by(2).sum()
    }

    fn merge(mut self, other: Histogram) -> Histogram {
        if other.counts.len() > self.counts.len() {
            self.counts.resize(other.counts.len(), 0);
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

fn run_campaign(table: &SamplingTable, shots: u64, rng: &RngSpec, campaign: Campaign) -> Histogram {
    let shards = shots.div_ceil(SHARD_SHOTS);
    (0..shards)
        .into_par_iter()
        .map(|shard| {
            let n = SHARD_SHOTS.min(shots - shard * SHARD_SHOTS);
            let mut gen = rng.shard_rng(campaign, shard);
            let mut counts = vec![0u64; table.n_max() + 1];
            for _ in 0..n {
                counts[table.lookup(gen.random::<f64>())] += 1;
            }
            Histogram { counts }
        })
        .reduce(Histogram::default, Histogram::merge)
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        Err(Error::InvalidArgument("at least one shot is required".into()))
    } else {
        Ok(())
    }
}

/// Draws `shots` photon numbers from the displaced-cat distribution.
pub fn sample_counts(params: &CatParams, shots: u64, rng: &RngSpec) -> Result<Histogram> {
    check_shots(shots)?;
    rng.check()?;
    let table = SamplingTable::new(params)?;
    Ok(run_campaign(&table, shots, rng, Campaign::Signal))
}

/// Wilson score interval for `successes` out of `trials` at normal quantile
/// `z`. Stays inside `[0, 1]` and is non-degenerate at rate 0.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    // The bounds at p̂ = 0 and p̂ = 1 are exactly 0 and 1.
    let lo = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Outcome of a signal campaign and a null campaign of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionStats {
    pub alpha: f64,
    pub delta: f64,
    pub shots: u64,
    /// Odd counts in the signal campaign (correct detections).
    pub odd_count: u64,
    /// Even counts in the signal campaign (misses).
    pub even_count: u64,
    pub null_odd_count: u64,
    pub null_even_count: u64,
    pub false_negative_rate: f64,
    pub false_positive_rate: f64,
    /// Half-width of the 95% Wilson interval on the false-negative rate.
    pub ci_halfwidth: f64,
    pub false_negative_ci: (f64, f64),
    pub false_positive_ci: (f64, f64),
    pub seed: u64,
    pub rng_algorithm: String,
}

/// Runs a signal campaign at `delta_signal` and a null campaign at `δ = 0`
/// and scores them with the rule "odd count means signal present".
pub fn detection_experiment(
    alpha: f64,
    delta_signal: f64,
    shots: u64,
    rng: &RngSpec,
) -> Result<DetectionStats> {
    check_shots(shots)?;
    rng.check()?;
    let signal_table = SamplingTable::new(&CatParams::new(alpha, delta_signal)?)?;
    let null_table = SamplingTable::new(&CatParams::new(alpha, 0.0)?)?;
    let signal = run_campaign(&signal_table, shots, rng, Campaign::Signal);
    let null = run_campaign(&null_table, shots, rng, Campaign::Null);

    let n = shots as f64;
    let false_negative_ci = wilson_interval(signal.even(), shots, Z_95);
    Ok(DetectionStats {
        alpha,
        delta: delta_signal,
        shots,
        odd_count: signal.odd(),
        even_count: signal.even(),
        null_odd_count: null.odd(),
        null_even_count: null.even(),
        false_negative_rate: signal.even() as f64 / n,
        false_positive_rate: null.odd() as f64 / n,
        ci_halfwidth: 0.5 * (false_negative_ci.1 - false_negative_ci.0),
        false_negative_ci,
        false_positive_ci: wilson_interval(null.odd(), shots, Z_95),
        seed: rng.seed,
        rng_algorithm: rng.algorithm.clone(),
    })
}
