//! Seeded, parallel Monte Carlo harness.
//!
//! A sweep walks a grid of (channel probability, ring size) cells, samples
//! `trials` intersection graphs per cell, and records how often the graph
//! is k-connected and how often its minimum degree reaches k, next to the
//! analytical prediction. Per-trial seeds are derived by stable 64-bit
//! mixing of (master seed, ring size, probability index, trial index), so
//! aggregated results are byte-identical no matter how many workers run or
//! how the scheduler interleaves them. Aggregation itself is pure integer
//! counting — a commutative monoid — so reduction order cannot matter
//! either.

use crate::analysis::{self, AnalysisError};
use crate::connectivity::is_k_connected;
use crate::models::{sample_intersection_graph, ModelParams};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;

/// Monte Carlo sweep over a (p, K) grid at fixed n, P, k.
#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub n: usize,
    pub pool_size: usize,
    pub k: usize,
    /// channel-on probabilities; normalized to sorted-unique order
    pub p_values: Vec<f64>,
    /// key ring sizes; normalized to sorted-unique order
    pub ring_sizes: Vec<usize>,
    /// samples per (p, K) cell
    pub trials: u64,
    pub master_seed: u64,
    /// confidence level for the Wilson intervals
    pub confidence: f64,
}

impl SweepConfig {
    /// Validates every cell's parameters up front and returns the config
    /// with `p_values` and `ring_sizes` sorted and deduplicated (row order
    /// and seed derivation follow the normalized order).
    pub fn normalized(&self) -> Result<SweepConfig, SweepError> {
        if self.trials == 0 {
            return Err(SweepError::Config("trials must be at least 1".into()));
        }
        if self.ring_sizes.is_empty() {
            return Err(SweepError::Config("ring size range is empty".into()));
        }
        if self.p_values.is_empty() {
            return Err(SweepError::Config("no channel probabilities given".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(SweepError::Config(format!(
                "confidence level {} outside (0, 1)",
                self.confidence
            )));
        }
        let mut config = self.clone();
        config
            .p_values
            .sort_by(|a, b| a.partial_cmp(b).expect("finite probabilities"));
        config.p_values.dedup();
        config.ring_sizes.sort_unstable();
        config.ring_sizes.dedup();
        for &p in &config.p_values {
            for &ring_size in &config.ring_sizes {
                let params = ModelParams::new(config.n, ring_size, config.pool_size, p, config.k)
                    .map_err(AnalysisError::from);
                let params = params.map_err(|source| SweepError::Cell {
                    ring_size,
                    on_prob: p,
                    source,
                })?;
                if params.n < 3 {
                    return Err(SweepError::Config(format!(
                        "node count n={} too small, need n >= 3",
                        params.n
                    )));
                }
            }
        }
        Ok(config)
    }
}

/// One trial: a single intersection-graph sample and its verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub k_connected: bool,
    pub min_degree: usize,
    /// number of nodes of degree h, for h = 0..=k
    pub degree_counts: Vec<u64>,
}

/// Aggregated outcome of one (p, K) cell.
#[derive(Debug, Clone, Serialize)]
pub struct CellResult {
    pub ring_size: usize,
    pub on_prob: f64,
    pub trials: u64,
    pub count_k_connected: u64,
    pub count_min_degree_ge_k: u64,
    /// trials with minimum degree >= k that still failed k-connectivity
    pub count_gap: u64,
    pub empirical_prob: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// asymptotic prediction for this cell
    pub analytical_prob: f64,
    /// scaling deviation of the exact edge probability
    pub alpha: f64,
    /// summed degree histogram over all trials, h = 0..=k
    pub degree_counts: Vec<u64>,
    /// per degree h = 0..=k, number of trials with no degree-h node at all
    pub trials_without_degree: Vec<u64>,
}

#[derive(Debug)]
pub enum SweepError {
    Config(String),
    Cell {
        ring_size: usize,
        on_prob: f64,
        source: AnalysisError,
    },
}

impl std::fmt::Display for SweepError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepError::Config(reason) => write!(f, "invalid sweep config: {reason}"),
            SweepError::Cell {
                ring_size,
                on_prob,
                source,
            } => write!(f, "cell K={ring_size} p={on_prob} failed: {source}"),
        }
    }
}

impl std::error::Error for SweepError {}

/// Stable per-trial seed: splitmix64 mixing of the master seed with the
/// cell and trial coordinates. Independent of worker count and scheduling.
pub fn trial_seed(master_seed: u64, ring_size: u64, p_index: u64, trial_index: u64) -> u64 {
    let mut state = master_seed;
    for salt in [ring_size, p_index, trial_index] {
        state = splitmix64(state ^ splitmix64(salt));
    }
    state
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Samples one intersection graph and records its connectivity verdict,
/// minimum degree, and truncated degree histogram. Deterministic in
/// `seed`.
pub fn run_trial(params: &ModelParams, seed: u64) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = sample_intersection_graph(params, &mut rng);
    let verdict = is_k_connected(&graph, params.k);
    let spectrum = graph.degree_spectrum();
    let degree_counts = (0..=params.k)
        .map(|h| spectrum.count(h) as u64)
        .collect();
    TrialRecord {
        k_connected: verdict.is_k_connected,
        min_degree: verdict.min_degree,
        degree_counts,
    }
}

#[derive(Clone)]
struct CellAccum {
    k_connected: u64,
    min_degree_ok: u64,
    degree_counts: Vec<u64>,
    trials_without_degree: Vec<u64>,
}

impl CellAccum {
    fn new(k: usize) -> Self {
        CellAccum {
            k_connected: 0,
            min_degree_ok: 0,
            degree_counts: vec![0; k + 1],
            trials_without_degree: vec![0; k + 1],
        }
    }

    fn add(mut self, record: &TrialRecord, k: usize) -> Self {
        self.k_connected += record.k_connected as u64;
        self.min_degree_ok += (record.min_degree >= k) as u64;
        for (h, &count) in record.degree_counts.iter().enumerate() {
            self.degree_counts[h] += count;
            self.trials_without_degree[h] += (count == 0) as u64;
        }
        self
    }

    fn merge(mut self, other: &CellAccum) -> Self {
        self.k_connected += other.k_connected;
        self.min_degree_ok += other.min_degree_ok;
        for (a, b) in self.degree_counts.iter_mut().zip(&other.degree_counts) {
            *a += b;
        }
        for (a, b) in self
            .trials_without_degree
            .iter_mut()
            .zip(&other.trials_without_degree)
        {
            *a += b;
        }
        self
    }
}

/// Runs every (p, K) cell of the sweep, trials in parallel, and returns one
/// [`CellResult`] per cell in (p, K) order. Any cell failure aborts the
/// sweep with the offending cell identified.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<CellResult>, SweepError> {
    let config = config.normalized()?;
    let mut cells = Vec::with_capacity(config.p_values.len() * config.ring_sizes.len());
    for (p_index, &on_prob) in config.p_values.iter().enumerate() {
        for &ring_size in &config.ring_sizes {
            let params = ModelParams {
                n: config.n,
                ring_size,
                pool_size: config.pool_size,
                on_prob,
                k: config.k,
            };
            let cell = run_cell(&config, &params, p_index).map_err(|source| SweepError::Cell {
                ring_size,
                on_prob,
                source,
            })?;
            cells.push(cell);
        }
    }
    Ok(cells)
}

fn run_cell(
    config: &SweepConfig,
    params: &ModelParams,
    p_index: usize,
) -> Result<CellResult, AnalysisError> {
    let prediction = analysis::predict(params)?;
    let k = params.k;
    let accum = (0..config.trials)
        .into_par_iter()
        .map(|trial| {
            run_trial(
                params,
                trial_seed(config.master_seed, params.ring_size as u64, p_index as u64, trial),
            )
        })
        .fold(
            || CellAccum::new(k),
            |acc, record| acc.add(&record, k),
        )
        .reduce(|| CellAccum::new(k), |a, b| a.merge(&b));

    debug_assert!(accum.k_connected <= accum.min_degree_ok);
    let empirical_prob = accum.k_connected as f64 / config.trials as f64;
    let (ci_low, ci_high) = wilson_interval(accum.k_connected, config.trials, config.confidence);
    Ok(CellResult {
        ring_size: params.ring_size,
        on_prob: params.on_prob,
        trials: config.trials,
        count_k_connected: accum.k_connected,
        count_min_degree_ge_k: accum.min_degree_ok,
        count_gap: accum.min_degree_ok - accum.k_connected,
        empirical_prob,
        ci_low,
        ci_high,
        analytical_prob: prediction.prob_k_connected,
        alpha: prediction.scaling.alpha,
        degree_counts: accum.degree_counts,
        trials_without_degree: accum.trials_without_degree,
    })
}

/// Wilson score confidence interval for a binomial proportion, clamped to
/// [0, 1]. Well behaved at 0 and 1 successes, where the Wald interval
/// collapses.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials >= 1, "need at least one trial");
    assert!(successes <= trials, "more successes than trials");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence level {confidence} outside (0, 1)"
    );
    let z = normal_quantile((1.0 + confidence) / 2.0);
    let t = trials as f64;
    let p_hat = successes as f64 / t;
    let z2 = z * z;
    let denom = 1.0 + z2 / t;
    let center = (p_hat + z2 / (2.0 * t)) / denom;
    let half = z / denom * (p_hat * (1.0 - p_hat) / t + z2 / (4.0 * t * t)).sqrt();
    // at the boundaries the interval touches 0/1 exactly; rounding noise
    // inside sqrt would otherwise leave it epsilon short
    let low = if successes == 0 { 0.0 } else { (center - half).max(0.0) };
    let high = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (low, high)
}

/// Inverse standard normal CDF, Acklam's rational approximation
/// (relative error below 1.15e-9 over the open unit interval).
fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile argument {p} outside (0, 1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.383577518672690e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// One row of a degree-count goodness-of-fit report.
#[derive(Debug, Clone, Serialize)]
pub struct GofRow {
    pub degree: usize,
    pub lambda: f64,
    /// Poisson prediction for P[no node of this degree]: e^{-lambda}
    pub predicted_zero_prob: f64,
    pub empirical_zero_prob: f64,
    pub deviation: f64,
    /// 3 binomial standard errors of the prediction at this trial count
    pub three_sigma: f64,
    pub within_three_sigma: bool,
}

/// Compares, for each degree h < k, the empirical frequency of "no node
/// has degree h" against the Poisson prediction `e^{-lambda_h}`, with a
/// 3-sigma binomial flag.
pub fn degree_count_gof(cell: &CellResult, lambdas: &[f64]) -> Vec<GofRow> {
    let k = cell.degree_counts.len() - 1;
    assert!(lambdas.len() > k.saturating_sub(1), "need lambda_h for h < k");
    (0..k)
        .map(|h| {
            let lambda = lambdas[h];
            let predicted = (-lambda).exp();
            let empirical = cell.trials_without_degree[h] as f64 / cell.trials as f64;
            let deviation = (empirical - predicted).abs();
            let three_sigma = 3.0 * (predicted * (1.0 - predicted) / cell.trials as f64).sqrt();
            GofRow {
                degree: h,
                lambda,
                predicted_zero_prob: predicted,
                empirical_zero_prob: empirical,
                deviation,
                three_sigma,
                within_three_sigma: deviation <= three_sigma,
            }
        })
        .collect()
}

/// Renders a sweep as CSV, one row per cell, sorted by (p, K). Floats carry
/// six significant digits.
pub fn sweep_csv(config: &SweepConfig, cells: &[CellResult]) -> String {
    let mut out = String::from(
        "n,P,k,p,K,trials,count_kconn,count_mindeg,count_gap,emp_prob,ci_low,ci_high,analytical_prob,alpha\n",
    );
    for cell in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            config.n,
            config.pool_size,
            config.k,
            fmt_sig6(cell.on_prob),
            cell.ring_size,
            cell.trials,
            cell.count_k_connected,
            cell.count_min_degree_ge_k,
            cell.count_gap,
            fmt_sig6(cell.empirical_prob),
            fmt_sig6(cell.ci_low),
            fmt_sig6(cell.ci_high),
            fmt_sig6(cell.analytical_prob),
            fmt_sig6(cell.alpha),
        );
    }
    out
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    config: &'a SweepConfig,
    cells: &'a [CellResult],
}

/// Renders a sweep as pretty JSON: the config echo (including the master
/// seed) plus every cell with full-precision numbers.
pub fn sweep_json(config: &SweepConfig, cells: &[CellResult]) -> String {
    serde_json::to_string_pretty(&SweepOutput { config, cells }).expect("serializable sweep")
}

/// Formats with six significant digits, in the style of printf `%.6g`:
/// fixed point in the mid range, scientific outside it, trailing zeros
/// trimmed.
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-4..6).contains(&magnitude) {
        let decimals = (5 - magnitude).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let formatted = format!("{x:.5e}");
        let (mantissa, exponent) = formatted.split_once('e').expect("exponent present");
        format!("{}e{}", trim_zeros(mantissa), exponent)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
