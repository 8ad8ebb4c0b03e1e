//! Closed-form asymptotics for k-connectivity of the intersection graph.
//!
//! The central quantity is the deviation `alpha` of an edge probability `q`
//! from the k-connectivity threshold, defined through
//!
//! ```text
//! q = (ln n + (k-1) ln ln n + alpha) / n
//! ```
//!
//! For large n the probability that the graph is k-connected — and equally
//! the probability that its minimum degree is at least k — approaches
//! `exp(-exp(-alpha) / (k-1)!)`. The same decomposition applied to the
//! surrogate `p*K^2/P` yields `beta`. This module evaluates those forms,
//! the Poisson means for the low-degree node counts, and the inverse
//! problem of dimensioning the key ring for a target probability.

use crate::models::{edge_probability, EdgeProbabilities, ModelError, ModelParams};
use serde::Serialize;

/// Display-only classification of the deviation; thresholds at |alpha| = 10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Deviations of the exact and the approximate edge probability from the
/// k-connectivity scaling threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingDecomposition {
    /// deviation of the exact edge probability q
    pub alpha: f64,
    /// deviation of the surrogate p*K^2/P
    pub beta: f64,
    /// classification of alpha, cosmetic only
    pub regime: Regime,
}

/// Full analytical prediction for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub probs: EdgeProbabilities,
    pub scaling: ScalingDecomposition,
    /// asymptotic probability of k-connectivity
    pub prob_k_connected: f64,
    /// asymptotic probability of minimum degree >= k; shares the same limit
    pub prob_min_degree_ge_k: f64,
    /// Poisson means for the number of degree-h nodes, h = 0..=k
    pub degree_means: Vec<f64>,
}

/// Result of dimensioning the key ring size against a target probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimensioning {
    /// smallest ring size meeting the target
    pub ring_size: usize,
    /// predicted probability at `ring_size`
    pub prob: f64,
    /// predicted probability one ring size below, when `ring_size > 1`
    pub prob_prev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    NodeCountTooSmall { n: usize },
    InvalidEdgeProbability(f64),
    InvalidTarget(f64),
    TargetInfeasible { target: f64, best: f64 },
    Model(ModelError),
}

impl std::fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AnalysisError::NodeCountTooSmall { n } => {
                write!(f, "node count n={n} too small, need n >= 3 for ln ln n")
            }
            AnalysisError::InvalidEdgeProbability(q) => {
                write!(f, "edge probability q={q} must be finite and nonnegative")
            }
            AnalysisError::InvalidTarget(t) => {
                write!(f, "target probability {t} outside the open interval (0, 1)")
            }
            AnalysisError::TargetInfeasible { target, best } => write!(
                f,
                "target probability {target} infeasible: best attainable is {best}"
            ),
            AnalysisError::Model(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for AnalysisError {}

impl From<ModelError> for AnalysisError {
    fn from(e: ModelError) -> Self {
        AnalysisError::Model(e)
    }
}

/// Deviation of the edge probability `q` from the scaling threshold:
/// `alpha = n*q - ln n - (k-1) ln ln n`.
///
/// `q` above 1 is accepted because the approximate edge probability may
/// exceed 1; `n >= 3` keeps `ln ln n` defined and positive.
pub fn scaling_deviation(n: usize, k: usize, q: f64) -> Result<f64, AnalysisError> {
    assert!(k >= 1, "connectivity level k must be at least 1");
    if n < 3 {
        return Err(AnalysisError::NodeCountTooSmall { n });
    }
    if !q.is_finite() || q < 0.0 {
        return Err(AnalysisError::InvalidEdgeProbability(q));
    }
    let n = n as f64;
    Ok(n * q - n.ln() - (k - 1) as f64 * n.ln().ln())
}

/// Inverse of [`scaling_deviation`]: the edge probability whose deviation
/// is `alpha`.
pub fn scaling_edge_prob(n: usize, k: usize, alpha: f64) -> Result<f64, AnalysisError> {
    assert!(k >= 1, "connectivity level k must be at least 1");
    if n < 3 {
        return Err(AnalysisError::NodeCountTooSmall { n });
    }
    let n = n as f64;
    Ok((n.ln() + (k - 1) as f64 * n.ln().ln() + alpha) / n)
}

/// Decomposes both the exact and the approximate edge probability of a
/// scenario into their scaling deviations.
pub fn decompose_scaling(
    n: usize,
    k: usize,
    probs: &EdgeProbabilities,
) -> Result<ScalingDecomposition, AnalysisError> {
    let alpha = scaling_deviation(n, k, probs.edge_prob)?;
    let beta = scaling_deviation(n, k, probs.approx_edge_prob)?;
    let regime = if alpha < -10.0 {
        Regime::Subcritical
    } else if alpha > 10.0 {
        Regime::Supercritical
    } else {
        Regime::Critical
    };
    Ok(ScalingDecomposition { alpha, beta, regime })
}

/// The limit probability `exp(-exp(-alpha) / (k-1)!)`.
///
/// Extreme deviations saturate to 0 or 1 in floating point; that is the
/// correct limit behavior, not an error.
pub fn asymptotic_k_connectivity_probability(alpha: f64, k: usize) -> f64 {
    assert!(k >= 1, "connectivity level k must be at least 1");
    (-(-alpha).exp() / factorial(k - 1)).exp()
}

/// Deviation that attains a target limit probability:
/// `alpha = -ln(-(k-1)! * ln target)` for `target` in (0, 1).
pub fn deviation_for_probability(target: f64, k: usize) -> Result<f64, AnalysisError> {
    assert!(k >= 1, "connectivity level k must be at least 1");
    if !(target > 0.0 && target < 1.0) {
        return Err(AnalysisError::InvalidTarget(target));
    }
    Ok(-(-factorial(k - 1) * target.ln()).ln())
}

/// Poisson means `lambda_h = n (nq)^h e^{-nq} / h!` for `h = 0..=k`:
/// the asymptotic mean number of degree-h nodes.
///
/// Evaluated in log space so large `(nq)^h` never overflows; `q = 0` yields
/// `lambda_0 = n` and zero for all higher degrees.
pub fn poisson_degree_means(n: usize, k: usize, q: f64) -> Vec<f64> {
    assert!(n >= 1, "node count must be at least 1");
    assert!(
        q.is_finite() && (0.0..=1.0).contains(&q),
        "edge probability q={q} outside [0, 1]"
    );
    let mean_degree = n as f64 * q;
    let ln_n = (n as f64).ln();
    (0..=k)
        .map(|h| {
            if mean_degree == 0.0 {
                return if h == 0 { n as f64 } else { 0.0 };
            }
            let ln_lambda =
                ln_n + h as f64 * mean_degree.ln() - mean_degree - ln_factorial(h);
            ln_lambda.exp()
        })
        .collect()
}

/// Analytical prediction for one scenario: exact edge probabilities, the
/// scaling decomposition, the limit k-connectivity probability, and the
/// Poisson degree means.
pub fn predict(params: &ModelParams) -> Result<Prediction, AnalysisError> {
    params.validate()?;
    if params.n < 3 {
        return Err(AnalysisError::NodeCountTooSmall { n: params.n });
    }
    let probs = edge_probability(params)?;
    let scaling = decompose_scaling(params.n, params.k, &probs)?;
    let prob = asymptotic_k_connectivity_probability(scaling.alpha, params.k);
    let degree_means = poisson_degree_means(params.n, params.k, probs.edge_prob);
    Ok(Prediction {
        probs,
        scaling,
        prob_k_connected: prob,
        prob_min_degree_ge_k: prob,
        degree_means,
    })
}

/// Smallest ring size K whose predicted k-connectivity probability reaches
/// `target`, found by binary search (the prediction is nondecreasing in K).
///
/// With `use_approx` the surrogate-based prediction (through beta) is
/// dimensioned instead of the exact one. In exact mode the share
/// probability saturates at 1 once `2K >= P`, so if the target is missed at
/// saturation no ring size can reach it.
pub fn dimension_key_ring(
    n: usize,
    pool_size: usize,
    on_prob: f64,
    k: usize,
    target: f64,
    use_approx: bool,
) -> Result<Dimensioning, AnalysisError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(AnalysisError::InvalidTarget(target));
    }
    let prob_at = |ring_size: usize| -> Result<f64, AnalysisError> {
        let params = ModelParams::new(n, ring_size, pool_size, on_prob, k)?;
        let prediction = predict(&params)?;
        Ok(if use_approx {
            asymptotic_k_connectivity_probability(prediction.scaling.beta, k)
        } else {
            prediction.prob_k_connected
        })
    };
    // In exact mode the prediction is constant for K >= ceil(P/2); in approx
    // mode the surrogate keeps growing all the way to K = P.
    let upper = if use_approx {
        pool_size
    } else {
        pool_size.div_ceil(2)
    };
    let best = prob_at(upper)?;
    if best < target {
        return Err(AnalysisError::TargetInfeasible { target, best });
    }
    let (mut lo, mut hi) = (1usize, upper);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if prob_at(mid)? >= target {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Dimensioning {
        ring_size: lo,
        prob: prob_at(lo)?,
        prob_prev: if lo > 1 { Some(prob_at(lo - 1)?) } else { None },
    })
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|i| i as f64).product()
}

fn ln_factorial(m: usize) -> f64 {
    (1..=m).map(|i| (i as f64).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_zero_at_threshold() {
        let q = (16.0f64).ln() / 16.0;
        assert!(scaling_deviation(16, 1, q).unwrap().abs() < 1e-12);

        let q = ((2000.0f64).ln() + (2000.0f64).ln().ln()) / 2000.0;
        assert!(scaling_deviation(2000, 2, q).unwrap().abs() < 1e-12);
    }

    #[test]
    fn deviation_rejects_tiny_n() {
        assert!(matches!(
            scaling_deviation(2, 1, 0.5),
            Err(AnalysisError::NodeCountTooSmall { n: 2 })
        ));
    }

    #[test]
    fn deviation_round_trips_through_edge_prob() {
        for &n in &[3usize, 16, 200, 2000, 1_000_000] {
            for k in 1..=4 {
                for &alpha in &[-3.0, -0.5, 0.0, 1.0, 8.0] {
                    let q = scaling_edge_prob(n, k, alpha).unwrap();
                    if q < 0.0 {
                        // below the threshold the inverse leaves valid edge
                        // probabilities (tiny n, very negative deviation)
                        continue;
                    }
                    let back = scaling_deviation(n, k, q).unwrap();
                    assert!(
                        (back - alpha).abs() <= 1e-12 * alpha.abs().max(1.0),
                        "n={n} k={k} alpha={alpha} back={back}"
                    );
                }
            }
        }
    }

    #[test]
    fn limit_probability_spot_values() {
        let p = asymptotic_k_connectivity_probability(0.0, 1);
        assert!((p - (-1.0f64).exp()).abs() < 1e-15);

        let p = asymptotic_k_connectivity_probability(0.0, 3);
        assert!((p - (-0.5f64).exp()).abs() < 1e-15);

        // algebraic inverse: alpha = -ln(-ln 0.9) at k = 2 gives exactly 0.9
        let alpha = -(-(0.9f64).ln()).ln();
        assert!((asymptotic_k_connectivity_probability(alpha, 2) - 0.9).abs() < 1e-15);
    }

    #[test]
    fn limit_probability_saturates_and_is_monotone() {
        assert_eq!(asymptotic_k_connectivity_probability(-800.0, 1), 0.0);
        assert_eq!(asymptotic_k_connectivity_probability(800.0, 1), 1.0);

        // strictly inside the representable band; beyond it both tails
        // saturate and equality is the correct float behavior
        let mut prev = asymptotic_k_connectivity_probability(-6.05, 2);
        for i in 0..=120 {
            let alpha = -6.0 + 0.1 * i as f64;
            let p = asymptotic_k_connectivity_probability(alpha, 2);
            assert!(p > prev, "not increasing at alpha={alpha}");
            prev = p;
        }
        // nondecreasing in k for fixed alpha; strictly so once (k-1)!
        // actually grows (0! = 1! makes k = 1 and k = 2 coincide)
        for k in 1..5 {
            let lower = asymptotic_k_connectivity_probability(0.3, k);
            let higher = asymptotic_k_connectivity_probability(0.3, k + 1);
            if k == 1 {
                assert_eq!(lower, higher);
            } else {
                assert!(higher > lower, "k={k}");
            }
        }
    }

    #[test]
    fn deviation_for_probability_round_trips() {
        for &target in &[0.1, 0.5, 0.9] {
            for k in 1..=3 {
                let alpha = deviation_for_probability(target, k).unwrap();
                let back = asymptotic_k_connectivity_probability(alpha, k);
                assert!((back - target).abs() < 1e-12, "target={target} k={k}");
            }
        }
        assert!(deviation_for_probability(0.0, 1).is_err());
        assert!(deviation_for_probability(1.0, 1).is_err());
    }

    #[test]
    fn poisson_means_hand_values() {
        let means = poisson_degree_means(7, 3, 0.0);
        assert_eq!(means, vec![7.0, 0.0, 0.0, 0.0]);

        // n=10, q=0.5: lambda_0 = 10 e^{-5}
        let means = poisson_degree_means(10, 2, 0.5);
        assert!((means[0] - 10.0 * (-5.0f64).exp()).abs() < 1e-12);

        // direct product form as an independent route to the log-space path
        let n = 2000usize;
        let q = scaling_edge_prob(n, 2, 0.0).unwrap();
        let means = poisson_degree_means(n, 2, q);
        let nq = n as f64 * q;
        for (h, &lambda) in means.iter().enumerate() {
            let direct = n as f64 * nq.powi(h as i32) * (-nq).exp() / factorial(h);
            assert!(
                (lambda - direct).abs() <= 1e-9 * direct.max(1.0),
                "h={h} lambda={lambda} direct={direct}"
            );
        }
        assert!((means[1] - 1.267).abs() < 1e-3);
    }

    #[test]
    fn poisson_mean_of_critical_degree_converges() {
        // lambda_{k-1} at deviation alpha approaches e^{-alpha}/(k-1)!; the
        // rate is ln ln n / ln n, so assert the gap shrinks with n and that
        // k = 1 is exact
        for &alpha in &[-1.0, 0.0, 1.0] {
            let q = scaling_edge_prob(1_000_000, 1, alpha).unwrap();
            let lambda = poisson_degree_means(1_000_000, 1, q)[0];
            assert!((lambda - (-alpha).exp()).abs() < 1e-9);

            for k in 2..=3usize {
                let limit = (-alpha).exp() / factorial(k - 1);
                let mut prev_gap = f64::INFINITY;
                for &n in &[1_000usize, 1_000_000, 1_000_000_000, 10usize.pow(12)] {
                    let q = scaling_edge_prob(n, k, alpha).unwrap();
                    let lambda = poisson_degree_means(n, k, q)[k - 1];
                    let gap = (lambda - limit).abs();
                    assert!(
                        gap < prev_gap,
                        "gap not shrinking at n={n} k={k} alpha={alpha}"
                    );
                    prev_gap = gap;
                }
            }
        }
    }

    #[test]
    fn predict_matches_figure_regimes() {
        let p = predict(&ModelParams::new(2000, 21, 10000, 0.5, 2).unwrap()).unwrap();
        assert!(p.prob_k_connected > 0.99, "got {}", p.prob_k_connected);
        assert_eq!(p.prob_k_connected, p.prob_min_degree_ge_k);
        assert_eq!(p.degree_means.len(), 3);

        let p = predict(&ModelParams::new(2000, 3, 10000, 0.2, 2).unwrap()).unwrap();
        assert!(p.prob_k_connected < 0.01, "got {}", p.prob_k_connected);

        // p = 1 reduces to the bare random key graph
        let with_channel = predict(&ModelParams::new(2000, 10, 10000, 1.0, 2).unwrap()).unwrap();
        assert_eq!(with_channel.probs.edge_prob, with_channel.probs.share_prob);
    }

    #[test]
    fn predict_composed_deviation_value() {
        // n=2000, K=18, P=10000, p=0.2: q = 0.2 s(18, 10000), alpha follows
        let p = predict(&ModelParams::new(2000, 18, 10000, 0.2, 2).unwrap()).unwrap();
        let expected_alpha =
            scaling_deviation(2000, 2, 0.2 * p.probs.share_prob).unwrap();
        assert_eq!(p.scaling.alpha, expected_alpha);
        assert!((p.scaling.alpha - 3.14513).abs() < 1e-4, "alpha={}", p.scaling.alpha);
    }

    #[test]
    fn dimensioning_scan_agreement() {
        let target = 0.9;
        let dim = dimension_key_ring(2000, 10000, 0.2, 2, target, false).unwrap();
        // independent linear scan over K
        let by_scan = (1..=10000)
            .find(|&ring| {
                predict(&ModelParams::new(2000, ring, 10000, 0.2, 2).unwrap())
                    .unwrap()
                    .prob_k_connected
                    >= target
            })
            .unwrap();
        assert_eq!(dim.ring_size, by_scan);
        assert_eq!(dim.ring_size, 18);
        assert!(dim.prob >= target);
        assert!(dim.prob_prev.unwrap() < target);
    }

    #[test]
    fn dimensioning_edge_cases() {
        // tiny target: K = 1 qualifies as soon as its prediction clears it
        let single = predict(&ModelParams::new(2000, 1, 250, 1.0, 2).unwrap()).unwrap();
        assert!(single.prob_k_connected > 1e-9);
        let dim = dimension_key_ring(2000, 250, 1.0, 2, 1e-9, false).unwrap();
        assert_eq!(dim.ring_size, 1);
        assert!(dim.prob_prev.is_none());

        // infeasible: even a saturated ring cannot reach the target
        let err = dimension_key_ring(2000, 10, 0.001, 2, 0.999_999, false).unwrap_err();
        assert!(matches!(err, AnalysisError::TargetInfeasible { .. }));

        assert!(dimension_key_ring(2000, 10, 0.5, 2, 1.5, false).is_err());
    }

    #[test]
    fn dimensioning_approx_mode_uses_beta() {
        // the surrogate-based ring size matches a scan over beta
        let target = 0.9;
        let dim = dimension_key_ring(2000, 10000, 0.2, 2, target, true).unwrap();
        let by_scan = (1..=10000)
            .find(|&ring| {
                let params = ModelParams::new(2000, ring, 10000, 0.2, 2).unwrap();
                let beta = predict(&params).unwrap().scaling.beta;
                asymptotic_k_connectivity_probability(beta, 2) >= target
            })
            .unwrap();
        assert_eq!(dim.ring_size, by_scan);
        assert_eq!(dim.ring_size, 18);
    }
}
