//! Random-graph samplers for the key-predistribution model.
//!
//! Three coupled models live here: the random key graph (edge iff two key
//! rings intersect), the Erdős–Rényi on/off channel graph, and their
//! intersection — the graph of node pairs that both share a key and have an
//! operational channel. The exact per-pair edge probabilities are computed
//! alongside so simulations can be checked against closed forms.

use crate::graph::Graph;
use rand::Rng;
use serde::Serialize;
use std::collections::HashSet;

/// One network scenario: `n` nodes, each holding a ring of `ring_size`
/// distinct keys drawn from a pool of `pool_size`, every link independently
/// on with probability `on_prob`, evaluated at connectivity level `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub n: usize,
    pub ring_size: usize,
    pub pool_size: usize,
    pub on_prob: f64,
    pub k: usize,
}

impl ModelParams {
    pub fn new(
        n: usize,
        ring_size: usize,
        pool_size: usize,
        on_prob: f64,
        k: usize,
    ) -> Result<Self, ModelError> {
        let params = ModelParams {
            n,
            ring_size,
            pool_size,
            on_prob,
            k,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.n == 0 {
            return Err(ModelError::EmptyNetwork);
        }
        if self.ring_size == 0 {
            return Err(ModelError::ZeroRingSize);
        }
        if self.ring_size > self.pool_size {
            return Err(ModelError::RingExceedsPool {
                ring_size: self.ring_size,
                pool_size: self.pool_size,
            });
        }
        if !(0.0..=1.0).contains(&self.on_prob) {
            return Err(ModelError::InvalidChannelProbability(self.on_prob));
        }
        if self.k == 0 {
            return Err(ModelError::ZeroConnectivityLevel);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    EmptyNetwork,
    ZeroRingSize,
    RingExceedsPool { ring_size: usize, pool_size: usize },
    InvalidChannelProbability(f64),
    ZeroConnectivityLevel,
}

impl std::fmt::Display for ModelError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ModelError::EmptyNetwork => write!(f, "node count n must be at least 1"),
            ModelError::ZeroRingSize => write!(f, "key ring size K must be at least 1"),
            ModelError::RingExceedsPool {
                ring_size,
                pool_size,
            } => write!(
                f,
                "key ring size K={ring_size} exceeds pool size P={pool_size}"
            ),
            ModelError::InvalidChannelProbability(p) => {
                write!(f, "channel probability p={p} outside [0, 1]")
            }
            ModelError::ZeroConnectivityLevel => {
                write!(f, "connectivity level k must be at least 1")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// Exact per-pair probabilities for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeProbabilities {
    /// probability that two independent rings share at least one key
    pub share_prob: f64,
    /// probability of an edge in the intersection graph: `on_prob * share_prob`
    pub edge_prob: f64,
    /// the simple surrogate `on_prob * K^2 / P`; may exceed 1, reported raw
    pub approx_edge_prob: f64,
}

/// Probability that two independent `ring_size`-subsets of a pool of
/// `pool_size` keys intersect: `1 - C(P-K, K) / C(P, K)`.
///
/// The binomial vanishes exactly when `P < 2K` — two disjoint rings no
/// longer fit in the pool — so sharing is certain there. At `P = 2K` one
/// disjoint pair per ring still exists and the probability stays below 1.
///
/// Evaluated as a product of `K` ratios, each in (0, 1], so it stays in
/// double precision without overflowing factorials even for large pools.
pub fn key_share_probability(ring_size: usize, pool_size: usize) -> Result<f64, ModelError> {
    if ring_size == 0 {
        return Err(ModelError::ZeroRingSize);
    }
    if ring_size > pool_size {
        return Err(ModelError::RingExceedsPool {
            ring_size,
            pool_size,
        });
    }
    if pool_size < 2 * ring_size {
        return Ok(1.0);
    }
    // C(P-K, K) / C(P, K) = prod_{i=0}^{K-1} (P-K-i) / (P-i)
    let mut ratio = 1.0f64;
    for i in 0..ring_size {
        ratio *= (pool_size - ring_size - i) as f64 / (pool_size - i) as f64;
    }
    Ok(1.0 - ratio)
}

/// Exact edge probability of the intersection graph for one scenario,
/// together with the simple `p*K^2/P` surrogate.
pub fn edge_probability(params: &ModelParams) -> Result<EdgeProbabilities, ModelError> {
    params.validate()?;
    let share_prob = key_share_probability(params.ring_size, params.pool_size)?;
    let k = params.ring_size as f64;
    Ok(EdgeProbabilities {
        share_prob,
        edge_prob: params.on_prob * share_prob,
        approx_edge_prob: params.on_prob * k * k / params.pool_size as f64,
    })
}

/// The key rings `S_0..S_{n-1}`: per node, a sorted set of distinct key
/// identifiers drawn from `1..=pool_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyAssignment {
    pool_size: usize,
    rings: Vec<Vec<usize>>,
}

impl KeyAssignment {
    pub fn node_count(&self) -> usize {
        self.rings.len()
    }

    pub fn pool_size(&self) -> usize {
        self.pool_size
    }

    /// Sorted key ring of `node`.
    pub fn ring(&self, node: usize) -> &[usize] {
        &self.rings[node]
    }

    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }
}

/// Draws `n` independent uniform `ring_size`-subsets of the key pool.
///
/// Each ring is sampled with Floyd's algorithm: `ring_size` draws per node,
/// exact uniformity, no O(pool) shuffle allocation. Deterministic given the
/// RNG state; panics on invalid params.
pub fn sample_key_assignment<R: Rng>(params: &ModelParams, rng: &mut R) -> KeyAssignment {
    params.validate().expect("valid model params");
    let mut rings = Vec::with_capacity(params.n);
    let mut chosen = HashSet::with_capacity(params.ring_size);
    for _ in 0..params.n {
        chosen.clear();
        for j in (params.pool_size - params.ring_size + 1)..=params.pool_size {
            let t = rng.gen_range(1..=j);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        let mut ring: Vec<usize> = chosen.iter().copied().collect();
        ring.sort_unstable();
        rings.push(ring);
    }
    KeyAssignment {
        pool_size: params.pool_size,
        rings,
    }
}

/// Builds the random key graph: edge `(i, j)` iff rings `i` and `j` share a
/// key.
///
/// Candidate pairs are enumerated through a key -> holders inverted index,
/// so the cost is near `sum over keys of holders^2` instead of all `n^2`
/// pairs.
pub fn build_key_graph(assignment: &KeyAssignment) -> Graph {
    let n = assignment.node_count();
    let pool = assignment.pool_size();

    // counting layout of the inverted index: holders of key k live at
    // members[offsets[k]..offsets[k + 1]]
    let mut offsets = vec![0usize; pool + 2];
    for ring in assignment.rings() {
        for &key in ring {
            offsets[key + 1] += 1;
        }
    }
    for key in 0..=pool {
        offsets[key + 1] += offsets[key];
    }
    let total: usize = offsets[pool + 1];
    let mut members = vec![0usize; total];
    let mut cursor = offsets.clone();
    for (node, ring) in assignment.rings().iter().enumerate() {
        for &key in ring {
            members[cursor[key]] = node;
            cursor[key] += 1;
        }
    }

    let mut edges = Vec::new();
    for key in 1..=pool {
        let holders = &members[offsets[key]..offsets[key + 1]];
        for (idx, &u) in holders.iter().enumerate() {
            for &v in &holders[idx + 1..] {
                edges.push(if u < v { (u, v) } else { (v, u) });
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Samples an Erdős–Rényi graph G(n, p): every unordered pair is an edge
/// independently with probability `p`.
///
/// Uses geometric skipping over the pair sequence, so the expected cost is
/// proportional to the number of edges rather than `n^2`.
pub fn sample_er_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    assert!(
        p.is_finite() && (0.0..=1.0).contains(&p),
        "edge probability p={p} outside [0, 1]"
    );
    if p == 0.0 || n < 2 {
        return Graph::new(n);
    }
    if p == 1.0 {
        return Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))));
    }
    let ln_miss = (1.0 - p).ln();
    let mut edges = Vec::new();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / ln_miss).floor() as i64;
        w += 1 + skip;
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    Graph::from_edges(n, edges)
}

/// Samples the intersection graph: edge iff the rings share a key and an
/// independent Bernoulli(`on_prob`) channel draw succeeds.
///
/// Realized by building the key graph first and thinning each of its edges
/// independently with probability `on_prob` — the full channel matrix is
/// never materialized, and by independence the joint distribution is the
/// same as intersecting with a full G(n, p) sample.
pub fn sample_intersection_graph<R: Rng>(params: &ModelParams, rng: &mut R) -> Graph {
    let assignment = sample_key_assignment(params, rng);
    let key_graph = build_key_graph(&assignment);
    let mut edges = Vec::with_capacity(key_graph.edge_count());
    for (u, v) in key_graph.edges() {
        if rng.gen_bool(params.on_prob) {
            edges.push((u, v));
        }
    }
    Graph::from_edges(params.n, edges)
}
