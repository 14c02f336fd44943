use std::collections::BTreeMap;

use super::reduce::{reduce_env_with, EnvWeighting, ReducedEnvState};
use super::MetricsError;
use crate::engine::TraceSet;
use crate::lattice::{chebyshev_distance, Lattice, Position};

/// Number of single-step moves, standing still included.
pub const DIRECTIONS: usize = 9;

/// Index in `0..9` of the move `from -> to`, or `None` if the cells are not
/// within one step of each other.
///
/// Given the current cell, the next cell and the move are in bijection, so
/// estimating on moves leaves every conditional measure unchanged while
/// shrinking the next-state alphabet from `N^2` to 9.
pub fn direction_index(from: Position, to: Position) -> Option<usize> {
    if chebyshev_distance(from, to) > 1 {
        return None;
    }
    let di = (i32::from(to.i) - i32::from(from.i) + 1) as usize;
    let dj = (i32::from(to.j) - i32::from(from.j) + 1) as usize;
    Some(di * 3 + dj)
}

/// Weighted counts over `(next, current, env)` triples.
#[derive(Clone, Debug, PartialEq)]
pub struct JointHistogram {
    dims: [usize; 3],
    weights: Vec<f64>,
    total_weight: f64,
}

impl JointHistogram {
    /// Zero histogram with alphabets of the given sizes.
    pub fn new(n_next: usize, n_current: usize, n_env: usize) -> Self {
        Self {
            dims: [n_next, n_current, n_env],
            weights: vec![0.0; n_next * n_current * n_env],
            total_weight: 0.0,
        }
    }

    /// Wraps a dense table laid out `[next][current][env]`; the total weight
    /// is taken as given and checked by the estimators.
    pub fn from_parts(dims: [usize; 3], weights: Vec<f64>, total_weight: f64) -> Self {
        assert_eq!(weights.len(), dims.iter().product::<usize>(), "table size does not match dims");
        Self {
            dims,
            weights,
            total_weight,
        }
    }

    /// Dense table whose total is the sum of its entries.
    pub fn from_weights(dims: [usize; 3], weights: Vec<f64>) -> Self {
        let total = weights.iter().sum();
        Self::from_parts(dims, weights, total)
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    fn offset(&self, next: usize, current: usize, env: usize) -> usize {
        let [_, nc, ne] = self.dims;
        (next * nc + current) * ne + env
    }

    pub fn get(&self, next: usize, current: usize, env: usize) -> f64 {
        self.weights[self.offset(next, current, env)]
    }

    pub fn add(&mut self, next: usize, current: usize, env: usize, w: f64) {
        let o = self.offset(next, current, env);
        self.weights[o] += w;
        self.total_weight += w;
    }

    /// The same table scaled to unit total weight.
    pub fn normalized(&self) -> Self {
        let t = self.total_weight;
        Self {
            dims: self.dims,
            weights: self.weights.iter().map(|w| w / t).collect(),
            total_weight: 1.0,
        }
    }

    /// Marginal over `(current, env)`.
    pub fn current_env_marginal(&self) -> PairHistogram {
        let [nn, nc, ne] = self.dims;
        let mut pair = PairHistogram::new(nc, ne);
        for next in 0..nn {
            for c in 0..nc {
                for e in 0..ne {
                    pair.weights[c * ne + e] += self.get(next, c, e);
                }
            }
        }
        pair.total_weight = self.total_weight;
        pair
    }

    pub(crate) fn check(&self) -> Result<(), MetricsError> {
        check_weights(&self.weights, self.total_weight)
    }
}

/// Weighted counts over `(state, env)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct PairHistogram {
    dims: [usize; 2],
    weights: Vec<f64>,
    total_weight: f64,
}

impl PairHistogram {
    pub fn new(n_state: usize, n_env: usize) -> Self {
        Self {
            dims: [n_state, n_env],
            weights: vec![0.0; n_state * n_env],
            total_weight: 0.0,
        }
    }

    pub fn from_parts(dims: [usize; 2], weights: Vec<f64>, total_weight: f64) -> Self {
        assert_eq!(weights.len(), dims[0] * dims[1], "table size does not match dims");
        Self {
            dims,
            weights,
            total_weight,
        }
    }

    pub fn from_weights(dims: [usize; 2], weights: Vec<f64>) -> Self {
        let total = weights.iter().sum();
        Self::from_parts(dims, weights, total)
    }

    pub fn dims(&self) -> [usize; 2] {
        self.dims
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn get(&self, state: usize, env: usize) -> f64 {
        self.weights[state * self.dims[1] + env]
    }

    pub fn add(&mut self, state: usize, env: usize, w: f64) {
        self.weights[state * self.dims[1] + env] += w;
        self.total_weight += w;
    }

    pub(crate) fn check(&self) -> Result<(), MetricsError> {
        check_weights(&self.weights, self.total_weight)
    }
}

fn check_weights(weights: &[f64], total: f64) -> Result<(), MetricsError> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(MetricsError::BadWeight);
    }
    let sum: f64 = weights.iter().sum();
    let tol = 1e-9 * total.abs().max(1.0);
    if !(total.is_finite() && total > 0.0) || (sum - total).abs() > tol {
        return Err(MetricsError::Unnormalized { sum, total });
    }
    Ok(())
}

/// Weighted counts over `(next, current, env, next env)`, stored sparsely.
#[derive(Clone, Debug, PartialEq)]
pub struct FourWayHistogram {
    n_current: usize,
    n_env: usize,
    weights: BTreeMap<(usize, usize, usize, usize), f64>,
    total_weight: f64,
}

impl FourWayHistogram {
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }

    pub fn get(&self, next: usize, current: usize, env: usize, next_env: usize) -> f64 {
        self.weights
            .get(&(next, current, env, next_env))
            .copied()
            .unwrap_or(0.0)
    }

    /// Non-zero entries keyed by `(next, current, env, next_env)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize, usize, usize), f64)> + '_ {
        self.weights.iter().map(|(&k, &w)| (k, w))
    }

    /// Sums out the next environment state.
    pub fn three_way_marginal(&self) -> JointHistogram {
        let mut h = JointHistogram::new(DIRECTIONS, self.n_current, self.n_env);
        for (&(next, cur, env, _), &w) in &self.weights {
            h.add(next, cur, env, w);
        }
        h.total_weight = self.total_weight;
        h
    }
}

fn check_traces(traces: &TraceSet, needed: usize, k: usize) -> Result<usize, MetricsError> {
    let first = traces.traces.first().ok_or(MetricsError::EmptyEnsemble)?;
    let len = first.len();
    if let Some(other) = traces.traces.iter().find(|t| t.len() != len) {
        return Err(MetricsError::MismatchedTraces(len, other.len()));
    }
    if len < needed {
        return Err(MetricsError::TraceTooShort { len, k, needed });
    }
    Ok(len)
}

/// Joint of `(move k -> k+1, cell at k, reduced env at k)` over the ensemble.
///
/// Each replica contributes its reduced-environment weights at step `k`;
/// dividing by the total gives the plug-in estimate of the joint law.
pub fn build_histogram(
    traces: &TraceSet,
    k: usize,
    weighting: EnvWeighting,
) -> Result<JointHistogram, MetricsError> {
    check_traces(traces, k + 2, k)?;
    let lattice = traces.lattice;
    let mut h = JointHistogram::new(
        DIRECTIONS,
        lattice.cell_count(),
        ReducedEnvState::alphabet_size(&lattice),
    );
    for t in &traces.traces {
        let (x1, x2) = (t.positions[k], t.positions[k + 1]);
        let dir = direction_index(x1, x2).ok_or(MetricsError::NonAdjacentMove {
            replica: t.replica_id,
            k,
        })?;
        let cur = lattice.index(x1);
        for (y, w) in reduce_env_with(&t.nutrients[k], weighting) {
            h.add(dir, cur, y.index(&lattice), w);
        }
    }
    Ok(h)
}

/// Joint of `(cell at k, reduced env at k)` over the ensemble.
pub fn build_pair_histogram(
    traces: &TraceSet,
    k: usize,
    weighting: EnvWeighting,
) -> Result<PairHistogram, MetricsError> {
    check_traces(traces, k + 1, k)?;
    let lattice: Lattice = traces.lattice;
    let mut h = PairHistogram::new(lattice.cell_count(), ReducedEnvState::alphabet_size(&lattice));
    for t in &traces.traces {
        let x = lattice.index(t.positions[k]);
        for (y, w) in reduce_env_with(&t.nutrients[k], weighting) {
            h.add(x, y.index(&lattice), w);
        }
    }
    Ok(h)
}

/// Four-way joint including the reduced environment at `k + 1`; each
/// replica contributes the product of its step-`k` and step-`k+1` weights.
pub fn build_four_way(
    traces: &TraceSet,
    k: usize,
    weighting: EnvWeighting,
) -> Result<FourWayHistogram, MetricsError> {
    check_traces(traces, k + 2, k)?;
    let lattice = traces.lattice;
    let mut weights = BTreeMap::new();
    let mut total_weight = 0.0;
    for t in &traces.traces {
        let (x1, x2) = (t.positions[k], t.positions[k + 1]);
        let dir = direction_index(x1, x2).ok_or(MetricsError::NonAdjacentMove {
            replica: t.replica_id,
            k,
        })?;
        let cur = lattice.index(x1);
        let now = reduce_env_with(&t.nutrients[k], weighting);
        let next = reduce_env_with(&t.nutrients[k + 1], weighting);
        for &(y1, w1) in &now {
            for &(y2, w2) in &next {
                *weights
                    .entry((dir, cur, y1.index(&lattice), y2.index(&lattice)))
                    .or_insert(0.0) += w1 * w2;
                total_weight += w1 * w2;
            }
        }
    }
    Ok(FourWayHistogram {
        n_current: lattice.cell_count(),
        n_env: ReducedEnvState::alphabet_size(&lattice),
        weights,
        total_weight,
    })
}
