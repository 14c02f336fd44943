use rayon::prelude::*;

use super::estimators::{conditional_mutual_information, mutual_information};
use super::histogram::{direction_index, JointHistogram, PairHistogram, DIRECTIONS};
use super::reduce::{reduce_env_fixed, EnvWeighting, ReducedEnvState};
use super::MetricsError;
use crate::agent::Intervention;
use crate::engine::{self, EngineError, SimConfig, Trace};
use crate::lattice::Lattice;
use crate::Error;

/// Per-step counts in fixed point. Integer sums make the result independent
/// of the order in which replicas and chunks are added.
struct StepTables {
    /// `[direction][cell][env]`; empty at the final step.
    transition: Vec<u64>,
    /// `[cell][env]`.
    pair: Vec<u64>,
    total: u64,
    alive: u64,
}

/// Streaming reduction of an ensemble into the per-step histograms needed
/// for conditional mutual information, mutual information and viability.
pub struct EnsembleAccumulator {
    lattice: Lattice,
    weighting: EnvWeighting,
    steps: Vec<StepTables>,
    death_steps: Vec<Option<u32>>,
}

fn zeroed(len: usize) -> Option<Vec<u64>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).ok()?;
    v.resize(len, 0);
    Some(v)
}

impl EnsembleAccumulator {
    pub fn new(lattice: Lattice, horizon: u32, weighting: EnvWeighting) -> Result<Self, Error> {
        let cells = lattice.cell_count();
        let env = ReducedEnvState::alphabet_size(&lattice);
        let horizon = horizon as usize;
        let oom = || Error::Engine(EngineError::OutOfMemory(0));
        let mut steps = Vec::with_capacity(horizon + 1);
        for k in 0..=horizon {
            let transition = if k < horizon {
                zeroed(DIRECTIONS * cells * env).ok_or_else(oom)?
            } else {
                Vec::new()
            };
            steps.push(StepTables {
                transition,
                pair: zeroed(cells * env).ok_or_else(oom)?,
                total: 0,
                alive: 0,
            });
        }
        Ok(Self {
            lattice,
            weighting,
            steps,
            death_steps: Vec::new(),
        })
    }

    pub fn horizon(&self) -> usize {
        self.steps.len() - 1
    }

    pub fn replicas(&self) -> usize {
        self.death_steps.len()
    }

    pub fn add(&mut self, traces: &[Trace]) -> Result<(), MetricsError> {
        let len = self.steps.len();
        if let Some(t) = traces.iter().find(|t| t.len() != len) {
            return Err(MetricsError::MismatchedTraces(len, t.len()));
        }
        let lattice = self.lattice;
        let weighting = self.weighting;
        let env = ReducedEnvState::alphabet_size(&lattice);
        let cells = lattice.cell_count();
        self.steps
            .par_iter_mut()
            .enumerate()
            .try_for_each_init(Vec::new, |reduced, (k, tables)| {
                for t in traces {
                    let x1 = t.positions[k];
                    let cur = lattice.index(x1);
                    reduce_env_fixed(&lattice, &t.nutrients[k], weighting, reduced);
                    for &(e, w) in reduced.iter() {
                        tables.pair[cur * env + e] += w;
                        tables.total += w;
                    }
                    tables.alive += u64::from(t.alive[k]);
                    if k + 1 < len {
                        let dir = direction_index(x1, t.positions[k + 1]).ok_or(
                            MetricsError::NonAdjacentMove {
                                replica: t.replica_id,
                                k,
                            },
                        )?;
                        let base = (dir * cells + cur) * env;
                        for &(e, w) in reduced.iter() {
                            tables.transition[base + e] += w;
                        }
                    }
                }
                Ok(())
            })?;
        self.death_steps.extend(traces.iter().map(Trace::death_step));
        Ok(())
    }

    /// Evaluates the per-step measures on the accumulated histograms.
    pub fn finish(self, intervention: Intervention) -> Result<EnsembleSummary, MetricsError> {
        if self.death_steps.is_empty() {
            return Err(MetricsError::EmptyEnsemble);
        }
        let cells = self.lattice.cell_count();
        let env = ReducedEnvState::alphabet_size(&self.lattice);
        let horizon = self.horizon();
        let to_f64 = |v: &[u64]| v.iter().map(|&w| w as f64).collect::<Vec<_>>();

        let cmi_bits = self.steps[..horizon]
            .par_iter()
            .map(|s| {
                let h = JointHistogram::from_parts([DIRECTIONS, cells, env], to_f64(&s.transition), s.total as f64);
                conditional_mutual_information(&h)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mi_bits = self
            .steps
            .par_iter()
            .map(|s| {
                let h = PairHistogram::from_parts([cells, env], to_f64(&s.pair), s.total as f64);
                mutual_information(&h)
            })
            .collect::<Result<Vec<_>, _>>()?;

        Ok(EnsembleSummary {
            intervention,
            replicas: self.death_steps.len() as u64,
            cmi_bits,
            mi_bits,
            alive_counts: self.steps.iter().map(|s| s.alive).collect(),
            death_steps: self.death_steps,
        })
    }
}

/// Per-step results for one intervention.
#[derive(Clone, Debug, PartialEq)]
pub struct EnsembleSummary {
    pub intervention: Intervention,
    pub replicas: u64,
    /// `I(X_{k+1}; Y_k | X_k)` for `k in 0..horizon`.
    pub cmi_bits: Vec<f64>,
    /// `I(X_k; Y_k)` for `k in 0..=horizon`.
    pub mi_bits: Vec<f64>,
    pub alive_counts: Vec<u64>,
    /// First dead time index of each replica, in replica-id order.
    pub death_steps: Vec<Option<u32>>,
}

impl EnsembleSummary {
    pub fn viability(&self) -> Vec<f64> {
        let e = self.replicas as f64;
        self.alive_counts.iter().map(|&a| a as f64 / e).collect()
    }

    pub fn alive_at(&self, replica: usize, k: u32) -> bool {
        self.death_steps[replica].is_none_or(|d| k < d)
    }
}

/// Simulates the ensemble described by `cfg` and reduces it on the fly.
pub fn estimate_ensemble(cfg: &SimConfig) -> Result<EnsembleSummary, Error> {
    let mut acc = EnsembleAccumulator::new(cfg.lattice(), cfg.horizon, cfg.env_weighting)?;
    engine::for_each_chunk::<Error, _>(cfg, |chunk| acc.add(chunk).map_err(Error::from))?;
    Ok(acc.finish(cfg.intervention)?)
}
