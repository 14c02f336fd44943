//! Information measures estimated from simulated ensembles on the reduced
//! environment state space.
//!
//! The bacterium's state is its cell. The environment state is reduced to a
//! single nutrient cell (or [`ReducedEnvState::Empty`] when no nutrients
//! exist), with each replica spreading unit weight over its nutrient cells.

mod ensemble;
mod estimators;
mod histogram;
mod reduce;
mod table;

pub use ensemble::{estimate_ensemble, EnsembleAccumulator, EnsembleSummary};
pub use estimators::{conditional_mutual_information, mutual_information, transfer_entropy, viability};
pub use histogram::{
    build_four_way, build_histogram, build_pair_histogram, direction_index, FourWayHistogram,
    JointHistogram, PairHistogram, DIRECTIONS,
};
pub use reduce::{reduce_env, reduce_env_with, EnvWeighting, ReducedEnvState};
pub use table::{
    observed_semantic_information, InterventionSeries, MetricsTable, SemanticCsvError, SemanticInfo,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("histogram is not normalized: weights sum to {sum}, recorded total is {total}")]
    Unnormalized { sum: f64, total: f64 },
    #[error("histogram has a negative or non-finite weight")]
    BadWeight,
    #[error("traces have mismatched lengths ({0} vs {1})")]
    MismatchedTraces(usize, usize),
    #[error("traces hold {len} states, step {k} needs at least {needed}")]
    TraceTooShort { len: usize, k: usize, needed: usize },
    #[error("no traces to estimate from")]
    EmptyEnsemble,
    #[error("replica {replica} moves more than one cell between steps {k} and {}", k + 1)]
    NonAdjacentMove { replica: u64, k: usize },
    #[error("metrics table has no row for intervention `{0}`")]
    MissingIntervention(String),
    #[error("time step {k} outside the table horizon {horizon}")]
    StepOutOfRange { k: usize, horizon: usize },
}
