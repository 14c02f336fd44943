//! Ensemble simulation of a lattice run-and-tumble bacterium chasing a mobile
//! nutrient source, with plug-in estimators for the information it extracts
//! from its environment.
//!
//! The pipeline is:
//!
//! 1. [`world`] and [`agent`] define one replica's dynamics; [`engine`]
//!    composes them into a fixed step order and runs seeded replicas in
//!    parallel.
//! 2. [`metrics`] reduces each nutrient configuration to a single weighted
//!    cell and estimates per-step conditional mutual information, its running
//!    sum (transfer entropy), mutual information and viability.
//! 3. [`experiment`] sweeps interventions over parameter grids and writes
//!    CSV reports.
//!
//! ```no_run
//! use semantic_chemotaxis::{engine::SimConfig, metrics, agent::InterventionKind};
//!
//! let cfg = SimConfig { runs: 2000, ..SimConfig::default() }
//!     .with_intervention(InterventionKind::SenseCap(4));
//! let summary = metrics::estimate_ensemble(&cfg)?;
//! println!("V[200] = {}", summary.viability()[200]);
//! # Ok::<(), semantic_chemotaxis::Error>(())
//! ```

pub mod agent;
pub mod config;
pub mod engine;
pub mod experiment;
pub mod lattice;
pub mod metrics;
pub mod world;

pub use agent::{Intervention, InterventionKind};
pub use engine::{SimConfig, Trace, TraceSet};
pub use lattice::{Lattice, Position};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error("output {path} failed validation: {reason}")]
    InvalidOutput { path: std::path::PathBuf, reason: String },
}
