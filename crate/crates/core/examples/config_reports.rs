//! Parses a configuration, runs the `custom` preset on it and lists the
//! report files.
//!
//! Run: cargo run --release --example config_reports -- [out_dir]

use std::path::PathBuf;

use semantic_chemotaxis::config::{parse_config, render_config};
use semantic_chemotaxis::experiment::{config_hash, run_experiment, ExperimentPreset};

const CONFIG: &str = "
# small lattice, short horizon
lattice_size = 6
source_hop = 2
horizon = 60
intervention_onset = 20
runs = 2000
seed = 7
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("semantic-chemotaxis-example"));
    let cfg = parse_config(CONFIG)?;
    println!("{}", render_config(&cfg));
    println!("config hash {}", config_hash(&cfg));

    let report = run_experiment(ExperimentPreset::Custom, &cfg, &out)?;
    for f in &report.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
