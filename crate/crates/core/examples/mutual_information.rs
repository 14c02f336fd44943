//! Mutual information between the bacterium's cell and the nutrient layout
//! for a gradually moving and a jumping source.
//!
//! Run: cargo run --release --example mutual_information -- [runs]

use semantic_chemotaxis::agent::InterventionKind;
use semantic_chemotaxis::engine::SimConfig;
use semantic_chemotaxis::experiment::{run_grid_point, ExperimentPreset};

fn main() -> Result<(), semantic_chemotaxis::Error> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let base = SimConfig { runs, ..SimConfig::default() };
    let kinds = [InterventionKind::DEFAULT, InterventionKind::SenseCap(3), InterventionKind::Fixed, InterventionKind::Dead];
    for point in ExperimentPreset::MutualInfoStudy.grid(&base) {
        let result = run_grid_point(&point.config, &kinds)?;
        println!(
            "{} source (m = {}, d = {})",
            point.label, point.config.world.source_period, point.config.world.source_hop
        );
        for (kind, series) in result.table.rows() {
            let samples: Vec<String> = (0..=200).step_by(25).map(|k| format!("{:.3}", series.mi_bits[k])).collect();
            println!("  {:>6}  {}", kind.to_string(), samples.join(" "));
        }
    }
    println!("(columns: k = 0, 25, ..., 200; bits)");
    Ok(())
}
