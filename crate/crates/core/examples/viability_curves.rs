//! Viability over time for every intervention at the default parameters.
//!
//! Run: cargo run --release --example viability_curves -- [runs]

use semantic_chemotaxis::agent::InterventionKind;
use semantic_chemotaxis::engine::SimConfig;
use semantic_chemotaxis::experiment::run_grid_point;

fn main() -> Result<(), semantic_chemotaxis::Error> {
    let runs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5_000);
    let cfg = SimConfig { runs, ..SimConfig::default() };
    let result = run_grid_point(&cfg, &InterventionKind::all())?;

    let steps = [0, 20, 25, 50, 100, 150, 200];
    print!("{:>6}", "iota");
    for k in steps {
        print!(" {:>7}", format!("V[{k}]"));
    }
    println!();
    for (kind, series) in result.table.rows() {
        print!("{:>6}", kind.to_string());
        for k in steps {
            print!(" {:>7.4}", series.viability[k]);
        }
        println!();
    }
    println!("\ndelta V[200] (cap9 - fixed) = {:.4}", result.table.delta_viability(200)?);
    Ok(())
}
