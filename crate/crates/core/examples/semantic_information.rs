//! Transfer entropy against viability at the final step for one to three
//! nutrients per step, and the observed semantic information at eps = 0.1.
//!
//! Run: cargo run --release --example semantic_information -- [runs]

use std::time::Instant;

use semantic_chemotaxis::agent::InterventionKind;
use semantic_chemotaxis::engine::SimConfig;
use semantic_chemotaxis::experiment::run_grid_point;
use semantic_chemotaxis::metrics::observed_semantic_information;

fn main() -> Result<(), semantic_chemotaxis::Error> {
    let runs = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(20_000);
    for rate in 1..=3 {
        let mut cfg = SimConfig { runs, ..SimConfig::default() };
        cfg.world.source_rate = rate;
        let k = cfg.horizon as usize;
        let started = Instant::now();
        let result = run_grid_point(&cfg, &InterventionKind::all())?;
        println!("k_NS = {rate}  (E = {runs}, {:.1?})", started.elapsed());
        println!("  {:>6} {:>10} {:>10}", "iota", "TE[k]", "V[k]");
        for (kind, s) in result.table.rows() {
            println!("  {:>6} {:>10.4} {:>10.4}", kind.to_string(), s.te_bits[k], s.viability[k]);
        }
        let sem = observed_semantic_information(&result.table, k, cfg.eps)?;
        println!(
            "  S_eps[{k}] = {:.4} bits at {} (TE of cap9 = {:.4})\n",
            sem.bits,
            sem.argmin,
            result.table.row(InterventionKind::DEFAULT).unwrap().te_bits[k]
        );
    }
    Ok(())
}
