//! Follows one replica step by step and writes its trace dump to stdout.
//!
//! Run: cargo run --release --example single_trace -- [replica_id]

use std::io;

use semantic_chemotaxis::engine::{run_trace, write_trace_dump, SimConfig};

fn main() -> io::Result<()> {
    let id = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let cfg = SimConfig {
        horizon: 60,
        ..SimConfig::default()
    };
    let trace = run_trace(&cfg, id);

    eprintln!("replica {id}: death step {:?}", trace.death_step());
    eprintln!("{:>4} {:>8} {:>6} {:>5} {:>9}", "k", "x", "weight", "alive", "nutrients");
    for k in (0..trace.len()).step_by(5) {
        let x = trace.positions[k];
        eprintln!(
            "{k:>4} {:>8} {:>6.2} {:>5} {:>9}",
            format!("({},{})", x.i, x.j),
            trace.weights[k].as_f64(),
            trace.alive[k],
            trace.nutrients[k].total()
        );
    }
    write_trace_dump(&mut io::stdout().lock(), std::slice::from_ref(&trace))
}
