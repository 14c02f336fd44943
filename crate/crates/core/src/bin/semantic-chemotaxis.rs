use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use semantic_chemotaxis::config::load_config;
use semantic_chemotaxis::engine::{self, SimConfig};
use semantic_chemotaxis::experiment::{run_experiment, ExperimentPreset};

/// Run chemotaxis ensembles and write viability / information CSV reports.
#[derive(Parser, Debug)]
#[command(version)]
struct Args {
    /// `key = value` configuration file; missing keys take defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// viability_fig3, mutual_info_study, te_vs_viability or custom.
    #[arg(long, default_value = "custom")]
    preset: ExperimentPreset,
    /// Master seed (overrides the config file).
    #[arg(long)]
    seed: Option<u64>,
    /// Ensemble size E (overrides the config file).
    #[arg(long)]
    runs: Option<u64>,
    /// Worker threads; affects wall time only.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Also write traces.txt for the configured intervention.
    #[arg(long)]
    dump_traces: bool,
}

fn run(args: Args) -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
    let mut cfg = match &args.config {
        Some(path) => load_config(path)?,
        None => SimConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(runs) = args.runs {
        cfg.runs = runs;
    }
    cfg.validate()?;

    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = args.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build()?;

    pool.install(|| -> Result<(), Box<dyn std::error::Error + Send + Sync>> {
        let report = run_experiment(args.preset, &cfg, &args.out)?;
        for f in &report.files {
            println!("wrote {}", f.display());
        }
        if args.dump_traces {
            let set = engine::run_ensemble(&cfg)?;
            let path = args.out.join("traces.txt");
            let mut w = std::io::BufWriter::new(std::fs::File::create(&path)?);
            engine::write_trace_dump(&mut w, &set.traces)?;
            println!("wrote {}", path.display());
        }
        Ok(())
    })
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
