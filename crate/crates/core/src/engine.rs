//! Step orchestration, seeded replicas and parallel ensembles.
//!
//! Every replica owns a ChaCha8 stream selected by its replica id under the
//! master seed, so a replica's trace never depends on which thread ran it or
//! in which order replicas were scheduled.

use std::io::{self, BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::agent::{self, BacteriumState, Intervention, InterventionKind, Weight};
use crate::config::ConfigError;
use crate::lattice::{Lattice, Position};
use crate::metrics::EnvWeighting;
use crate::world::{self, NutrientSnapshot, WorldParams, WorldState};

/// Replicas simulated together before they are handed to a consumer.
/// Fixed so that chunking never depends on the thread count.
pub const CHUNK_SIZE: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub world: WorldParams,
    pub intervention: Intervention,
    /// Number of simulated steps `K_max`; traces hold `horizon + 1` states.
    pub horizon: u32,
    /// Ensemble size `E`.
    pub runs: u64,
    pub master_seed: u64,
    /// Viability tolerance used for observed semantic information.
    pub eps: f64,
    pub env_weighting: EnvWeighting,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            world: WorldParams::default(),
            intervention: Intervention::new(InterventionKind::DEFAULT, 25),
            horizon: 200,
            runs: 20_000,
            master_seed: 0,
            eps: 0.1,
            env_weighting: EnvWeighting::Multiplicity,
        }
    }
}

impl SimConfig {
    pub fn lattice(&self) -> Lattice {
        self.world.lattice
    }

    pub fn with_intervention(&self, kind: InterventionKind) -> Self {
        let mut cfg = self.clone();
        cfg.intervention.kind = kind;
        cfg
    }

    /// Checks every parameter range; errors name the config key at fault.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let n = self.world.lattice.size();
        if !(2..=crate::config::MAX_LATTICE_SIZE).contains(&n) {
            return Err(ConfigError::invalid(
                "lattice_size",
                n,
                format!("must be in 2..={}", crate::config::MAX_LATTICE_SIZE),
            ));
        }
        if self.world.source_period == 0 {
            return Err(ConfigError::invalid("source_period", 0, "must be at least 1"));
        }
        let hop = self.world.source_hop;
        if hop == 0 || hop >= n {
            return Err(ConfigError::invalid(
                "source_hop",
                hop,
                format!("must satisfy 1 <= source_hop <= lattice_size - 1 = {}", n - 1),
            ));
        }
        let p = self.world.nutrient_decay_prob;
        if !(0.0..=1.0).contains(&p) {
            return Err(ConfigError::invalid("nutrient_decay_prob", p, "must lie in [0, 1]"));
        }
        if self.runs == 0 {
            return Err(ConfigError::invalid("runs", 0, "must be at least 1"));
        }
        if !(self.eps >= 0.0 && self.eps.is_finite()) {
            return Err(ConfigError::invalid("eps", self.eps, "must be a finite value >= 0"));
        }
        Ok(())
    }
}

/// RNG for one replica: a pure function of `(master_seed, replica_id)`.
pub fn replica_rng(master_seed: u64, replica_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(replica_id);
    rng
}

/// Recorded time series of one replica.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub replica_id: u64,
    pub positions: Vec<Position>,
    pub nutrients: Vec<NutrientSnapshot>,
    pub alive: Vec<bool>,
    pub weights: Vec<Weight>,
}

impl Trace {
    fn with_capacity(replica_id: u64, len: usize) -> Self {
        Self {
            replica_id,
            positions: Vec::with_capacity(len),
            nutrients: Vec::with_capacity(len),
            alive: Vec::with_capacity(len),
            weights: Vec::with_capacity(len),
        }
    }

    fn record(&mut self, lattice: &Lattice, world: &WorldState, cb: &BacteriumState) {
        self.positions.push(cb.pos);
        self.nutrients.push(world.snapshot(lattice));
        self.alive.push(cb.alive);
        self.weights.push(cb.weight);
    }

    /// Number of recorded states (`horizon + 1`).
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// First time index at which the bacterium is dead, if any.
    pub fn death_step(&self) -> Option<u32> {
        self.alive.iter().position(|&a| !a).map(|k| k as u32)
    }
}

/// An ensemble of traces on a common lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSet {
    pub lattice: Lattice,
    pub traces: Vec<Trace>,
}

impl TraceSet {
    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("cannot allocate storage for {0} replicas")]
    OutOfMemory(u64),
    #[error("trace dump line {line}: {reason}")]
    Dump { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Advances `(world, cb)` from step `k` to `k + 1`.
///
/// Order: source relocation, spawning, ageing and degradation, then the
/// bacterium (sense, perceive, decide, move, eat, decay). A `Dead`
/// intervention removes the bacterium as soon as the new time index reaches
/// its onset.
pub fn step<R: rand::Rng + ?Sized>(
    world: &mut WorldState,
    cb: &mut BacteriumState,
    cfg: &SimConfig,
    k: u32,
    rng: &mut R,
) {
    let params = &cfg.world;
    world::move_source(world, params, rng);
    world::spawn_nutrients(world, params, rng);
    world::degrade_nutrients(world, params, rng);
    agent::act(&params.lattice, cb, world, &cfg.intervention, k, rng);
    world.k = k + 1;
    kill_if_due(cb, &cfg.intervention, k + 1);
}

fn kill_if_due(cb: &mut BacteriumState, iv: &Intervention, k: u32) {
    if iv.kind == InterventionKind::Dead && iv.is_active(k) && cb.alive {
        cb.kill();
    }
}

/// Simulates one replica for `cfg.horizon` steps.
pub fn run_trace(cfg: &SimConfig, replica_id: u64) -> Trace {
    let lattice = cfg.lattice();
    let mut rng = replica_rng(cfg.master_seed, replica_id);
    let x0 = lattice.uniform_cell(&mut rng);
    let s0 = lattice.uniform_cell(&mut rng);
    let mut cb = BacteriumState::new(x0);
    let mut world = WorldState::new(s0);
    kill_if_due(&mut cb, &cfg.intervention, 0);

    let mut trace = Trace::with_capacity(replica_id, cfg.horizon as usize + 1);
    trace.record(&lattice, &world, &cb);
    for k in 0..cfg.horizon {
        step(&mut world, &mut cb, cfg, k, &mut rng);
        trace.record(&lattice, &world, &cb);
    }
    trace
}

/// Runs all `cfg.runs` replicas and keeps every trace in memory.
pub fn run_ensemble(cfg: &SimConfig) -> Result<TraceSet, EngineError> {
    cfg.validate()?;
    let mut traces = Vec::new();
    let count = usize::try_from(cfg.runs).map_err(|_| EngineError::OutOfMemory(cfg.runs))?;
    traces
        .try_reserve_exact(count)
        .map_err(|_| EngineError::OutOfMemory(cfg.runs))?;
    (0..count)
        .into_par_iter()
        .map(|id| run_trace(cfg, id as u64))
        .collect_into_vec(&mut traces);
    Ok(TraceSet {
        lattice: cfg.lattice(),
        traces,
    })
}

/// Streams the ensemble in replica-id order, `CHUNK_SIZE` traces at a time.
///
/// Replicas inside a chunk run in parallel; `consume` sees chunks
/// sequentially and in order.
pub fn for_each_chunk<E, F>(cfg: &SimConfig, mut consume: F) -> Result<(), E>
where
    F: FnMut(&[Trace]) -> Result<(), E>,
    E: From<EngineError>,
{
    cfg.validate().map_err(EngineError::from)?;
    let mut chunk = Vec::new();
    let mut start = 0u64;
    while start < cfg.runs {
        let end = (start + CHUNK_SIZE as u64).min(cfg.runs);
        (0..(end - start) as usize)
            .into_par_iter()
            .map(|offset| run_trace(cfg, start + offset as u64))
            .collect_into_vec(&mut chunk);
        consume(&chunk)?;
        start = end;
    }
    Ok(())
}

pub const TRACE_DUMP_HEADER: &str = "replica_id,k,x_i,x_j,alive,nutrients";

/// Writes one line per `(replica, k)`; the nutrient field lists
/// `i,j:count` pairs separated by `;` and is always the last field.
pub fn write_trace_dump<W: Write>(out: &mut W, traces: &[Trace]) -> io::Result<()> {
    writeln!(out, "{TRACE_DUMP_HEADER}")?;
    for t in traces {
        for k in 0..t.len() {
            let p = t.positions[k];
            write!(out, "{},{},{},{},{},", t.replica_id, k, p.i, p.j, u8::from(t.alive[k]))?;
            for (n, (c, count)) in t.nutrients[k].cells().iter().enumerate() {
                if n > 0 {
                    out.write_all(b";")?;
                }
                write!(out, "{},{}:{}", c.i, c.j, count)?;
            }
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Reads a dump produced by [`write_trace_dump`]. Weights are not part of the
/// format; they are reconstructed as full/zero from the alive flag.
pub fn read_trace_dump<R: BufRead>(input: R, lattice: Lattice) -> Result<TraceSet, EngineError> {
    let mut traces: Vec<Trace> = Vec::new();
    let mut lines = input.lines().enumerate();
    match lines.next() {
        Some((_, Ok(h))) if h.trim_end() == TRACE_DUMP_HEADER => {}
        Some((_, Err(e))) => return Err(e.into()),
        _ => {
            return Err(EngineError::Dump {
                line: 1,
                reason: format!("expected header `{TRACE_DUMP_HEADER}`"),
            })
        }
    }
    for (idx, line) in lines {
        let line = line?;
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: &str| EngineError::Dump {
            line: line_no,
            reason: reason.to_owned(),
        };
        let fields: Vec<&str> = line.splitn(6, ',').collect();
        if fields.len() != 6 {
            return Err(bad("expected 6 fields"));
        }
        let num = |s: &str| s.trim().parse::<u64>().map_err(|_| bad("malformed integer"));
        let replica_id = num(fields[0])?;
        let k = num(fields[1])? as usize;
        let pos = Position::new(num(fields[2])? as u16, num(fields[3])? as u16);
        if !lattice.contains(pos) {
            return Err(bad("position outside lattice"));
        }
        let alive = match fields[4].trim() {
            "1" => true,
            "0" => false,
            _ => return Err(bad("alive must be 0 or 1")),
        };
        let mut pairs = Vec::new();
        for item in fields[5].split(';').filter(|s| !s.trim().is_empty()) {
            let (cell, count) = item.split_once(':').ok_or_else(|| bad("nutrient entry without `:`"))?;
            let (i, j) = cell.split_once(',').ok_or_else(|| bad("nutrient cell without `,`"))?;
            let c = Position::new(num(i)? as u16, num(j)? as u16);
            if !lattice.contains(c) {
                return Err(bad("nutrient outside lattice"));
            }
            pairs.push((c, num(count)? as u32));
        }

        if traces.last().is_none_or(|t| t.replica_id != replica_id) {
            traces.push(Trace::with_capacity(replica_id, 0));
        }
        let trace = traces.last_mut().expect("just pushed");
        if trace.len() != k {
            return Err(bad("time steps must be consecutive from 0"));
        }
        trace.positions.push(pos);
        trace.nutrients.push(NutrientSnapshot::from_counts(pairs));
        trace.alive.push(alive);
        trace.weights.push(if alive { Weight::FULL } else { Weight::ZERO });
    }
    Ok(TraceSet { lattice, traces })
}
