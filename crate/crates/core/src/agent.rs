//! The chemotactic bacterium and the interventions that alter how it senses
//! or moves.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::lattice::{chebyshev_distance, sample_uniform, Lattice, Position};
use crate::world::WorldState;

/// Upper bound of the local nutrient count a bacterium can register.
pub const MAX_SENSED: u8 = 9;

/// Weight in units of the per-step decay (0.05), so that decay, feeding and
/// the death threshold are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight(u8);

impl Weight {
    const UNITS_PER_ONE: u8 = 20;
    const DECAY: u8 = 1;
    const MEAL: u8 = 4;

    pub const FULL: Weight = Weight(Self::UNITS_PER_ONE);
    pub const ZERO: Weight = Weight(0);

    /// Rounds to the nearest multiple of 0.05 in `[0, 1]`.
    pub fn from_f64(w: f64) -> Self {
        let units = (w.clamp(0.0, 1.0) * f64::from(Self::UNITS_PER_ONE)).round();
        Weight(units as u8)
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / f64::from(Self::UNITS_PER_ONE)
    }

    fn feed(self) -> Self {
        Weight((self.0 + Self::MEAL).min(Self::UNITS_PER_ONE))
    }

    fn decay(self) -> Self {
        Weight(self.0.saturating_sub(Self::DECAY))
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}", self.as_f64())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Run,
    Tumble,
}

/// What an intervention does once active.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InterventionKind {
    /// Perception capped at `n` nutrients; `SenseCap(9)` is the unmodified bacterium.
    SenseCap(u8),
    /// Killed at onset; the corpse stays put and ignores nutrients.
    Dead,
    /// Immobile from onset, but keeps eating and starving.
    Fixed,
}

impl InterventionKind {
    pub const DEFAULT: InterventionKind = InterventionKind::SenseCap(MAX_SENSED);

    /// `cap0..cap9, dead, fixed`.
    pub fn all() -> Vec<InterventionKind> {
        (0..=MAX_SENSED)
            .map(InterventionKind::SenseCap)
            .chain([InterventionKind::Dead, InterventionKind::Fixed])
            .collect()
    }
}

impl fmt::Display for InterventionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InterventionKind::SenseCap(n) => write!(f, "cap{n}"),
            InterventionKind::Dead => f.write_str("dead"),
            InterventionKind::Fixed => f.write_str("fixed"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown intervention `{0}` (expected cap0..cap9, cap:<n>, dead or fixed)")]
pub struct ParseInterventionError(String);

impl FromStr for InterventionKind {
    type Err = ParseInterventionError;

    /// Accepts both the CSV spelling (`cap4`) and the config spelling (`cap:4`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "dead" | "d" => return Ok(InterventionKind::Dead),
            "fixed" | "f" => return Ok(InterventionKind::Fixed),
            _ => {}
        }
        let n = s
            .strip_prefix("cap:")
            .or_else(|| s.strip_prefix("cap"))
            .and_then(|rest| rest.parse::<u8>().ok())
            .filter(|&n| n <= MAX_SENSED)
            .ok_or_else(|| ParseInterventionError(s.to_owned()))?;
        Ok(InterventionKind::SenseCap(n))
    }
}

/// An intervention together with the first time step it governs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Intervention {
    pub kind: InterventionKind,
    pub onset: u32,
}

impl Intervention {
    pub fn new(kind: InterventionKind, onset: u32) -> Self {
        Self { kind, onset }
    }

    pub fn is_active(&self, k: u32) -> bool {
        k >= self.onset
    }

    fn active_kind(&self, k: u32) -> InterventionKind {
        if self.is_active(k) {
            self.kind
        } else {
            InterventionKind::DEFAULT
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BacteriumState {
    pub pos: Position,
    pub prev_pos: Position,
    pub weight: Weight,
    pub alive: bool,
    /// Raw count sensed in the previous step.
    pub prev_sensed: u8,
    pub mode: Mode,
}

impl BacteriumState {
    /// Fresh bacterium with no movement or sensing history.
    pub fn new(pos: Position) -> Self {
        Self {
            pos,
            prev_pos: pos,
            weight: Weight::FULL,
            alive: true,
            prev_sensed: 0,
            mode: Mode::Tumble,
        }
    }

    pub fn kill(&mut self) {
        self.alive = false;
        self.weight = Weight::ZERO;
    }
}

/// Nutrients on `pos` and its neighbours, with multiplicity, capped at 9.
pub fn sense(world: &WorldState, pos: Position) -> u8 {
    let count = world
        .nutrients
        .iter()
        .filter(|n| chebyshev_distance(n.pos, pos) <= 1)
        .take(usize::from(MAX_SENSED))
        .count();
    count as u8
}

/// The count the bacterium acts on at step `k` under `iv`.
pub fn perceive(raw: u8, iv: &Intervention, k: u32) -> u8 {
    match iv.active_kind(k) {
        InterventionKind::SenseCap(n) => raw.min(n),
        InterventionKind::Dead | InterventionKind::Fixed => raw.min(MAX_SENSED),
    }
}

/// Tumble on a falling or zero count, run otherwise.
pub fn decide_mode(sensed_now: u8, sensed_prev: u8) -> Mode {
    if sensed_now < sensed_prev || sensed_now == 0 {
        Mode::Tumble
    } else {
        Mode::Run
    }
}

/// Next position for a living bacterium in the given mode.
pub fn step_position<R: Rng + ?Sized>(
    lattice: &Lattice,
    state: &BacteriumState,
    mode: Mode,
    iv: &Intervention,
    k: u32,
    rng: &mut R,
) -> Position {
    debug_assert!(state.alive, "step_position called on a dead bacterium");
    match iv.active_kind(k) {
        InterventionKind::Dead | InterventionKind::Fixed => return state.pos,
        InterventionKind::SenseCap(_) => {}
    }
    let pos = state.pos;
    match mode {
        Mode::Tumble => sample_uniform(lattice.ring(pos, 1), rng).expect("N >= 2"),
        Mode::Run if pos == state.prev_pos => {
            // Direction lost (start of life or boundary reflection): pick a
            // fresh one, standing still included.
            sample_uniform(lattice.cells_at(pos, 0, 1), rng).expect("cell itself qualifies")
        }
        Mode::Run => {
            let di = i32::from(pos.i) - i32::from(state.prev_pos.i);
            let dj = i32::from(pos.j) - i32::from(state.prev_pos.j);
            lattice.clamp(i32::from(pos.i) + di, i32::from(pos.j) + dj)
        }
    }
}

/// Eats one nutrient at the current cell (if any), then pays the per-step
/// weight cost. A bacterium whose weight hits zero dies.
///
/// Returns `true` if a nutrient was consumed.
pub fn eat_and_update_weight(state: &mut BacteriumState, world: &mut WorldState) -> bool {
    debug_assert!(state.alive);
    let ate = world.take_nutrient_at(state.pos).is_some();
    if ate {
        state.weight = state.weight.feed();
    }
    state.weight = state.weight.decay();
    if state.weight.is_zero() {
        state.kill();
    }
    ate
}

/// One full agent update: sense, perceive, decide, move, eat, decay.
pub fn act<R: Rng + ?Sized>(
    lattice: &Lattice,
    state: &mut BacteriumState,
    world: &mut WorldState,
    iv: &Intervention,
    k: u32,
    rng: &mut R,
) {
    if !state.alive {
        return;
    }
    let raw = sense(world, state.pos);
    let now = perceive(raw, iv, k);
    let prev = perceive(state.prev_sensed, iv, k);
    let mode = decide_mode(now, prev);
    let next = step_position(lattice, state, mode, iv, k, rng);
    state.prev_pos = state.pos;
    state.pos = next;
    state.prev_sensed = raw;
    state.mode = mode;
    eat_and_update_weight(state, world);
}
