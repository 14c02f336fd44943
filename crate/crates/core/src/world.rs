//! The environment: a mobile nutrient source that seeds nutrients on its
//! neighbouring cells, and nutrients that vanish at random once they are old
//! enough.

use rand::Rng;

use crate::lattice::{chebyshev_distance, sample_uniform, Lattice, Position};

/// Static environment parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldParams {
    pub lattice: Lattice,
    /// Nutrients produced per step.
    pub source_rate: u32,
    /// Steps between source relocations.
    pub source_period: u32,
    /// Chebyshev distance of every relocation hop.
    pub source_hop: u16,
    /// Nutrients younger than this are never removed.
    pub nutrient_min_life: u32,
    /// Per-step removal probability once `age >= nutrient_min_life`.
    pub nutrient_decay_prob: f64,
}

impl Default for WorldParams {
    fn default() -> Self {
        Self {
            lattice: Lattice::new(10),
            source_rate: 2,
            source_period: 5,
            source_hop: 3,
            nutrient_min_life: 10,
            nutrient_decay_prob: 0.02,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Nutrient {
    pub pos: Position,
    pub age: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NutrientSource {
    pub pos: Position,
    pub steps_since_move: u32,
}

/// Environment state at one time step.
#[derive(Clone, Debug, PartialEq)]
pub struct WorldState {
    pub source: NutrientSource,
    /// Oldest first. Several nutrients may share a cell.
    pub nutrients: Vec<Nutrient>,
    pub k: u32,
}

impl WorldState {
    pub fn new(source_pos: Position) -> Self {
        Self {
            source: NutrientSource {
                pos: source_pos,
                steps_since_move: 0,
            },
            nutrients: Vec::new(),
            k: 0,
        }
    }

    pub fn nutrient_count(&self) -> usize {
        self.nutrients.len()
    }

    /// Number of nutrients on exactly this cell.
    pub fn nutrients_at(&self, pos: Position) -> usize {
        self.nutrients.iter().filter(|n| n.pos == pos).count()
    }

    /// Removes the oldest nutrient on `pos`, if any.
    pub fn take_nutrient_at(&mut self, pos: Position) -> Option<Nutrient> {
        let idx = self.nutrients.iter().position(|n| n.pos == pos)?;
        Some(self.nutrients.remove(idx))
    }

    /// Occupied cells with multiplicities, sorted by cell.
    pub fn snapshot(&self, lattice: &Lattice) -> NutrientSnapshot {
        NutrientSnapshot::from_positions(lattice, self.nutrients.iter().map(|n| n.pos))
    }
}

/// A multiset of nutrient positions, stored run-length encoded.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct NutrientSnapshot {
    cells: Vec<(Position, u32)>,
}

impl NutrientSnapshot {
    pub fn from_positions(lattice: &Lattice, positions: impl IntoIterator<Item = Position>) -> Self {
        let mut counts = vec![0u32; lattice.cell_count()];
        for p in positions {
            counts[lattice.index(p)] += 1;
        }
        let cells = counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(idx, &c)| (lattice.position(idx), c))
            .collect();
        Self { cells }
    }

    /// Builds a snapshot from `(cell, count)` pairs; zero counts are dropped
    /// and duplicate cells merged.
    pub fn from_counts(pairs: impl IntoIterator<Item = (Position, u32)>) -> Self {
        let mut cells: Vec<(Position, u32)> = pairs.into_iter().filter(|&(_, c)| c > 0).collect();
        cells.sort_unstable_by_key(|&(p, _)| p);
        cells.dedup_by(|b, a| {
            if a.0 == b.0 {
                a.1 += b.1;
                true
            } else {
                false
            }
        });
        Self { cells }
    }

    /// `(cell, count)` pairs in row-major cell order.
    pub fn cells(&self) -> &[(Position, u32)] {
        &self.cells
    }

    /// Total nutrient count `N_Y`.
    pub fn total(&self) -> u32 {
        self.cells.iter().map(|&(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// Appends `source_rate` fresh nutrients, each uniform over the source's
/// in-lattice neighbours.
pub fn spawn_nutrients<R: Rng + ?Sized>(world: &mut WorldState, params: &WorldParams, rng: &mut R) {
    let neighbours = params.lattice.ring(world.source.pos, 1);
    for _ in 0..params.source_rate {
        let pos = sample_uniform(neighbours.clone(), rng)
            .expect("a lattice with N >= 2 gives every cell a neighbour");
        world.nutrients.push(Nutrient { pos, age: 0 });
    }
}

/// Advances the relocation timer and hops the source when it expires.
///
/// The hop lands at exactly `source_hop` cells away. Cells near the centre of
/// a small lattice may have no cell that far; the source then jumps to one of
/// the farthest cells instead.
///
/// Returns `true` if the source moved.
pub fn move_source<R: Rng + ?Sized>(world: &mut WorldState, params: &WorldParams, rng: &mut R) -> bool {
    let source = &mut world.source;
    if source.steps_since_move + 1 < params.source_period {
        source.steps_since_move += 1;
        return false;
    }
    let hop = params.source_hop.min(params.lattice.max_distance_from(source.pos));
    let next = sample_uniform(params.lattice.ring(source.pos, hop), rng)
        .expect("the farthest ring is never empty");
    debug_assert_eq!(chebyshev_distance(next, source.pos), hop);
    source.pos = next;
    source.steps_since_move = 0;
    true
}

/// Removes each nutrient of age `>= nutrient_min_life` with probability
/// `nutrient_decay_prob`, then ages the survivors by one step.
///
/// Returns the number of removed nutrients.
pub fn degrade_nutrients<R: Rng + ?Sized>(
    world: &mut WorldState,
    params: &WorldParams,
    rng: &mut R,
) -> usize {
    let before = world.nutrients.len();
    world.nutrients.retain_mut(|n| {
        if n.age >= params.nutrient_min_life && rng.random_bool(params.nutrient_decay_prob) {
            return false;
        }
        n.age += 1;
        true
    });
    before - world.nutrients.len()
}
