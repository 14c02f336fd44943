use crate::lattice::{Lattice, Position};
use crate::world::NutrientSnapshot;

/// One nutrient cell, or no nutrients at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ReducedEnvState {
    Cell(Position),
    Empty,
}

impl ReducedEnvState {
    /// Cells map to their lattice index; `Empty` maps to `N^2`.
    pub fn index(self, lattice: &Lattice) -> usize {
        match self {
            ReducedEnvState::Cell(p) => lattice.index(p),
            ReducedEnvState::Empty => lattice.cell_count(),
        }
    }

    pub fn from_index(lattice: &Lattice, index: usize) -> Self {
        if index == lattice.cell_count() {
            ReducedEnvState::Empty
        } else {
            ReducedEnvState::Cell(lattice.position(index))
        }
    }

    /// Size of the reduced alphabet, `N^2 + 1`.
    pub fn alphabet_size(lattice: &Lattice) -> usize {
        lattice.cell_count() + 1
    }
}

/// How a replica's unit weight is spread over stacked nutrient cells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum EnvWeighting {
    /// `count(c) / N_Y` per occupied cell; sums to one per replica.
    #[default]
    Multiplicity,
    /// `1 / N_Y` per occupied cell regardless of stacking; sums to less than
    /// one when nutrients stack, so histograms are normalised by their
    /// actual total weight.
    Indicator,
}

/// Multiplicity-weighted reduction of a nutrient configuration.
pub fn reduce_env(snapshot: &NutrientSnapshot) -> Vec<(ReducedEnvState, f64)> {
    reduce_env_with(snapshot, EnvWeighting::Multiplicity)
}

pub fn reduce_env_with(snapshot: &NutrientSnapshot, weighting: EnvWeighting) -> Vec<(ReducedEnvState, f64)> {
    let total = snapshot.total();
    if total == 0 {
        return vec![(ReducedEnvState::Empty, 1.0)];
    }
    let total = f64::from(total);
    snapshot
        .cells()
        .iter()
        .map(|&(p, c)| {
            let w = match weighting {
                EnvWeighting::Multiplicity => f64::from(c) / total,
                EnvWeighting::Indicator => 1.0 / total,
            };
            (ReducedEnvState::Cell(p), w)
        })
        .collect()
}

/// Fixed-point unit weight used by the streaming accumulator.
pub(crate) const FIXED_ONE: u64 = 1 << 32;

/// Fixed-point reduction into `(env index, weight)` pairs.
///
/// Under multiplicity weighting the weights sum to exactly [`FIXED_ONE`]:
/// truncation remainders go to the first cells in row-major order.
pub(crate) fn reduce_env_fixed(
    lattice: &Lattice,
    snapshot: &NutrientSnapshot,
    weighting: EnvWeighting,
    out: &mut Vec<(usize, u64)>,
) {
    out.clear();
    let total = u64::from(snapshot.total());
    if total == 0 {
        out.push((lattice.cell_count(), FIXED_ONE));
        return;
    }
    match weighting {
        EnvWeighting::Multiplicity => {
            let mut assigned = 0;
            for &(p, c) in snapshot.cells() {
                let w = u64::from(c) * FIXED_ONE / total;
                assigned += w;
                out.push((lattice.index(p), w));
            }
            let remainder = FIXED_ONE - assigned;
            debug_assert!(remainder < out.len() as u64 + 1);
            for entry in out.iter_mut().take(remainder as usize) {
                entry.1 += 1;
            }
        }
        EnvWeighting::Indicator => {
            let w = FIXED_ONE / total;
            out.extend(snapshot.cells().iter().map(|&(p, _)| (lattice.index(p), w)));
        }
    }
}
