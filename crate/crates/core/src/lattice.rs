//! Square lattice geometry under the Chebyshev metric.

use std::fmt;

use rand::Rng;

/// A cell of the lattice, 1-based in both coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub i: u16,
    pub j: u16,
}

impl Position {
    pub const fn new(i: u16, j: u16) -> Self {
        Self { i, j }
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// `max(|a.i - b.i|, |a.j - b.j|)`.
pub fn chebyshev_distance(a: Position, b: Position) -> u16 {
    a.i.abs_diff(b.i).max(a.j.abs_diff(b.j))
}

/// The N-by-N lattice `{1..N} x {1..N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    size: u16,
}

impl Lattice {
    /// Panics if `size == 0`; callers validate sizes at configuration time.
    pub fn new(size: u16) -> Self {
        assert!(size > 0, "lattice size must be positive");
        Self { size }
    }

    pub fn size(&self) -> u16 {
        self.size
    }

    /// Number of cells, `N^2`.
    pub fn cell_count(&self) -> usize {
        usize::from(self.size) * usize::from(self.size)
    }

    pub fn contains(&self, p: Position) -> bool {
        (1..=self.size).contains(&p.i) && (1..=self.size).contains(&p.j)
    }

    /// Row-major index in `0..N^2`.
    pub fn index(&self, p: Position) -> usize {
        debug_assert!(self.contains(p), "{p} outside lattice of size {}", self.size);
        usize::from(p.i - 1) * usize::from(self.size) + usize::from(p.j - 1)
    }

    pub fn position(&self, index: usize) -> Position {
        let n = usize::from(self.size);
        debug_assert!(index < n * n);
        Position::new((index / n) as u16 + 1, (index % n) as u16 + 1)
    }

    pub fn cells(&self) -> impl Iterator<Item = Position> + Clone {
        let n = self.size;
        (1..=n).flat_map(move |i| (1..=n).map(move |j| Position::new(i, j)))
    }

    /// Maps a possibly out-of-range integer point to the nearest cell.
    pub fn clamp(&self, i: i32, j: i32) -> Position {
        let n = i32::from(self.size);
        Position::new(i.clamp(1, n) as u16, j.clamp(1, n) as u16)
    }

    /// Cells `c` with `min_dist <= d(c, center) <= max_dist`, row-major order.
    pub fn cells_at(
        &self,
        center: Position,
        min_dist: u16,
        max_dist: u16,
    ) -> impl Iterator<Item = Position> + Clone {
        let n = self.size;
        let i_lo = center.i.saturating_sub(max_dist).max(1);
        let i_hi = center.i.saturating_add(max_dist).min(n);
        let j_lo = center.j.saturating_sub(max_dist).max(1);
        let j_hi = center.j.saturating_add(max_dist).min(n);
        (i_lo..=i_hi)
            .flat_map(move |i| (j_lo..=j_hi).map(move |j| Position::new(i, j)))
            .filter(move |&c| {
                let d = chebyshev_distance(c, center);
                d >= min_dist && d <= max_dist
            })
    }

    /// Chebyshev distance from `p` to the farthest cell of the lattice.
    pub fn max_distance_from(&self, p: Position) -> u16 {
        let n = self.size;
        (p.i - 1).max(n - p.i).max(p.j - 1).max(n - p.j)
    }

    /// Cells at exact distance `radius` from `center`.
    pub fn ring(&self, center: Position, radius: u16) -> impl Iterator<Item = Position> + Clone {
        self.cells_at(center, radius, radius)
    }

    pub fn uniform_cell<R: Rng + ?Sized>(&self, rng: &mut R) -> Position {
        let idx = rng.random_range(0..self.cell_count());
        self.position(idx)
    }
}

/// Draws one element uniformly from a finite, cloneable iterator.
///
/// Returns `None` for an empty candidate set.
pub fn sample_uniform<I, R>(candidates: I, rng: &mut R) -> Option<I::Item>
where
    I: Iterator + Clone,
    R: Rng + ?Sized,
{
    let count = candidates.clone().count();
    if count == 0 {
        return None;
    }
    let pick = rng.random_range(0..count);
    candidates.into_iter().nth(pick)
}
