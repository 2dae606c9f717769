//! Two shifted dyadic systems on the real line.
//!
//! System 0 is the standard grid `2^-k [m, m+1)`. System 1 is shifted by
//! `(-1)^k / 3` at level `k`, which keeps it nested and makes every interval
//! sit inside a cube of comparable length from one of the two systems.
//!
//! Endpoints of system 1 are not dyadic rationals, so containment is decided
//! exactly on integer numerators over the common denominator `3 * 2^K`.

use crate::error::{Error, Result};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Window that holds `5Q` for every cube `Q` inside `[0, 1]`.
pub const WORKING_WINDOW: Interval = Interval { lo: -8.0, hi: 9.0 };

/// Coarsest level needed for a single cube to contain the working window.
pub const COARSEST_LEVEL: i32 = -6;

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.lo <= x && x < self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (hi > lo).then_some(Interval { lo, hi })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCube {
    pub system: u8,
    pub level: i32,
    pub index: i64,
}

fn pow2(k: i32) -> f64 {
    2f64.powi(k)
}

impl DyadicCube {
    pub fn new(system: u8, level: i32, index: i64) -> Self {
        assert!(system <= 1, "only systems 0 and 1 exist");
        Self { system, level, index }
    }

    /// `3 * s_b(k)`: zero for system 0, `(-1)^k` for system 1.
    fn shift_thirds(system: u8, level: i32) -> i64 {
        match system {
            0 => 0,
            _ if level.rem_euclid(2) == 0 => 1,
            _ => -1,
        }
    }

    /// Cube of the given system and level that contains `x`.
    pub fn containing(system: u8, level: i32, x: f64) -> Self {
        let shift = Self::shift_thirds(system, level) as f64 / 3.0;
        let mut index = (x * pow2(level) - shift).floor() as i64;
        // Guard against rounding at endpoints.
        let mut cube = Self::new(system, level, index);
        if x < cube.left() {
            index -= 1;
            cube = Self::new(system, level, index);
        } else if x >= cube.right() {
            index += 1;
            cube = Self::new(system, level, index);
        }
        cube
    }

    pub fn length(&self) -> f64 {
        pow2(-self.level)
    }

    pub fn measure(&self) -> f64 {
        self.length()
    }

    // numerator times 2^-level, then one rounding: shared endpoints agree bitwise across levels
    fn endpoint(&self, offset: i64) -> f64 {
        let thirds = 3 * self.index + Self::shift_thirds(self.system, self.level) + offset;
        thirds as f64 * self.length() / 3.0
    }

    pub fn left(&self) -> f64 {
        self.endpoint(0)
    }

    pub fn right(&self) -> f64 {
        self.endpoint(3)
    }

    pub fn interval(&self) -> Interval {
        Interval::new(self.left(), self.right())
    }

    pub fn contains_point(&self, x: f64) -> bool {
        self.interval().contains_point(x)
    }

    /// Endpoint numerators over the denominator `3 * 2^scale`.
    fn exact_bounds(&self, scale: i32) -> (i128, i128) {
        debug_assert!(scale >= self.level);
        let factor = 1i128 << (scale - self.level);
        let lo = (3 * self.index as i128 + Self::shift_thirds(self.system, self.level) as i128) * factor;
        (lo, lo + 3 * factor)
    }

    /// Exact set containment `other ⊆ self`.
    pub fn contains_cube(&self, other: &DyadicCube) -> bool {
        let scale = self.level.max(other.level);
        let (a, b) = self.exact_bounds(scale);
        let (c, d) = other.exact_bounds(scale);
        a <= c && d <= b
    }

    pub fn strictly_contains(&self, other: &DyadicCube) -> bool {
        self != other && self.contains_cube(other)
    }

    pub fn is_disjoint(&self, other: &DyadicCube) -> bool {
        let scale = self.level.max(other.level);
        let (a, b) = self.exact_bounds(scale);
        let (c, d) = other.exact_bounds(scale);
        b <= c || d <= a
    }

    pub fn children(&self) -> (DyadicCube, DyadicCube) {
        let first = 2 * self.index + Self::shift_thirds(self.system, self.level);
        (
            Self::new(self.system, self.level + 1, first),
            Self::new(self.system, self.level + 1, first + 1),
        )
    }

    pub fn parent(&self) -> DyadicCube {
        let shift = Self::shift_thirds(self.system, self.level - 1);
        Self::new(self.system, self.level - 1, (self.index - shift).div_euclid(2))
    }

    /// Descendant at `level` whose left endpoint equals this cube's.
    pub fn first_descendant(&self, level: i32) -> DyadicCube {
        let mut cube = *self;
        while cube.level < level {
            cube = cube.children().0;
        }
        cube
    }

    /// The neighbourhood `{x : d(x, Q) <= 4 l(Q)}`.
    pub fn dilate5(&self) -> Interval {
        let l = self.length();
        Interval::new(self.left() - 4.0 * l, self.right() + 4.0 * l)
    }

    /// Dilation about the centre by `factor`.
    pub fn dilate(&self, factor: f64) -> Interval {
        let l = self.length();
        let pad = 0.5 * (factor - 1.0) * l;
        Interval::new(self.left() - pad, self.right() + pad)
    }
}

impl Serialize for DyadicCube {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DyadicCube", 5)?;
        s.serialize_field("system", &self.system)?;
        s.serialize_field("level", &self.level)?;
        s.serialize_field("index", &self.index)?;
        s.serialize_field("left", &self.left())?;
        s.serialize_field("right", &self.right())?;
        s.end()
    }
}

/// One dyadic system restricted to a window, with a finest level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicSystem {
    pub system: u8,
    pub window: Interval,
    pub max_depth: i32,
}

impl DyadicSystem {
    pub fn new(system: u8, max_depth: i32) -> Self {
        assert!(system <= 1, "only systems 0 and 1 exist");
        Self {
            system,
            window: WORKING_WINDOW,
            max_depth,
        }
    }

    /// Cubes at `level` that meet the window, left to right.
    pub fn cubes_at_level(&self, level: i32) -> Vec<DyadicCube> {
        let first = DyadicCube::containing(self.system, level, self.window.lo);
        let mut out = Vec::new();
        let mut index = first.index;
        loop {
            let cube = DyadicCube::new(self.system, level, index);
            if cube.left() >= self.window.hi {
                break;
            }
            out.push(cube);
            index += 1;
        }
        out
    }

    pub fn children(&self, cube: &DyadicCube) -> Result<(DyadicCube, DyadicCube)> {
        if cube.level >= self.max_depth {
            return Err(Error::Leaf(*cube));
        }
        Ok(cube.children())
    }
}

/// Smallest cube from either system containing `interval`.
///
/// Ties at equal length go to system 0.
pub fn cover_interval(interval: Interval) -> Result<DyadicCube> {
    if !(interval.length() > 0.0) || !WORKING_WINDOW.contains(&interval) {
        return Err(Error::Window(interval));
    }
    // No cube shorter than the interval can contain it.
    let finest = (-interval.length().log2()).floor() as i32;
    for level in (COARSEST_LEVEL..=finest).rev() {
        for system in 0..=1u8 {
            let cube = DyadicCube::containing(system, level, interval.lo);
            if cube.interval().contains(&interval) {
                return Ok(cube);
            }
        }
    }
    Err(Error::Window(interval))
}

/// Maximal cubes of `root`'s system whose union is exactly the marked set.
///
/// `marked[i]` flags the `i`-th descendant of `root` at `finest_level`, left
/// to right. Every returned cube has a parent that is not fully marked.
pub fn maximal_covering(root: DyadicCube, finest_level: i32, marked: &[bool]) -> Result<Vec<DyadicCube>> {
    assert!(finest_level >= root.level);
    let cells = 1usize << (finest_level - root.level);
    assert_eq!(marked.len(), cells, "mask length must match the descendants of the root");

    let mut prefix = Vec::with_capacity(cells + 1);
    prefix.push(0usize);
    for &m in marked {
        prefix.push(prefix.last().unwrap() + m as usize);
    }
    let count = |lo: usize, hi: usize| prefix[hi] - prefix[lo];

    if count(0, cells) == cells {
        return Err(Error::CoveringUndefined);
    }

    let mut out = Vec::new();
    // (cube, first cell offset, number of cells)
    let mut stack = vec![(root, 0usize, cells)];
    while let Some((cube, lo, len)) = stack.pop() {
        let hits = count(lo, lo + len);
        if hits == 0 {
            continue;
        }
        if hits == len {
            out.push(cube);
            continue;
        }
        let (left, right) = cube.children();
        let half = len / 2;
        stack.push((right, lo + half, half));
        stack.push((left, lo, half));
    }
    Ok(out)
}
