//! Connected logical strings and their shapes.
//!
//! A logical string here is a simple cycle of edges that winds once around
//! the torus left to right (the `Z1` class) and not at all vertically. The
//! enumeration walks the universal cover from `(r, 0)` to `(r, L)` starting
//! with the anchor edge `h(r, 0)`, keeps the walk self-avoiding on torus
//! vertices and deduplicates by edge set, since a long string may cross the
//! anchor column more than once.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::{Orientation, TorusLattice};
use crate::error::{bail, Result};

/// Longest excess length `ell - L` accepted by the enumeration.
pub const MAX_EXCESS: usize = 6;

/// One unit move on the universal cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    Right,
    Left,
    Up,
    Down,
}

/// A connected, homologically nontrivial simple cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogicalString {
    pub l: usize,
    /// Edges in walk order, starting with the anchor edge.
    pub edges: Vec<usize>,
    /// Moves in walk order, in the string's own frame (left to right).
    pub moves: Vec<Move>,
    /// Row of the first vertex in the string's own frame.
    pub start_row: usize,
    /// `Horizontal` for `Z1`-type strings, `Vertical` for their transposes.
    pub winding: Orientation,
}

/// Shape class in the sense of the typical-shape definition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeClass {
    Typical,
    /// Some move runs right to left.
    Backtracking,
    /// Two vertical moves in a row.
    TallStep,
    /// Two steps closer than `gamma sqrt(L)` columns.
    CrowdedSteps,
}

impl LogicalString {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Sorted edge set.
    pub fn edge_set(&self) -> Vec<usize> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Column (in the string's frame, mod `L`) of every vertical move.
    pub fn step_columns(&self) -> Vec<usize> {
        let mut x = 0isize;
        let mut out = Vec::new();
        for m in &self.moves {
            match m {
                Move::Right => x += 1,
                Move::Left => x -= 1,
                Move::Up | Move::Down => out.push(x.rem_euclid(self.l as isize) as usize),
            }
        }
        out
    }

    /// Height after each horizontal move (the string's profile).
    pub fn height_profile(&self) -> Vec<isize> {
        let mut y = 0isize;
        let mut out = Vec::new();
        for m in &self.moves {
            match m {
                Move::Up => y -= 1,
                Move::Down => y += 1,
                _ => out.push(-y),
            }
        }
        out
    }

    /// The mirror string across the main diagonal, swapping the `Z1` and
    /// `Z2` classes.
    pub fn transpose(&self, lattice: &TorusLattice) -> Self {
        let l = lattice.l();
        let edges = self
            .edges
            .iter()
            .map(|&e| {
                let (r, c, o) = lattice.edge_coords(e);
                match o {
                    Orientation::Horizontal => lattice.v(c as isize, r as isize),
                    Orientation::Vertical => lattice.h(c as isize, r as isize),
                }
            })
            .collect();
        let winding = match self.winding {
            Orientation::Horizontal => Orientation::Vertical,
            Orientation::Vertical => Orientation::Horizontal,
        };
        Self { l, edges, moves: self.moves.clone(), start_row: self.start_row, winding }
    }
}

/// Edge crossed by `mv` from unwrapped vertex `(y, x)` in the horizontal
/// frame.
fn edge_of(lat: &TorusLattice, y: isize, x: isize, mv: Move) -> usize {
    match mv {
        Move::Right => lat.h(y, x),
        Move::Left => lat.h(y, x - 1),
        Move::Down => lat.v(y, x),
        Move::Up => lat.v(y - 1, x),
    }
}

fn delta(mv: Move) -> (isize, isize) {
    match mv {
        Move::Right => (0, 1),
        Move::Left => (0, -1),
        Move::Up => (-1, 0),
        Move::Down => (1, 0),
    }
}

/// Build a horizontal-frame string from a start row and a move list.
pub fn string_from_moves(lattice: &TorusLattice, start_row: usize, moves: &[Move]) -> Result<LogicalString> {
    let l = lattice.l() as isize;
    let (mut y, mut x) = (start_row as isize, 0isize);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::with_capacity(moves.len());
    for &mv in moves {
        if !seen.insert(lattice.vertex(y, x)) {
            bail!(InvalidArgument, "move list revisits a vertex");
        }
        edges.push(edge_of(lattice, y, x, mv));
        let (dy, dx) = delta(mv);
        y += dy;
        x += dx;
    }
    if (y, x) != (start_row as isize, l) {
        bail!(InvalidArgument, "move list must wind once left to right and return to its row");
    }
    Ok(LogicalString { l: lattice.l(), edges, moves: moves.to_vec(), start_row, winding: Orientation::Horizontal })
}

struct Walk<'a> {
    lat: &'a TorusLattice,
    l: isize,
    target_len: usize,
    start_row: isize,
    visited: Vec<bool>,
    moves: Vec<Move>,
    edges: Vec<usize>,
    seen: &'a mut BTreeSet<Vec<usize>>,
    out: &'a mut Vec<LogicalString>,
}

impl Walk<'_> {
    fn go(&mut self, y: isize, x: isize) {
        let left = self.target_len - self.moves.len();
        let (ty, tx) = (self.start_row, self.l);
        if left == 0 {
            if (y, x) == (ty, tx) {
                let mut key = self.edges.clone();
                key.sort_unstable();
                if self.seen.insert(key) {
                    self.out.push(LogicalString {
                        l: self.l as usize,
                        edges: self.edges.clone(),
                        moves: self.moves.clone(),
                        start_row: self.start_row as usize,
                        winding: Orientation::Horizontal,
                    });
                }
            }
            return;
        }
        for mv in [Move::Right, Move::Up, Move::Down, Move::Left] {
            let (dy, dx) = delta(mv);
            let (ny, nx) = (y + dy, x + dx);
            let dist = (ty - ny).unsigned_abs() + (tx - nx).unsigned_abs();
            if dist > left - 1 {
                continue;
            }
            let at_target = (ny, nx) == (ty, tx);
            if at_target && left != 1 {
                continue;
            }
            let v = self.lat.vertex(ny, nx);
            if !at_target && self.visited[v] {
                continue;
            }
            self.visited[v] = true;
            self.moves.push(mv);
            self.edges.push(edge_of(self.lat, y, x, mv));
            self.go(ny, nx);
            self.edges.pop();
            self.moves.pop();
            if !at_target {
                self.visited[v] = false;
            }
        }
    }
}

/// Every `Z1`-type logical string of length exactly `ell`.
pub fn logical_strings_of_length(lattice: &TorusLattice, ell: usize) -> Result<Vec<LogicalString>> {
    let l = lattice.l();
    if ell < l || (ell - l) % 2 == 1 {
        return Ok(Vec::new());
    }
    if ell - l > MAX_EXCESS {
        bail!(Budget, "string length {ell} exceeds L + {MAX_EXCESS}");
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in 0..l {
        let mut visited = vec![false; lattice.n_vertices()];
        // the start vertex is also the end of the walk
        visited[lattice.vertex(r as isize, 0)] = true;
        visited[lattice.vertex(r as isize, 1)] = true;
        let mut walk = Walk {
            lat: lattice,
            l: l as isize,
            target_len: ell,
            start_row: r as isize,
            visited,
            moves: vec![Move::Right],
            edges: vec![lattice.h(r as isize, 0)],
            seen: &mut seen,
            out: &mut out,
        };
        walk.go(r as isize, 1);
    }
    Ok(out)
}

/// Every `Z1`-type logical string with `L <= ell <= ell_max`, by length.
pub fn enumerate_logical_strings(lattice: &TorusLattice, ell_max: usize) -> Result<Vec<LogicalString>> {
    let mut out = Vec::new();
    for ell in (lattice.l()..=ell_max).step_by(2) {
        out.extend(logical_strings_of_length(lattice, ell)?);
    }
    Ok(out)
}

/// Shape class of a string; `gamma sqrt(L)` is the minimum cyclic column
/// gap between steps.
pub fn classify_string_shape(s: &LogicalString, gamma: f64) -> ShapeClass {
    if s.moves.contains(&Move::Left) {
        return ShapeClass::Backtracking;
    }
    let vertical = |m: &Move| matches!(m, Move::Up | Move::Down);
    // the walk is cyclic, so the last and first moves are also adjacent
    let n = s.moves.len();
    if (0..n).any(|i| vertical(&s.moves[i]) && vertical(&s.moves[(i + 1) % n])) {
        return ShapeClass::TallStep;
    }
    let cols = s.step_columns();
    let min_gap = (gamma * (s.l as f64).sqrt()).max(0.0);
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let d = cols[i].abs_diff(cols[j]);
            let d = d.min(s.l - d);
            if (d as f64) < min_gap {
                return ShapeClass::CrowdedSteps;
            }
        }
    }
    ShapeClass::Typical
}

/// Counts of one string length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthCount {
    pub length: usize,
    pub total: u64,
    /// Strings through the edge `h(0, 0)`.
    pub through_anchor: u64,
    pub typical: u64,
    pub backtracking: u64,
    pub tall_step: u64,
    pub crowded_steps: u64,
}

impl LengthCount {
    pub fn atypical(&self) -> u64 {
        self.total - self.typical
    }
}

/// Shape census of all strings up to `ell_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeCensus {
    pub l: usize,
    pub gamma: f64,
    pub zeta: usize,
    pub by_length: Vec<LengthCount>,
    /// Fraction of atypical strings over all lengths.
    pub atypical_fraction: f64,
    /// `8 gamma zeta^2 / sqrt(L)` with `zeta = (ell_max - L) / 2`.
    pub predicted_fraction: f64,
}

pub fn shape_census(lattice: &TorusLattice, ell_max: usize, gamma: f64) -> Result<ShapeCensus> {
    let l = lattice.l();
    let anchor = lattice.h(0, 0);
    let mut by_length = Vec::new();
    for ell in (l..=ell_max).step_by(2) {
        let strings = logical_strings_of_length(lattice, ell)?;
        let mut c = LengthCount {
            length: ell,
            total: strings.len() as u64,
            through_anchor: 0,
            typical: 0,
            backtracking: 0,
            tall_step: 0,
            crowded_steps: 0,
        };
        for s in &strings {
            if s.edges.contains(&anchor) {
                c.through_anchor += 1;
            }
            match classify_string_shape(s, gamma) {
                ShapeClass::Typical => c.typical += 1,
                ShapeClass::Backtracking => c.backtracking += 1,
                ShapeClass::TallStep => c.tall_step += 1,
                ShapeClass::CrowdedSteps => c.crowded_steps += 1,
            }
        }
        by_length.push(c);
    }
    let total: u64 = by_length.iter().map(|c| c.total).sum();
    let atypical: u64 = by_length.iter().map(LengthCount::atypical).sum();
    let zeta = ell_max.saturating_sub(l) / 2;
    Ok(ShapeCensus {
        l,
        gamma,
        zeta,
        atypical_fraction: if total == 0 { 0.0 } else { atypical as f64 / total as f64 },
        predicted_fraction: 8.0 * gamma * (zeta * zeta) as f64 / (l as f64).sqrt(),
        by_length,
    })
}
