//! Counting Z-type operators with a fixed syndrome, weight and class.
//!
//! The search fixes the parity of one mismatched vertex at a time by
//! choosing an odd subset of its undecided edges, which decides all of them.
//! Once every vertex matches, the remaining budget can only be spent on
//! closed loops, so it branches on single edges. Every edge set is reached
//! along exactly one branch.

use alloc::vec;
use alloc::vec::Vec;

use super::lattice::TorusLattice;
use crate::error::{bail, Result};

/// Node limit of one search.
pub const COUNT_NODE_LIMIT: u64 = 2_000_000_000;

struct Search<'a> {
    lat: &'a TorusLattice,
    budget: usize,
    decided: Vec<bool>,
    included: Vec<usize>,
    mismatch: Vec<bool>,
    counts: [u64; 4],
    nodes: u64,
}

impl Search<'_> {
    fn mismatched(&self) -> Vec<usize> {
        (0..self.mismatch.len()).filter(|&v| self.mismatch[v]).collect()
    }

    /// Lower bound on the edges still needed to clear the mismatches.
    fn lower_bound(&self, m: &[usize]) -> usize {
        let mut twice = 0;
        for &a in m {
            twice += m.iter().filter(|&&b| b != a).map(|&b| self.lat.distance(a, b)).min().unwrap_or(0);
        }
        twice.div_ceil(2)
    }

    fn set(&mut self, e: usize) {
        self.included.push(e);
        for v in self.lat.edge_vertices(e) {
            self.mismatch[v] ^= true;
        }
    }

    fn unset(&mut self, e: usize) {
        self.included.pop();
        for v in self.lat.edge_vertices(e) {
            self.mismatch[v] ^= true;
        }
    }

    fn go(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > COUNT_NODE_LIMIT {
            bail!(Budget, "operator count exceeded {COUNT_NODE_LIMIT} search nodes");
        }
        let left = self.budget - self.included.len();
        let m = self.mismatched();
        if self.lower_bound(&m) > left {
            return Ok(());
        }
        if m.is_empty() {
            if left == 0 {
                let (z1, z2) = self.lat.z_class(&self.included);
                self.counts[((z1 as usize) << 1) | z2 as usize] += 1;
                return Ok(());
            }
            // a closed loop costs at least min(4, L) edges
            if left < 4.min(self.lat.l()) {
                return Ok(());
            }
            let Some(e) = (0..self.decided.len()).find(|&e| !self.decided[e]) else {
                return Ok(());
            };
            self.decided[e] = true;
            self.go()?;
            self.set(e);
            self.go()?;
            self.unset(e);
            self.decided[e] = false;
            return Ok(());
        }
        let v = m[0];
        let free: Vec<usize> = self.lat.star(v).into_iter().filter(|&e| !self.decided[e]).collect();
        for &e in &free {
            self.decided[e] = true;
        }
        for sub in 1u32..1 << free.len() {
            if sub.count_ones() % 2 == 0 || sub.count_ones() as usize > left {
                continue;
            }
            let chosen: Vec<usize> = (0..free.len()).filter(|&i| sub >> i & 1 == 1).map(|i| free[i]).collect();
            for &e in &chosen {
                self.set(e);
            }
            self.go()?;
            for &e in chosen.iter().rev() {
                self.unset(e);
            }
        }
        for &e in &free {
            self.decided[e] = false;
        }
        Ok(())
    }
}

/// Number of Z edge sets with star defects `defects` and weight `weight`,
/// split by class index `2 z1 + z2`.
pub fn count_operators_by_class(lattice: &TorusLattice, defects: &[usize], weight: usize) -> Result<[u64; 4]> {
    if defects.len() % 2 == 1 {
        bail!(InvalidArgument, "odd number of defects ({}) is not a valid syndrome", defects.len());
    }
    let mut mismatch = vec![false; lattice.n_vertices()];
    for &d in defects {
        if d >= mismatch.len() {
            bail!(OutOfRange, "vertex {d} outside the lattice");
        }
        mismatch[d] ^= true;
    }
    let mut s = Search {
        lat: lattice,
        budget: weight,
        decided: vec![false; lattice.n_qubits()],
        included: Vec::new(),
        mismatch,
        counts: [0; 4],
        nodes: 0,
    };
    s.go()?;
    Ok(s.counts)
}

pub fn count_operators(lattice: &TorusLattice, defects: &[usize], weight: usize, class: usize) -> Result<u64> {
    if class > 3 {
        bail!(OutOfRange, "class index {class} is not in 0..4");
    }
    Ok(count_operators_by_class(lattice, defects, weight)?[class])
}
