//! Minimal-weight decoding by exhaustive defect pairing.

use alloc::vec;
use alloc::vec::Vec;

use super::lattice::{xor_edges, TorusLattice};
use crate::error::{bail, Result};

/// Largest defect count accepted by [`mwpm_decode`].
pub const MAX_DEFECTS: usize = 16;

/// Minimum-cost perfect pairing of `defects` under torus distance.
///
/// Returns pairs of positions into `defects`. Ties go to the partner with
/// the smallest position, so the result is deterministic.
pub fn min_weight_pairing(lattice: &TorusLattice, defects: &[usize]) -> Result<(usize, Vec<(usize, usize)>)> {
    let k = defects.len();
    if k % 2 == 1 {
        bail!(InvalidArgument, "odd number of defects ({k}) is not a valid syndrome");
    }
    if k > MAX_DEFECTS {
        bail!(Budget, "{k} defects exceed the exhaustive pairing limit {MAX_DEFECTS}");
    }
    if k == 0 {
        return Ok((0, Vec::new()));
    }
    let mut dist = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            dist[i * k + j] = lattice.distance(defects[i], defects[j]);
        }
    }
    // cost[mask]: best pairing of the defects in mask, always pairing the
    // lowest member first
    let size = 1usize << k;
    let mut cost = vec![usize::MAX; size];
    let mut choice = vec![0u8; size];
    cost[0] = 0;
    for mask in 1..size {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = usize::MAX;
        let mut arg = 0;
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            let sub = cost[rest & !(1 << j)];
            let c = sub + dist[i * k + j];
            if c < best {
                best = c;
                arg = j;
            }
        }
        cost[mask] = best;
        choice[mask] = arg as u8;
    }
    let mut pairs = Vec::with_capacity(k / 2);
    let mut mask = size - 1;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    Ok((cost[size - 1], pairs))
}

/// Minimal-weight Z correction for a set of star defects, as a sorted edge
/// list. The correction's weight equals the minimum pairing cost.
pub fn mwpm_decode(lattice: &TorusLattice, defects: &[usize]) -> Result<Vec<usize>> {
    let (_, pairs) = min_weight_pairing(lattice, defects)?;
    let edges = pairs.iter().flat_map(|&(i, j)| lattice.geodesic(defects[i], defects[j]));
    Ok(xor_edges(lattice.n_qubits(), edges))
}

/// X correction for plaquette defects, through the lattice duality.
pub fn mwpm_decode_x(lattice: &TorusLattice, plaquettes: &[usize]) -> Result<Vec<usize>> {
    let mut stars: Vec<usize> = plaquettes.iter().map(|&p| lattice.dual_plaquette_inv(p)).collect();
    stars.sort_unstable();
    let z = mwpm_decode(lattice, &stars)?;
    let mut x: Vec<usize> = z.into_iter().map(|e| lattice.dual_edge(e)).collect();
    x.sort_unstable();
    Ok(x)
}
