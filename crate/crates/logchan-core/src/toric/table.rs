//! Exhaustive standard-error table and single-axis string census for `L = 3`.

use alloc::vec;
use alloc::vec::Vec;

use super::decoder::{mwpm_decode, mwpm_decode_x};
use super::lattice::{Axis, TorusLattice};
use crate::error::{bail, Result};

/// Lattice size of the exhaustive table.
pub const TABLE_L: usize = 3;
const N: usize = 2 * TABLE_L * TABLE_L;
const V: usize = TABLE_L * TABLE_L;

/// A decoder for both error sectors of the toric code.
pub trait ToricDecoder: Send + Sync {
    fn lattice(&self) -> &TorusLattice;

    /// Z correction (sorted edges) for a sorted list of star defects.
    fn decode_z(&self, stars: &[usize]) -> Result<Vec<usize>>;

    /// X correction for plaquette defects; defaults to the dual image of the
    /// Z decoder.
    fn decode_x(&self, plaquettes: &[usize]) -> Result<Vec<usize>> {
        let lat = *self.lattice();
        let mut stars: Vec<usize> = plaquettes.iter().map(|&p| lat.dual_plaquette_inv(p)).collect();
        stars.sort_unstable();
        let z = self.decode_z(&stars)?;
        let mut x: Vec<usize> = z.into_iter().map(|e| lat.dual_edge(e)).collect();
        x.sort_unstable();
        Ok(x)
    }
}

/// Exhaustive defect-pairing decoder.
#[derive(Debug, Clone, Copy)]
pub struct MatchingDecoder {
    lattice: TorusLattice,
}

impl MatchingDecoder {
    pub fn new(lattice: TorusLattice) -> Self {
        Self { lattice }
    }
}

impl ToricDecoder for MatchingDecoder {
    fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    fn decode_z(&self, stars: &[usize]) -> Result<Vec<usize>> {
        mwpm_decode(&self.lattice, stars)
    }

    fn decode_x(&self, plaquettes: &[usize]) -> Result<Vec<usize>> {
        mwpm_decode_x(&self.lattice, plaquettes)
    }
}

/// One row of the standard-error table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableEntry {
    /// Edge bitmask of `E_s`.
    pub correction: u32,
    pub weight: u32,
    /// Minimal weight is reached in more than one homology class.
    pub ambiguous: bool,
}

/// Per-syndrome minimal-weight Z corrections at `L = 3`, keyed by the
/// 9-bit star-defect mask. Ties go to the numerically smallest edge mask.
#[derive(Debug, Clone)]
pub struct SyndromeTable {
    lattice: TorusLattice,
    entries: Vec<Option<TableEntry>>,
}

/// Counts of single-axis strings by syndrome, homology class and weight at
/// `L = 3`.
///
/// `count(s, k, w)` is the number of edge sets with defect mask `s`, class
/// index `k = 2 c1 + c2` and weight `w`. For Z strings the defects are stars
/// and `(c1, c2) = (z1, z2)`; for X strings they are plaquettes and
/// `(c1, c2) = (x1, x2)`.
#[derive(Debug, Clone)]
pub struct StringCensus {
    axis: Axis,
    counts: Vec<u32>,
}

/// Defect mask and class index of every edge at `L = 3`.
pub(crate) struct EdgeMaps {
    pub syndrome: [u32; N],
    pub class: [u8; N],
}

pub(crate) fn edge_maps(lat: &TorusLattice, axis: Axis) -> EdgeMaps {
    let mut syndrome = [0u32; N];
    let mut class = [0u8; N];
    for e in 0..N {
        let (defects, (c1, c2)) = match axis {
            Axis::Z => (lat.edge_vertices(e), lat.z_class(&[e])),
            Axis::X => (lat.edge_plaquettes(e), lat.x_class(&[e])),
        };
        for v in defects {
            syndrome[e] ^= 1 << v;
        }
        class[e] = (c1 as u8) << 1 | c2 as u8;
    }
    EdgeMaps { syndrome, class }
}

/// Syndrome and class of every edge mask, by lowest-bit recursion.
fn all_syndromes(maps: &EdgeMaps) -> (Vec<u16>, Vec<u8>) {
    let size = 1usize << N;
    let mut syn = vec![0u16; size];
    let mut cls = vec![0u8; size];
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        let prev = m & (m - 1);
        syn[m] = syn[prev] ^ maps.syndrome[low] as u16;
        cls[m] = cls[prev] ^ maps.class[low];
    }
    (syn, cls)
}

fn edges_of(mask: u32) -> Vec<usize> {
    (0..N).filter(|&e| mask >> e & 1 == 1).collect()
}

/// Exhaustive minimal-weight table for `L = 3`.
pub fn standard_error_table(l: usize) -> Result<SyndromeTable> {
    if l != TABLE_L {
        bail!(OutOfRange, "the exhaustive table is only built for L = {TABLE_L}, got {l}");
    }
    let lattice = TorusLattice::new(l)?;
    let maps = edge_maps(&lattice, Axis::Z);
    let (syn, cls) = all_syndromes(&maps);
    // best (weight, mask) per syndrome, and minimal weight per (syndrome, class)
    let mut best: Vec<Option<(u32, u32)>> = vec![None; 1 << V];
    let mut class_min = vec![u32::MAX; (1 << V) * 4];
    for m in 0..1u32 << N {
        let s = syn[m as usize] as usize;
        let w = m.count_ones();
        let slot = &mut class_min[s * 4 + cls[m as usize] as usize];
        *slot = (*slot).min(w);
        // masks arrive in increasing order, so ties keep the smaller mask
        match best[s] {
            Some((bw, _)) if bw <= w => {}
            _ => best[s] = Some((w, m)),
        }
    }
    let entries = (0..1usize << V)
        .map(|s| {
            best[s].map(|(weight, correction)| {
                let ties = class_min[s * 4..s * 4 + 4].iter().filter(|&&w| w == weight).count();
                TableEntry { correction, weight, ambiguous: ties > 1 }
            })
        })
        .collect();
    Ok(SyndromeTable { lattice, entries })
}

impl SyndromeTable {
    pub fn lattice_ref(&self) -> &TorusLattice {
        &self.lattice
    }

    /// Entry for a star-defect mask; `None` for odd-parity masks.
    pub fn entry(&self, defect_mask: u32) -> Option<TableEntry> {
        self.entries.get(defect_mask as usize).copied().flatten()
    }

    /// Every reachable syndrome mask with its entry, in mask order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, TableEntry)> + '_ {
        self.entries.iter().enumerate().filter_map(|(s, e)| e.map(|e| (s as u32, e)))
    }

    pub fn len(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of syndromes whose minimal weight is reached in two classes.
    pub fn ambiguous_count(&self) -> usize {
        self.iter().filter(|(_, e)| e.ambiguous).count()
    }

    /// Standard X error for a plaquette-defect mask: the dual image of the
    /// Z entry.
    pub fn dual_entry(&self, plaquette_mask: u32) -> Option<TableEntry> {
        let lat = self.lattice;
        let stars =
            (0..V).filter(|&p| plaquette_mask >> p & 1 == 1).fold(0u32, |m, p| m | 1 << lat.dual_plaquette_inv(p));
        self.entry(stars).map(|e| TableEntry {
            correction: edges_of(e.correction).into_iter().fold(0u32, |m, x| m | 1 << lat.dual_edge(x)),
            ..e
        })
    }

    /// Entry for the given noise axis.
    pub fn entry_for(&self, axis: Axis, mask: u32) -> Option<TableEntry> {
        match axis {
            Axis::Z => self.entry(mask),
            Axis::X => self.dual_entry(mask),
        }
    }
}

impl ToricDecoder for SyndromeTable {
    fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    fn decode_z(&self, stars: &[usize]) -> Result<Vec<usize>> {
        let mask = stars.iter().fold(0u32, |m, &v| m | 1 << v);
        match self.entry(mask) {
            Some(e) => Ok(edges_of(e.correction)),
            None => bail!(InvalidArgument, "odd number of defects ({}) is not a valid syndrome", stars.len()),
        }
    }
}

impl StringCensus {
    pub fn build(axis: Axis) -> Result<Self> {
        let lattice = TorusLattice::new(TABLE_L)?;
        let maps = edge_maps(&lattice, axis);
        let (syn, cls) = all_syndromes(&maps);
        let mut counts = vec![0u32; (1 << V) * 4 * (N + 1)];
        for m in 0..1usize << N {
            let w = m.count_ones() as usize;
            counts[(syn[m] as usize * 4 + cls[m] as usize) * (N + 1) + w] += 1;
        }
        Ok(Self { axis, counts })
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn count(&self, syndrome: u32, class: usize, weight: usize) -> u32 {
        if weight > N {
            return 0;
        }
        self.counts[(syndrome as usize * 4 + class) * (N + 1) + weight]
    }

    /// Weight profile of one (syndrome, class) cell.
    pub fn profile(&self, syndrome: u32, class: usize) -> &[u32] {
        let start = (syndrome as usize * 4 + class) * (N + 1);
        &self.counts[start..start + N + 1]
    }
}
