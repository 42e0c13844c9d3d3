//! Sum over the bipartitions of one logical string.
//!
//! A partition splits the string into `A` (acting from the left of the
//! state) and its complement `B` (from the right). Both sides share a
//! syndrome, so one decode serves the pair. The pair feeds `chi_{Z1,I}` when
//! one side is uncorrectable (`U`) and the other correctable (`C`); the term
//! with `U` on the left carries `(-i s)^{|U|} (i s)^{|C|} c^ell`, so every
//! partition contributes `(sin(theta) / 2)^ell` times a unit phase.

use alloc::vec;
use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::TorusLattice;
use super::strings::LogicalString;
use super::table::ToricDecoder;
use crate::channel::i_pow;
use crate::error::{bail, Result};
use crate::numeric::exact::{biguint_to_f64, binomial};
use crate::C64;

/// Longest string accepted by [`partition_sum`].
pub const MAX_PARTITION_LENGTH: usize = 25;

/// Exact partition sum of one string with its exceptional census.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionReport {
    pub length: usize,
    /// Gaussian-integer coefficient of `(sin(theta) / 2)^ell`.
    pub coefficient: (i64, i64),
    /// `coefficient * (sin(theta) / 2)^ell`.
    pub sum: C64,
    /// `-i C(ell - 1, (ell - 1) / 2) (sin(theta) / 2)^ell`.
    pub closed_form: C64,
    /// Ordered `(U, C)` partitions.
    pub contributing: u64,
    /// Contributing partitions with `|U| < |C|`.
    pub exceptional: u64,
    /// Pairs where neither side decodes to the identity class.
    pub misrouted: u64,
    /// Exceptional partitions indexed by `|U|`.
    pub exceptional_by_weight: Vec<u64>,
    /// Partitions with `|U| = (ell - 1) / 2` against all `C(ell, (ell - 1) / 2)`
    /// middle splits.
    pub middle_exceptional: u64,
    pub middle_total: u64,
}

impl PartitionReport {
    pub fn exceptional_fraction(&self) -> f64 {
        if self.contributing == 0 {
            0.0
        } else {
            self.exceptional as f64 / self.contributing as f64
        }
    }

    pub fn middle_fraction(&self) -> f64 {
        self.middle_exceptional as f64 / self.middle_total as f64
    }

    /// Closed-form coefficient as a Gaussian integer.
    pub fn closed_coefficient(&self) -> (i64, i64) {
        let m = (self.length - 1) / 2;
        (0, -(biguint_to_f64(&binomial((self.length - 1) as u64, m as u64)) as i64))
    }
}

/// `(zeta + 1) e^{gamma^2} 2^{-gamma sqrt(L)}`, the exceptional-fraction
/// bound for typical strings of length at most `L + 2 zeta`.
pub fn exceptional_fraction_bound(l: usize, zeta: usize, gamma: f64) -> f64 {
    (zeta as f64 + 1.0) * (gamma * gamma).exp() * 2f64.powf(-gamma * (l as f64).sqrt())
}

/// Class index `2 z1 + z2` of the edges selected by `mask`.
fn class_of(lattice: &TorusLattice, edges: &[usize]) -> u8 {
    let (z1, z2) = lattice.z_class(edges);
    (z1 as u8) << 1 | z2 as u8
}

/// Exact sum over all `2^ell` partitions of `s` under uniform rotation
/// `theta`, decoded with `decoder`.
pub fn partition_sum(s: &LogicalString, theta: f64, decoder: &dyn ToricDecoder) -> Result<PartitionReport> {
    let lattice = *decoder.lattice();
    let ell = s.len();
    if ell > MAX_PARTITION_LENGTH {
        bail!(Budget, "string length {ell} exceeds the partition limit {MAX_PARTITION_LENGTH}");
    }
    if ell == 0 || s.l != lattice.l() {
        bail!(InvalidArgument, "string does not belong to this lattice");
    }
    if !theta.is_finite() {
        bail!(InvalidArgument, "rotation angle must be finite");
    }
    let string_class = class_of(&lattice, &s.edges);
    if string_class == 0 {
        bail!(InvalidArgument, "edge set is homologically trivial");
    }
    let full = (1u32 << ell) - 1;
    let mut re = 0i64;
    let mut im = 0i64;
    let mut contributing = 0;
    let mut exceptional = 0;
    let mut misrouted = 0;
    let mut by_weight = vec![0u64; ell + 1];
    let mut middle_exceptional = 0;
    let m = (ell - 1) / 2;
    // one representative per complementary pair: the side without edge 0
    for a in 0..=full {
        if a & 1 == 1 {
            continue;
        }
        let b = full ^ a;
        let a_edges: Vec<usize> = (0..ell).filter(|&j| a >> j & 1 == 1).map(|j| s.edges[j]).collect();
        let defects = lattice.boundary(&a_edges);
        let correction = decoder.decode_z(&defects)?;
        let ke = class_of(&lattice, &correction);
        let ka = class_of(&lattice, &a_edges) ^ ke;
        let kb = ka ^ string_class;
        let (u, c) = match (ka, kb) {
            (0, _) => (b, a),
            (_, 0) => (a, b),
            _ => {
                misrouted += 1;
                continue;
            }
        };
        let (wu, wc) = (u.count_ones() as usize, c.count_ones() as usize);
        contributing += 1;
        let unit = i_pow(((3 * wu + wc) % 4) as u8);
        re += unit.re as i64;
        im += unit.im as i64;
        if wu < wc {
            exceptional += 1;
            by_weight[wu] += 1;
            if wu == m {
                middle_exceptional += 1;
            }
        }
    }
    let scale = (theta.sin() / 2.0).powi(ell as i32);
    let middle_total = biguint_to_f64(&binomial(ell as u64, m as u64)) as u64;
    let closed = biguint_to_f64(&binomial((ell - 1) as u64, m as u64));
    Ok(PartitionReport {
        length: ell,
        coefficient: (re, im),
        sum: C64::new(re as f64 * scale, im as f64 * scale),
        closed_form: C64::new(0.0, -closed * scale),
        contributing,
        exceptional,
        misrouted,
        exceptional_by_weight: by_weight,
        middle_exceptional,
        middle_total,
    })
}
