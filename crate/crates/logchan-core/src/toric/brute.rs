//! Exact logical channel of the `L = 3` toric code under single-axis noise.
//!
//! Every one of the `2^18` same-axis strings is assigned to its syndrome and
//! to the logical class left after the standard correction. Within a
//! syndrome the amplitudes of one class add coherently, and the logical chi
//! matrix is `chi_ab = sum_s A_s(a) conj(A_s(b))`.

use alloc::vec;
use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::{Axis, TorusLattice};
use super::table::{edge_maps, standard_error_table, StringCensus, SyndromeTable, TABLE_L};
use crate::channel::{i_pow, ChiMatrix};
use crate::error::{bail, Result};
use crate::numeric::linalg::CMat;
use crate::numeric::KahanC64;
use crate::C64;

const N: usize = 2 * TABLE_L * TABLE_L;
const SYNDROMES: usize = 1 << (TABLE_L * TABLE_L);

/// Logical basis index (two logical qubits) of class index `k = 2 c1 + c2`.
pub fn logical_index(axis: Axis, k: usize) -> usize {
    let d = match axis {
        Axis::Z => 3,
        Axis::X => 1,
    };
    let d1 = if k & 2 != 0 { d } else { 0 };
    let d2 = if k & 1 != 0 { d } else { 0 };
    4 * d1 + d2
}

/// `A_s(k)`: summed amplitude of the strings with syndrome `s` whose
/// product with `E_s` lies in class `k`.
#[derive(Debug, Clone)]
pub struct ClassAmplitudes {
    pub axis: Axis,
    /// Indexed by defect mask; unreachable masks stay zero.
    pub amps: Vec<[C64; 4]>,
}

impl ClassAmplitudes {
    /// Logical chi matrix (16 x 16) of these amplitudes.
    pub fn chi(&self) -> ChiMatrix {
        let mut acc: Vec<KahanC64> = vec![KahanC64::new(); 16];
        for a in &self.amps {
            for i in 0..4 {
                for j in 0..4 {
                    acc[i * 4 + j].add(a[i] * a[j].conj());
                }
            }
        }
        let mut m = CMat::zeros(16, 16);
        for i in 0..4 {
            for j in 0..4 {
                m[(logical_index(self.axis, i), logical_index(self.axis, j))] = acc[i * 4 + j].value();
            }
        }
        ChiMatrix::new(2, m).expect("16 x 16")
    }
}

/// Class index of each syndrome's standard error.
fn correction_classes(table: &SyndromeTable, axis: Axis) -> Vec<Option<u8>> {
    let maps = edge_maps(table.lattice_ref(), axis);
    (0..SYNDROMES as u32)
        .map(|s| {
            table
                .entry_for(axis, s)
                .map(|e| (0..N).filter(|&b| e.correction >> b & 1 == 1).fold(0u8, |k, b| k ^ maps.class[b]))
        })
        .collect()
}

/// Amplitudes when a string's amplitude depends only on its weight.
pub fn class_amplitudes_by_weight(
    census: &StringCensus,
    table: &SyndromeTable,
    by_weight: &[C64],
) -> Result<ClassAmplitudes> {
    if by_weight.len() != N + 1 {
        return Err(crate::Error::Dimension(N + 1, by_weight.len()));
    }
    let axis = census.axis();
    let ke = correction_classes(table, axis);
    let mut amps = vec![[C64::new(0.0, 0.0); 4]; SYNDROMES];
    for s in 0..SYNDROMES {
        let Some(kes) = ke[s] else { continue };
        for k in 0..4 {
            let mut acc = KahanC64::new();
            for (w, &c) in census.profile(s as u32, k).iter().enumerate() {
                if c != 0 {
                    acc.add(by_weight[w] * c as f64);
                }
            }
            amps[s][k ^ kes as usize] = acc.value();
        }
    }
    Ok(ClassAmplitudes { axis, amps })
}

/// `c^(n-w) (-i s)^w` for `w = 0..=n`, with `c, s = cos, sin(theta / 2)`.
pub fn rotation_weight_amplitudes(n: usize, theta: f64) -> Vec<C64> {
    let (s, c) = (theta / 2.0).sin_cos();
    (0..=n).map(|w| i_pow((3 * w % 4) as u8) * (c.powi((n - w) as i32) * s.powi(w as i32))).collect()
}

fn check_l(l: usize) -> Result<()> {
    if l != TABLE_L {
        bail!(OutOfRange, "brute force is only available for L = {TABLE_L}, got {l}");
    }
    Ok(())
}

/// Exact logical chi for the same rotation `exp(-i theta P / 2)` on every
/// qubit, `P` the given axis.
pub fn brute_force_logical_chi(l: usize, theta: f64, axis: Axis) -> Result<ChiMatrix> {
    Ok(brute_force_amplitudes(l, theta, axis)?.chi())
}

pub fn brute_force_amplitudes(l: usize, theta: f64, axis: Axis) -> Result<ClassAmplitudes> {
    check_l(l)?;
    if !theta.is_finite() {
        bail!(InvalidArgument, "rotation angle must be finite");
    }
    let table = standard_error_table(l)?;
    let census = StringCensus::build(axis)?;
    class_amplitudes_by_weight(&census, &table, &rotation_weight_amplitudes(N, theta))
}

/// Exact logical chi for per-qubit rotation angles about one axis.
///
/// The 18 edges are split in two halves of 9; each half's 512 partial
/// strings are tabulated once and the full sum runs over all pairs.
pub fn brute_force_logical_chi_angles(angles: &[f64], axis: Axis, workers: usize) -> Result<ChiMatrix> {
    Ok(brute_force_amplitudes_angles(angles, axis, workers)?.chi())
}

pub fn brute_force_amplitudes_angles(angles: &[f64], axis: Axis, workers: usize) -> Result<ClassAmplitudes> {
    if angles.len() != N {
        return Err(crate::Error::Dimension(N, angles.len()));
    }
    if angles.iter().any(|t| !t.is_finite()) {
        bail!(InvalidArgument, "rotation angles must be finite");
    }
    let lattice = TorusLattice::new(TABLE_L)?;
    let table = standard_error_table(TABLE_L)?;
    let maps = edge_maps(&lattice, axis);
    const HALF: usize = N / 2;
    let half_tables = |offset: usize| -> (Vec<C64>, Vec<u32>, Vec<u8>) {
        let mut amp = vec![C64::new(1.0, 0.0); 1 << HALF];
        let mut syn = vec![0u32; 1 << HALF];
        let mut cls = vec![0u8; 1 << HALF];
        for m in 0..1usize << HALF {
            for b in 0..HALF {
                let (s, c) = (angles[offset + b] / 2.0).sin_cos();
                if m >> b & 1 == 1 {
                    amp[m] *= C64::new(0.0, -s);
                    syn[m] ^= maps.syndrome[offset + b];
                    cls[m] ^= maps.class[offset + b];
                } else {
                    amp[m] *= c;
                }
            }
        }
        (amp, syn, cls)
    };
    let (lo_amp, lo_syn, lo_cls) = half_tables(0);
    let (hi_amp, hi_syn, hi_cls) = half_tables(HALF);
    const CHUNKS: usize = 16;
    let per = (1usize << HALF) / CHUNKS;
    let parts = crate::par::map_chunks(CHUNKS, workers, |chunk| {
        let mut acc = vec![[KahanC64::new(); 4]; SYNDROMES];
        for hi in chunk * per..(chunk + 1) * per {
            for lo in 0..1usize << HALF {
                let s = (lo_syn[lo] ^ hi_syn[hi]) as usize;
                let k = (lo_cls[lo] ^ hi_cls[hi]) as usize;
                acc[s][k].add(lo_amp[lo] * hi_amp[hi]);
            }
        }
        acc
    });
    let ke = correction_classes(&table, axis);
    let mut amps = vec![[C64::new(0.0, 0.0); 4]; SYNDROMES];
    for s in 0..SYNDROMES {
        let Some(kes) = ke[s] else { continue };
        for k in 0..4 {
            let mut total = KahanC64::new();
            for p in &parts {
                total.merge(&p[s][k]);
            }
            amps[s][k ^ kes as usize] = total.value();
        }
    }
    Ok(ClassAmplitudes { axis, amps })
}
