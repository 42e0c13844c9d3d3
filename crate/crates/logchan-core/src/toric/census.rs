//! Censuses and probes on the exact `L = 3` channel.

use alloc::vec;
use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::brute::{brute_force_amplitudes, brute_force_amplitudes_angles, class_amplitudes_by_weight};
use super::count::count_operators;
use super::lattice::{Axis, TorusLattice};
use super::partition::partition_sum;
use super::strings::{logical_strings_of_length, string_from_moves, LogicalString, Move};
use super::table::{standard_error_table, MatchingDecoder, StringCensus, SyndromeTable, ToricDecoder, TABLE_L};
use crate::channel::ChiMatrix;
use crate::correlated::CorrelatedModel;
use crate::error::{bail, Result};
use crate::numeric::exact::{biguint_to_f64, binomial};
use crate::numeric::{KahanC64, KahanF64};
use crate::C64;

const N: usize = 2 * TABLE_L * TABLE_L;
const Z1: usize = 12;
const Z2: usize = 3;
const Y1: usize = 8;
const Z1Z2: usize = 15;

/// One chi entry with its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedEntry {
    pub row: usize,
    pub col: usize,
    pub value: C64,
    pub magnitude: f64,
}

/// Ranked entries of a two-qubit logical chi matrix and the dominance checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCensus {
    /// All 256 entries, largest magnitude first (ties by position).
    pub ranked: Vec<RankedEntry>,
    pub z1_i: f64,
    pub y1_i: f64,
    pub z1z2_i: f64,
    /// Largest `|chi_ab|` with `a != b`, both nontrivial.
    pub max_doubly_nontrivial: f64,
    /// `|chi_{Z1Z2,I}| / |chi_{Z1,I} chi_{I,Z2}|`.
    pub factorization_ratio: f64,
    /// Largest entry whose row or column carries an X or Y factor.
    pub x_sector_max: f64,
    /// `|chi_{I,I} - (1 - sum of other diagonal entries)|`.
    pub trace_residual: f64,
    pub dominance_holds: bool,
    /// The factorization ratio lies within `[0.1, 10]`.
    pub factorization_holds: bool,
}

fn has_x_factor(a: usize) -> bool {
    let (d1, d2) = (a / 4, a % 4);
    matches!(d1, 1 | 2) || matches!(d2, 1 | 2)
}

pub fn logical_component_census(chi: &ChiMatrix) -> Result<ComponentCensus> {
    if chi.n() != 2 {
        return Err(crate::Error::Dimension(16, chi.dim2()));
    }
    let mut ranked = Vec::with_capacity(256);
    for i in 0..16 {
        for j in 0..16 {
            let v = chi.get(i, j);
            ranked.push(RankedEntry { row: i, col: j, value: v, magnitude: v.norm() });
        }
    }
    ranked.sort_by(|a, b| b.magnitude.total_cmp(&a.magnitude).then((a.row, a.col).cmp(&(b.row, b.col))));
    let z1_i = chi.get(Z1, 0).norm();
    let y1_i = chi.get(Y1, 0).norm();
    let z1z2_i = chi.get(Z1Z2, 0).norm();
    let mut max_doubly_nontrivial: f64 = 0.0;
    let mut x_sector_max: f64 = 0.0;
    for e in &ranked {
        if e.row != e.col && e.row != 0 && e.col != 0 {
            max_doubly_nontrivial = max_doubly_nontrivial.max(e.magnitude);
        }
        if has_x_factor(e.row) || has_x_factor(e.col) {
            x_sector_max = x_sector_max.max(e.magnitude);
        }
    }
    let product = (chi.get(Z1, 0) * chi.get(0, Z2)).norm();
    let factorization_ratio = z1z2_i / product;
    let others: f64 = (1..16).map(|i| chi.get(i, i).re).sum();
    Ok(ComponentCensus {
        z1_i,
        y1_i,
        z1z2_i,
        max_doubly_nontrivial,
        factorization_ratio,
        x_sector_max,
        trace_residual: (chi.get(0, 0).re - (1.0 - others)).abs(),
        dominance_holds: y1_i < z1_i && z1z2_i < z1_i && max_doubly_nontrivial < z1_i,
        factorization_holds: (0.1..=10.0).contains(&factorization_ratio),
        ranked,
    })
}
/// Sum of multiplicity ratios over the uncorrectable halves of one string.
/// Partition multiplicity sum of one string, weighted by standard-error counts.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityRow {
    pub length: usize,
    /// Subsets `O_U` counted (uncorrectable, weight `(ell+1)/2`,
    /// complement as heavy as the standard error).
    pub terms: u64,
    /// `sum |{O_U'}| / |{O_C'}|` over those subsets.
    pub ratio_sum: f64,
    /// Every counted subset has ratio exactly 1.
    pub all_unit: bool,
}

/// Weight-class and multiplicity decomposition of `chi_{Z1,Z1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct IncoherentCensus {
    pub theta: f64,
    pub chi_z1z1: f64,
    /// `weights[w][w']`: real part of the `(w, w')` terms, symmetrised.
    pub weights: Vec<Vec<f64>>,
    pub equal_weight: f64,
    pub mismatched: f64,
    /// `|sum over weight classes - chi_{Z1,Z1}|`.
    pub reconstruction_residual: f64,
    pub strings: Vec<MultiplicityRow>,
    /// `sum ratio >= terms` for every string.
    pub multiplicity_holds: bool,
}

fn class_index(lat: &TorusLattice, edges: &[usize]) -> usize {
    let (a, b) = lat.z_class(edges);
    (a as usize) << 1 | b as usize
}

fn subset(s: &LogicalString, mask: u32) -> Vec<usize> {
    (0..s.len()).filter(|&j| mask >> j & 1 == 1).map(|j| s.edges[j]).collect()
}

fn defect_mask(lat: &TorusLattice, edges: &[usize]) -> u32 {
    lat.boundary(edges).into_iter().fold(0u32, |m, v| m | 1 << v)
}

/// Multiplicity ratios of every qualifying `O_U` on one string at `L = 3`.
fn multiplicity_row(
    lat: &TorusLattice,
    table: &SyndromeTable,
    census: &StringCensus,
    s: &LogicalString,
) -> MultiplicityRow {
    let ell = s.len();
    let full = (1u32 << ell) - 1;
    let w = ell.div_ceil(2);
    let mut terms = 0;
    let mut sum = KahanF64::new();
    let mut all_unit = true;
    for a in 0..=full {
        if a.count_ones() as usize != w {
            continue;
        }
        let u = subset(s, a);
        let c = subset(s, full ^ a);
        let syn = defect_mask(lat, &u);
        let Some(entry) = table.entry(syn) else { continue };
        let e: Vec<usize> = (0..N).filter(|&b| entry.correction >> b & 1 == 1).collect();
        if class_index(lat, &u) ^ class_index(lat, &e) != 2 || c.len() != entry.weight as usize {
            continue;
        }
        let nu = census.count(syn, class_index(lat, &u), u.len());
        let nc = census.count(syn, class_index(lat, &c), c.len());
        terms += 1;
        sum.add(nu as f64 / nc as f64);
        all_unit &= nu == nc;
    }
    MultiplicityRow { length: ell, terms, ratio_sum: sum.value(), all_unit }
}

/// Decompose the exact `chi_{Z1,Z1}` at `L = 3` by the weights of the two
/// sides, and run the multiplicity check on every string up to `ell_max`.
pub fn incoherent_census(theta: f64, ell_max: usize) -> Result<IncoherentCensus> {
    if !theta.is_finite() {
        bail!(InvalidArgument, "rotation angle must be finite");
    }
    let lat = TorusLattice::new(TABLE_L)?;
    let table = standard_error_table(TABLE_L)?;
    let census = StringCensus::build(Axis::Z)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let mut weights = vec![vec![0.0; N + 1]; N + 1];
    // chi_{Z1,Z1} = sum_s |A_s(Z1)|^2 with A_s(Z1) = sum_w n_s(w) amp(w)
    let amp = |w: usize| crate::channel::i_pow((3 * w % 4) as u8) * (c.powi((N - w) as i32) * s.powi(w as i32));
    let mut acc = vec![KahanC64::new(); (N + 1) * (N + 1)];
    for (syn, entry) in table.iter() {
        let e: Vec<usize> = (0..N).filter(|&b| entry.correction >> b & 1 == 1).collect();
        let k = 2 ^ class_index(&lat, &e);
        let prof = census.profile(syn, k);
        for w in 0..=N {
            if prof[w] == 0 {
                continue;
            }
            for v in 0..=N {
                if prof[v] != 0 {
                    acc[w * (N + 1) + v].add(amp(w) * amp(v).conj() * (prof[w] as f64 * prof[v] as f64));
                }
            }
        }
    }
    let mut equal = KahanF64::new();
    let mut mismatched = KahanF64::new();
    for w in 0..=N {
        for v in 0..=N {
            let val = acc[w * (N + 1) + v].value().re;
            weights[w][v] = val;
            if w == v {
                equal.add(val);
            } else {
                mismatched.add(val);
            }
        }
    }
    let chi = brute_force_amplitudes(TABLE_L, theta, Axis::Z)?.chi();
    let chi_z1z1 = chi.get(Z1, Z1).re;
    let total = equal.value() + mismatched.value();
    let mut strings = Vec::new();
    for ell in (TABLE_L..=ell_max).step_by(2) {
        for st in logical_strings_of_length(&lat, ell)? {
            strings.push(multiplicity_row(&lat, &table, &census, &st));
        }
    }
    Ok(IncoherentCensus {
        theta,
        chi_z1z1,
        weights,
        equal_weight: equal.value(),
        mismatched: mismatched.value(),
        reconstruction_residual: (total - chi_z1z1).abs(),
        multiplicity_holds: strings.iter().all(|r| r.ratio_sum >= r.terms as f64),
        strings,
    })
}

/// Multiplicities of one partition `(O_U, O_C)` at general `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionMultiplicity {
    pub u_weight: usize,
    pub c_weight: usize,
    pub standard_weight: usize,
    /// `|{O_U'}|`: same syndrome, weight and class as `O_U`.
    pub n_u: u64,
    /// `|{O_C'}|`: same syndrome, weight and class as `O_C`.
    pub n_c: u64,
}

impl PartitionMultiplicity {
    pub fn ratio(&self) -> f64 {
        self.n_u as f64 / self.n_c as f64
    }
}

/// Multiplicities of the partition of `s` whose uncorrectable side is the
/// subset `u_mask` (bit `j` selects the `j`-th edge in walk order).
pub fn partition_multiplicity(
    s: &LogicalString,
    u_mask: u32,
    decoder: &dyn ToricDecoder,
) -> Result<PartitionMultiplicity> {
    let lat = *decoder.lattice();
    let ell = s.len();
    if ell >= 32 || u_mask >> ell != 0 {
        bail!(OutOfRange, "subset mask does not fit the string");
    }
    let full = (1u32 << ell) - 1;
    let u = subset(s, u_mask);
    let c = subset(s, full ^ u_mask);
    let defects = lat.boundary(&u);
    let e = decoder.decode_z(&defects)?;
    if class_index(&lat, &u) ^ class_index(&lat, &e) == 0 {
        bail!(InvalidArgument, "the selected side is correctable");
    }
    Ok(PartitionMultiplicity {
        u_weight: u.len(),
        c_weight: c.len(),
        standard_weight: e.len(),
        n_u: count_operators(&lat, &defects, u.len(), class_index(&lat, &u))?,
        n_c: count_operators(&lat, &defects, c.len(), class_index(&lat, &c))?,
    })
}

/// A partition and its partner at `L = 9`, `ell = 13`: the partner swaps
/// the two sides except for the leftmost vertical edge of the first
/// uncorrectable side, which stays uncorrectable.
#[derive(Debug, Clone, PartialEq)]
pub struct PartnerPair {
    pub string: LogicalString,
    pub first: PartitionMultiplicity,
    pub partner: PartitionMultiplicity,
    /// `n_u / n_c` summed over the pair.
    pub ratio_sum: f64,
}

/// The length-13 string used for the partner construction: five flat
/// columns, then steps up, up, down, down.
pub fn partner_string(lattice: &TorusLattice) -> Result<LogicalString> {
    use Move::{Down as D, Right as R, Up as U};
    string_from_moves(lattice, 0, &[R, R, R, R, R, U, R, R, U, R, D, R, D])
}

pub fn multiplicity_partner_pair() -> Result<PartnerPair> {
    let lattice = TorusLattice::new(9)?;
    let decoder = MatchingDecoder::new(lattice);
    let string = partner_string(&lattice)?;
    let ell = string.len();
    // bit j selects the j-th edge in walk order
    let first_mask: u32 = 0b1001_1010_1110;
    let vertical = (0..ell)
        .find(|&j| first_mask >> j & 1 == 1 && matches!(string.moves[j], Move::Up | Move::Down))
        .expect("the first side holds a vertical edge");
    let partner_mask = (((1u32 << ell) - 1) ^ first_mask) | 1 << vertical;
    let first = partition_multiplicity(&string, first_mask, &decoder)?;
    let partner = partition_multiplicity(&string, partner_mask, &decoder)?;
    let ratio_sum = first.ratio() + partner.ratio();
    Ok(PartnerPair { string, first, partner, ratio_sum })
}

/// Connected string sums against the exact coherent component.
#[derive(Debug, Clone, PartialEq)]
pub struct DisconnectedProbe {
    pub theta: f64,
    pub brute: C64,
    /// `(cutoff length, connected sum up to it, brute / connected)`.
    pub by_cutoff: Vec<(usize, C64, f64)>,
}

/// Ratio of the exact `chi_{Z1,I}` to the sum of exact partition sums over
/// connected strings, for each length cutoff. At `theta = 0` both vanish
/// and the factor is its limit, 1.
pub fn disconnected_factor_probe(theta: f64, ell_max: usize) -> Result<DisconnectedProbe> {
    if !theta.is_finite() {
        bail!(InvalidArgument, "rotation angle must be finite");
    }
    let lat = TorusLattice::new(TABLE_L)?;
    let table = standard_error_table(TABLE_L)?;
    let brute = brute_force_amplitudes(TABLE_L, theta, Axis::Z)?.chi().get(Z1, 0);
    let mut by_cutoff = Vec::new();
    let mut connected = C64::new(0.0, 0.0);
    for ell in (TABLE_L..=ell_max).step_by(2) {
        for s in logical_strings_of_length(&lat, ell)? {
            connected += partition_sum(&s, theta, &table)?.sum;
        }
        let factor = if theta.sin() == 0.0 { 1.0 } else { brute.im / connected.im };
        by_cutoff.push((ell, connected, factor));
    }
    Ok(DisconnectedProbe { theta, brute, by_cutoff })
}

/// Z-diagonal correlated noise on the `L = 3` code.
#[derive(Debug, Clone)]
pub struct CorrelatedToricProbe {
    pub h1: f64,
    pub h2: f64,
    pub chi: ChiMatrix,
    /// `|chi_{Z1,I}| / chi_{Z1,Z1}`.
    pub ratio: f64,
    /// `(L + 1) / (2 L tan h1)`, the repetition-code form for one string.
    pub ratio_bound: f64,
    /// Slack `3 n |h2|` with `n = 2 L^2` coupled qubits.
    pub tolerance: f64,
    pub holds: bool,
    /// Ratio relative to the uncorrelated channel with the same `h1`.
    pub enhancement: f64,
    /// The same enhancement for the length-`L` repetition code.
    pub repetition_enhancement: f64,
    /// `(1 - enhancement) / (1 - repetition_enhancement)`; 1 when both vanish.
    pub structure_ratio: f64,
    /// The structure ratio lies within `[1/2, 2]`.
    pub structure_holds: bool,
}

/// Amplitude of a weight-`w` Z string in `exp(-i H)` with
/// `H = h1 sum Z + h2 sum_{i<j} Z Z` on `n` qubits.
pub fn correlated_weight_amplitudes(n: usize, h1: f64, h2: f64) -> Vec<C64> {
    let nf = n as f64;
    let phase: Vec<C64> = (0..=n)
        .map(|k| {
            let sz = nf - 2.0 * k as f64;
            let e = h1 * sz + h2 * (sz * sz - nf) / 2.0;
            C64::new(e.cos(), -e.sin())
        })
        .collect();
    let b = |a: usize, k: usize| if k > a { 0.0 } else { biguint_to_f64(&binomial(a as u64, k as u64)) };
    (0..=n)
        .map(|w| {
            let mut acc = KahanC64::new();
            for (k, p) in phase.iter().enumerate() {
                // Krawtchouk value K_w(k)
                let mut kw = 0.0;
                for j in 0..=w.min(k) {
                    let t = b(w, j) * b(n - w, k - j);
                    kw += if j % 2 == 0 { t } else { -t };
                }
                acc.add(*p * kw);
            }
            acc.value() / 2f64.powi(n as i32)
        })
        .collect()
}

fn z1_ratio(chi: &ChiMatrix) -> f64 {
    chi.get(Z1, 0).norm() / chi.get(Z1, Z1).re
}

/// Largest `n |h2|` and `|h1|` accepted by the correlated probe.
pub const CORRELATED_LIMIT: f64 = 0.1;

pub fn correlated_toric_probe(h1: f64, h2: f64) -> Result<CorrelatedToricProbe> {
    if !(h1.is_finite() && h2.is_finite()) || h1 == 0.0 {
        bail!(InvalidArgument, "couplings must be finite with h1 != 0");
    }
    if h1.abs() > CORRELATED_LIMIT || N as f64 * h2.abs() > CORRELATED_LIMIT {
        bail!(OutOfRange, "couplings too large: need |h1| <= {CORRELATED_LIMIT} and n |h2| <= {CORRELATED_LIMIT}");
    }
    let table = standard_error_table(TABLE_L)?;
    let census = StringCensus::build(Axis::Z)?;
    let chi = class_amplitudes_by_weight(&census, &table, &correlated_weight_amplitudes(N, h1, h2))?.chi();
    let plain = class_amplitudes_by_weight(&census, &table, &correlated_weight_amplitudes(N, h1, 0.0))?.chi();
    let ratio = z1_ratio(&chi);
    let l = TABLE_L as f64;
    let ratio_bound = (l + 1.0) / (2.0 * l * h1.tan().abs());
    let tolerance = 3.0 * N as f64 * h2.abs();
    let rep = |h2: f64| -> Result<f64> {
        let chi = CorrelatedModel::new(TABLE_L, h1, h2)?.logical_chi()?;
        Ok(chi.get(1, 0).norm() / chi.get(1, 1).re)
    };
    let enhancement = ratio / z1_ratio(&plain);
    let repetition_enhancement = rep(h2)? / rep(0.0)?;
    let (dt, dr) = (1.0 - enhancement, 1.0 - repetition_enhancement);
    let structure_ratio = if dt == 0.0 && dr == 0.0 { 1.0 } else { dt / dr };
    Ok(CorrelatedToricProbe {
        h1,
        h2,
        ratio,
        ratio_bound,
        tolerance,
        holds: ratio <= ratio_bound * (1.0 + tolerance),
        enhancement,
        repetition_enhancement,
        structure_ratio,
        structure_holds: (0.5..=2.0).contains(&structure_ratio),
        chi,
    })
}

/// Coherent and incoherent strengths of a logical chi matrix.
pub fn strengths(chi: &ChiMatrix) -> (f64, f64) {
    let mut off = KahanF64::new();
    let mut diag = KahanF64::new();
    for i in 0..chi.dim2() {
        for j in 0..chi.dim2() {
            if i != j {
                off.add(chi.get(i, j).norm_sqr());
            }
        }
        if i != 0 {
            diag.add(chi.get(i, i).re);
        }
    }
    (off.value(), diag.value())
}

/// One configuration of the general-angle spot check.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleConfig {
    pub label: &'static str,
    pub angles: Vec<f64>,
    pub coherent: f64,
    pub incoherent: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleSpotCheck {
    pub uniform: AngleConfig,
    pub perturbed: Vec<AngleConfig>,
    /// Every perturbed configuration has incoherent strength at least the
    /// uniform one (relative slack `1e-9`).
    pub holds: bool,
}

/// Raise one angle by `delta` and lower a partner angle until the coherent
/// strength matches the uniform configuration; compare incoherent strengths.
pub fn general_angle_spot_check(theta: f64, delta: f64, workers: usize) -> Result<AngleSpotCheck> {
    if !(theta.is_finite() && delta.is_finite()) || theta <= 0.0 || delta <= 0.0 {
        bail!(InvalidArgument, "theta and delta must be positive");
    }
    let lat = TorusLattice::new(TABLE_L)?;
    let measure = |angles: &[f64]| -> Result<(f64, f64)> {
        Ok(strengths(&brute_force_amplitudes_angles(angles, Axis::Z, workers)?.chi()))
    };
    let base = vec![theta; N];
    let (c0, i0) = measure(&base)?;
    let uniform = AngleConfig { label: "uniform", angles: base.clone(), coherent: c0, incoherent: i0 };
    let pairs = [("adjacent", lat.h(0, 0), lat.h(0, 1)), ("distant", lat.h(0, 0), lat.v(1, 2))];
    let mut perturbed = Vec::new();
    for (label, i, j) in pairs {
        let mut angles = base.clone();
        angles[i] = theta + delta;
        let coherent_at = |tj: f64| -> Result<f64> {
            let mut a = angles.clone();
            a[j] = tj;
            Ok(measure(&a)?.0)
        };
        let (mut lo, mut hi) = (0.0, theta);
        if coherent_at(lo)? > c0 || coherent_at(hi)? < c0 {
            bail!(OutOfRange, "cannot rebalance the coherent strength for the {label} pair");
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if coherent_at(mid)? < c0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        angles[j] = 0.5 * (lo + hi);
        let (c, inc) = measure(&angles)?;
        perturbed.push(AngleConfig { label, angles, coherent: c, incoherent: inc });
    }
    let holds = perturbed.iter().all(|p| p.incoherent >= i0 * (1.0 - 1e-9));
    Ok(AngleSpotCheck { uniform, perturbed, holds })
}
