//! Weight-truncated logical channel for general single-qubit rotations.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::code::default_decoder;
use super::lattice::{Axis, TorusLattice};
use super::table::ToricDecoder;
use crate::channel::{i_pow, ChiMatrix};
use crate::error::{bail, Result};
use crate::numeric::exact::{biguint_to_f64, binomial};
use crate::numeric::linalg::CMat;
use crate::numeric::KahanC64;
use crate::pauli::basis_digit;
use crate::C64;

/// Largest enumeration size `C(n, W) * letters^W`.
pub const TRUNCATION_BUDGET: f64 = 1e8;

/// Single-qubit rotations `exp(-i theta_q (n_q . sigma) / 2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationNoise {
    pub angles: Vec<f64>,
    /// Unit axes `(n_x, n_y, n_z)`.
    pub axes: Vec<[f64; 3]>,
}

impl RotationNoise {
    pub fn uniform(n: usize, theta: f64, axis: [f64; 3]) -> Self {
        Self { angles: vec![theta; n], axes: vec![axis; n] }
    }

    pub fn single_axis(n: usize, theta: f64, axis: Axis) -> Self {
        let a = match axis {
            Axis::X => [1.0, 0.0, 0.0],
            Axis::Z => [0.0, 0.0, 1.0],
        };
        Self::uniform(n, theta, a)
    }

    fn validate(&self, n: usize) -> Result<()> {
        if self.angles.len() != n || self.axes.len() != n {
            return Err(crate::Error::Dimension(n, self.angles.len().min(self.axes.len())));
        }
        for (t, a) in self.angles.iter().zip(&self.axes) {
            let norm = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
            if !t.is_finite() || (norm - 1.0).abs() > 1e-9 {
                bail!(InvalidArgument, "rotation angles must be finite and axes of unit length");
            }
        }
        Ok(())
    }

    /// Per-qubit `(letter digit, amplitude)` of each non-identity term.
    fn letters(&self, q: usize) -> Vec<(u8, C64)> {
        let (s, _) = (self.angles[q] / 2.0).sin_cos();
        let mut out = Vec::new();
        for (k, digit) in [(0usize, 1u8), (1, 2), (2, 3)] {
            let comp = self.axes[q][k];
            if comp != 0.0 && s != 0.0 {
                out.push((digit, C64::new(0.0, -s * comp)));
            }
        }
        out
    }

    /// Largest per-qubit non-identity amplitude mass `|s| (|n_x|+|n_y|+|n_z|)`.
    fn letter_mass(&self) -> f64 {
        self.angles
            .iter()
            .zip(&self.axes)
            .map(|(t, a)| (t / 2.0).sin().abs() * (a[0].abs() + a[1].abs() + a[2].abs()))
            .fold(0.0, f64::max)
    }
}

/// Pauli `i^ph X^x Z^z` on at most 64 qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Op64 {
    x: u64,
    z: u64,
    ph: u8,
}

impl Op64 {
    fn hermitian(x: u64, z: u64) -> Self {
        Self { x, z, ph: ((x & z).count_ones() % 4) as u8 }
    }

    fn mul(self, o: Self) -> Self {
        let ph = (self.ph as u32 + o.ph as u32 + 2 * (self.z & o.x).count_ones()) % 4;
        Self { x: self.x ^ o.x, z: self.z ^ o.z, ph: ph as u8 }
    }
}

/// Bit-mask decomposition `P = i^eta E_s L_a G` for `L <= 5`.
pub struct DecomposeContext {
    lattice: TorusLattice,
    decoder: Box<dyn ToricDecoder>,
    star_of_edge: Vec<u64>,
    plaq_of_edge: Vec<u64>,
    x_bar: [u64; 2],
    z_bar: [u64; 2],
}

/// Outcome of [`DecomposeContext::decompose`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FastDecomposition {
    pub stars: u64,
    pub plaquettes: u64,
    /// Two-qubit logical basis index.
    pub logical: usize,
    pub eta: u8,
}

fn mask(edges: &[usize]) -> u64 {
    edges.iter().fold(0u64, |m, &e| m | 1 << e)
}

fn ones(m: u64) -> Vec<usize> {
    (0..64).filter(|&b| m >> b & 1 == 1).collect()
}

impl DecomposeContext {
    pub fn new(lattice: TorusLattice) -> Result<Self> {
        let decoder = default_decoder(lattice)?;
        Self::with_decoder(decoder)
    }

    pub fn with_decoder(decoder: Box<dyn ToricDecoder>) -> Result<Self> {
        let lattice = *decoder.lattice();
        if lattice.n_qubits() > 64 {
            bail!(OutOfRange, "bit-mask decomposition needs 2 L^2 <= 64, got L = {}", lattice.l());
        }
        let n = lattice.n_qubits();
        let star_of_edge = (0..n).map(|e| lattice.edge_vertices(e).iter().fold(0u64, |m, &v| m ^ 1 << v)).collect();
        let plaq_of_edge = (0..n).map(|e| lattice.edge_plaquettes(e).iter().fold(0u64, |m, &p| m ^ 1 << p)).collect();
        Ok(Self {
            lattice,
            decoder,
            star_of_edge,
            plaq_of_edge,
            x_bar: [mask(&lattice.x1_support()), mask(&lattice.x2_support())],
            z_bar: [mask(&lattice.z1_support()), mask(&lattice.z2_support())],
        })
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    /// Star and plaquette defect masks of the Hermitian Pauli `(x, z)`.
    pub fn syndrome(&self, x: u64, z: u64) -> (u64, u64) {
        let s = ones(z).into_iter().fold(0u64, |m, e| m ^ self.star_of_edge[e]);
        let p = ones(x).into_iter().fold(0u64, |m, e| m ^ self.plaq_of_edge[e]);
        (s, p)
    }

    /// Hermitian standard error `(x, z)` for a defect pair.
    pub fn standard_error(&self, stars: u64, plaquettes: u64) -> Result<(u64, u64)> {
        let ez = self.decoder.decode_z(&ones(stars))?;
        let ex = self.decoder.decode_x(&ones(plaquettes))?;
        Ok((mask(&ex), mask(&ez)))
    }

    fn finish(&self, p: Op64, e: Op64, stars: u64, plaquettes: u64) -> FastDecomposition {
        let r = e.mul(p);
        let mut logical = 0usize;
        let mut lx = 0u64;
        let mut lz = 0u64;
        for j in 0..2 {
            let xb = (r.x & self.z_bar[j]).count_ones() % 2 == 1;
            let zb = (r.z & self.x_bar[j]).count_ones() % 2 == 1;
            logical = logical << 2 | basis_digit(xb, zb) as usize;
            if xb {
                lx ^= self.x_bar[j];
            }
            if zb {
                lz ^= self.z_bar[j];
            }
        }
        let q = Op64::hermitian(lx, lz).mul(r);
        // the stabilizer part is Z^gz X^gx = i^{2|gx & gz|} X^gx Z^gz
        let eta = ((q.ph as u32 + 4 - 2 * ((q.x & q.z).count_ones() % 2)) % 4) as u8;
        FastDecomposition { stars, plaquettes, logical, eta }
    }

    /// Decompose the Hermitian Pauli with supports `(x, z)`.
    pub fn decompose(&self, x: u64, z: u64) -> Result<FastDecomposition> {
        let (stars, plaquettes) = self.syndrome(x, z);
        let (ex, ez) = self.standard_error(stars, plaquettes)?;
        Ok(self.finish(Op64::hermitian(x, z), Op64::hermitian(ex, ez), stars, plaquettes))
    }
}

/// Truncated logical chi with its rigorous error budget.
#[derive(Debug, Clone)]
pub struct TruncatedChi {
    pub chi: ChiMatrix,
    pub weight_cutoff: usize,
    /// Number of Pauli terms summed.
    pub terms: u64,
    /// `sum_{w > W} C(n, w) mu^w` with `mu` the largest per-qubit letter mass.
    pub tail_mass: f64,
    /// Entry-wise bound `T (2 + T)` on `|chi - chi_truncated|`.
    pub entry_bound: f64,
}

/// Enumeration size `sum_{w<=W} C(n,w) k^w`.
fn enumeration_size(n: usize, w_max: usize, letters: usize) -> f64 {
    (0..=w_max.min(n)).map(|w| biguint_to_f64(&binomial(n as u64, w as u64)) * (letters as f64).powi(w as i32)).sum()
}

type Accum = BTreeMap<(u64, u64), [C64; 16]>;

/// Sum every Pauli term of weight `<= W` of `prod_q U_q`, decode it and
/// assemble the logical chi matrix.
pub fn truncated_chi_oracle(l: usize, noise: &RotationNoise, w_max: usize, workers: usize) -> Result<TruncatedChi> {
    let lattice = TorusLattice::new(l)?;
    let n = lattice.n_qubits();
    noise.validate(n)?;
    let ctx = DecomposeContext::new(lattice)?;
    let letters: Vec<Vec<(u8, C64)>> = (0..n).map(|q| noise.letters(q)).collect();
    let cos: Vec<f64> = noise.angles.iter().map(|t| (t / 2.0).cos()).collect();
    let k_max = letters.iter().map(Vec::len).max().unwrap_or(0).max(1);
    let size = enumeration_size(n, w_max, k_max);
    if size > TRUNCATION_BUDGET {
        bail!(Budget, "{size:.3e} terms exceed the truncation budget {TRUNCATION_BUDGET:.0e}");
    }
    let identity_amp: f64 = cos.iter().product();
    // chunk 0 is the identity term, chunk q + 1 starts at qubit q
    let parts = crate::par::map_chunks(n + 1, workers, |chunk| -> Result<(Accum, u64)> {
        let mut acc = Accum::new();
        let mut cache = BTreeMap::new();
        let mut terms = 0u64;
        if chunk == 0 {
            add_term(&ctx, &mut acc, &mut cache, 0, 0, C64::new(identity_amp, 0.0))?;
            return Ok((acc, 1));
        }
        if w_max == 0 {
            return Ok((acc, 0));
        }
        let q = chunk - 1;
        for &(d, a) in &letters[q] {
            let (x, z) = digit_bits(d, q);
            // amplitude of the identity on qubits before q is folded in later
            let amp = a * cos[..q].iter().product::<f64>();
            walk(&ctx, &letters, &cos, q + 1, w_max - 1, x, z, amp, &mut acc, &mut cache, &mut terms)?;
        }
        Ok((acc, terms))
    });
    let mut total: BTreeMap<(u64, u64), [KahanC64; 16]> = BTreeMap::new();
    let mut terms = 0;
    for part in parts {
        let (acc, t) = part?;
        terms += t;
        for (k, v) in acc {
            let slot = total.entry(k).or_insert([KahanC64::new(); 16]);
            for i in 0..16 {
                slot[i].add(v[i]);
            }
        }
    }
    let mut chi_acc = vec![KahanC64::new(); 256];
    for v in total.values() {
        let a: Vec<C64> = v.iter().map(KahanC64::value).collect();
        for i in 0..16 {
            if a[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..16 {
                chi_acc[i * 16 + j].add(a[i] * a[j].conj());
            }
        }
    }
    let mut m = CMat::zeros(16, 16);
    for i in 0..16 {
        for j in 0..16 {
            m[(i, j)] = chi_acc[i * 16 + j].value();
        }
    }
    let mu = noise.letter_mass();
    let tail_mass: f64 =
        (w_max + 1..=n).map(|w| biguint_to_f64(&binomial(n as u64, w as u64)) * mu.powi(w as i32)).sum();
    Ok(TruncatedChi {
        chi: ChiMatrix::new(2, m)?,
        weight_cutoff: w_max,
        terms,
        tail_mass,
        entry_bound: tail_mass * (2.0 + tail_mass),
    })
}

fn digit_bits(d: u8, q: usize) -> (u64, u64) {
    let x = if d == 1 || d == 2 { 1u64 << q } else { 0 };
    let z = if d == 2 || d == 3 { 1u64 << q } else { 0 };
    (x, z)
}

/// Depth-first walk over supports; `amp` already holds the cosines of every
/// skipped qubit before `next`.
#[allow(clippy::too_many_arguments)]
fn walk(
    ctx: &DecomposeContext,
    letters: &[Vec<(u8, C64)>],
    cos: &[f64],
    next: usize,
    budget: usize,
    x: u64,
    z: u64,
    amp: C64,
    acc: &mut Accum,
    cache: &mut BTreeMap<(u64, u64), (u64, u64)>,
    terms: &mut u64,
) -> Result<()> {
    let tail: f64 = cos[next..].iter().product();
    add_term(ctx, acc, cache, x, z, amp * tail)?;
    *terms += 1;
    if budget == 0 {
        return Ok(());
    }
    let mut skipped = 1.0;
    for q in next..letters.len() {
        for &(d, a) in &letters[q] {
            let (bx, bz) = digit_bits(d, q);
            walk(ctx, letters, cos, q + 1, budget - 1, x | bx, z | bz, amp * skipped * a, acc, cache, terms)?;
        }
        skipped *= cos[q];
    }
    Ok(())
}

fn add_term(
    ctx: &DecomposeContext,
    acc: &mut Accum,
    cache: &mut BTreeMap<(u64, u64), (u64, u64)>,
    x: u64,
    z: u64,
    amp: C64,
) -> Result<()> {
    let (stars, plaquettes) = ctx.syndrome(x, z);
    let e = match cache.get(&(stars, plaquettes)) {
        Some(&e) => e,
        None => {
            let e = ctx.standard_error(stars, plaquettes)?;
            cache.insert((stars, plaquettes), e);
            e
        }
    };
    let d = ctx.finish(Op64::hermitian(x, z), Op64::hermitian(e.0, e.1), stars, plaquettes);
    let slot = acc.entry((stars, plaquettes)).or_insert([C64::new(0.0, 0.0); 16]);
    slot[d.logical] += amp * i_pow(d.eta);
    Ok(())
}
