//! Bit-flip repetition code under X-axis rotations.
//!
//! The physical noise is `U = prod_a exp(-i theta_a X_a / 2)`. Every X-string
//! `S` appears in `U` with amplitude `psi(S) = prod_{a in S} (-i s_a)
//! prod_{a not in S} c_a` where `c_a, s_a = cos, sin(theta_a / 2)`. The
//! strings `S` and its complement share a syndrome; majority decoding keeps
//! the lighter one as the standard error, so the heavier one carries the
//! logical X.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::ChiMatrix;
use crate::error::{bail, Result};
use crate::numeric::exact::{biguint_to_f64, binomial, sign};
use crate::numeric::linalg::CMat;
use crate::numeric::{KahanC64, KahanF64};
use crate::pauli::{Bits, PauliOp, StabilizerCode, StandardErrors};
use crate::C64;

/// Largest code length accepted by the enumeration.
pub const MAX_ENUMERATION_N: usize = 25;

fn check_odd(n: usize) -> Result<usize> {
    if n.is_multiple_of(2) || n == 0 {
        bail!(InvalidArgument, "repetition code length must be odd, got {n}");
    }
    Ok((n - 1) / 2)
}

/// `(eps, delta)` of the logical channel for uniform angle `theta`:
/// `eps = 2 sum_{w<=m} C(n,w) c^{2w} s^{2(n-w)}`, `delta = 2 C(n-1,m) c^n s^n`.
pub fn logical_eps_delta_closed(n: usize, theta: f64) -> Result<(f64, f64)> {
    let m = check_odd(n)?;
    if n < 3 {
        bail!(InvalidArgument, "repetition code needs n >= 3, got {n}");
    }
    let (s, c) = (theta / 2.0).sin_cos();
    let (c2, s2) = (c * c, s * s);
    let mut acc = KahanF64::new();
    for w in 0..=m {
        let b = biguint_to_f64(&binomial(n as u64, w as u64));
        acc.add(b * c2.powi(w as i32) * s2.powi((n - w) as i32));
    }
    let eps = 2.0 * acc.value();
    let delta = 2.0 * biguint_to_f64(&binomial((n - 1) as u64, m as u64)) * (c * s).powi(n as i32);
    Ok((eps, delta))
}

/// Same quantities for per-qubit angles, by a generating-function sum.
pub fn inhomogeneous_eps_delta(angles: &[f64]) -> Result<(f64, f64)> {
    let n = angles.len();
    let m = check_odd(n)?;
    // coefficient of t^w in prod (s_a^2 + c_a^2 t) sums |psi(E^c)|^2 over |E| = w
    let mut poly = vec![0.0f64; n + 1];
    poly[0] = 1.0;
    let mut prod_cs = 1.0;
    for &theta in angles {
        let (s, c) = (theta / 2.0).sin_cos();
        prod_cs *= c * s;
        for w in (0..=n).rev() {
            let lower = if w > 0 { poly[w - 1] * c * c } else { 0.0 };
            poly[w] = poly[w] * s * s + lower;
        }
    }
    let eps = 2.0 * poly[..=m].iter().copied().collect::<KahanF64>().value();
    let delta = 2.0 * biguint_to_f64(&binomial((n - 1) as u64, m as u64)) * prod_cs;
    Ok((eps, delta))
}

/// Standard errors of the repetition code: the lighter X-string with the
/// requested syndrome.
#[derive(Debug, Clone, Copy)]
pub struct MajorityTable {
    n: usize,
}

impl StandardErrors for MajorityTable {
    fn standard_error(&self, s: &Bits) -> Result<PauliOp> {
        let n = self.n;
        if s.len() != n - 1 {
            bail!(IncompleteTable, "syndrome length {} for n = {n}", s.len());
        }
        let mut x = vec![false; n];
        for i in 1..n {
            x[i] = x[i - 1] ^ s.get(i - 1);
        }
        let w = x.iter().filter(|&&b| b).count();
        let flip = 2 * w > n;
        Ok(PauliOp::x_string(n, (0..n).filter(|&i| x[i] ^ flip)))
    }
}

/// The length-`n` bit-flip code: generators `Z_i Z_{i+1}`, logical
/// `X^{(x)n}` and `Z_0`.
pub fn build_code(n: usize) -> Result<StabilizerCode> {
    check_odd(n)?;
    let gens = (0..n - 1).map(|i| PauliOp::z_string(n, [i, i + 1])).collect();
    StabilizerCode::new(
        gens,
        vec![PauliOp::x_string(n, 0..n)],
        vec![PauliOp::z_string(n, [0])],
        Box::new(MajorityTable { n }),
    )
}

/// Accumulates the logical chi of a single logical qubit in the X sector.
#[derive(Debug, Clone, Default)]
struct XSectorChi {
    ii: KahanF64,
    xx: KahanF64,
    xi: KahanC64,
}

impl XSectorChi {
    #[inline]
    fn add_pair(&mut self, light: C64, heavy: C64) {
        self.ii.add(light.norm_sqr());
        self.xx.add(heavy.norm_sqr());
        self.xi.add(heavy * light.conj());
    }

    fn merge(&mut self, o: &Self) {
        self.ii.merge(&o.ii);
        self.xx.merge(&o.xx);
        self.xi.merge(&o.xi);
    }

    fn finish(&self) -> ChiMatrix {
        let mut m = CMat::zeros(4, 4);
        let xi = self.xi.value();
        m[(0, 0)] = C64::new(self.ii.value(), 0.0);
        m[(1, 1)] = C64::new(self.xx.value(), 0.0);
        m[(1, 0)] = xi;
        m[(0, 1)] = xi.conj();
        ChiMatrix::new(1, m).expect("4x4")
    }
}

/// Chunk prefix length for the parallel enumeration.
const PREFIX_BITS: usize = 4;

/// Logical chi of the repetition code for per-qubit rotation angles, by
/// enumeration of all `2^n` X-strings grouped into syndrome pairs.
pub fn logical_chi_enumerate(angles: &[f64], workers: usize) -> Result<ChiMatrix> {
    let n = angles.len();
    let m = check_odd(n)?;
    if n > MAX_ENUMERATION_N {
        bail!(Budget, "n = {n} exceeds the enumeration limit {MAX_ENUMERATION_N}");
    }
    // factor for qubit a inside / outside the string
    let amps: Vec<(C64, C64)> = angles
        .iter()
        .map(|&t| {
            let (s, c) = (t / 2.0).sin_cos();
            (C64::new(0.0, -s), C64::new(c, 0.0))
        })
        .collect();
    // Each syndrome pair is represented by the string R that excludes qubit 0.
    let free = n - 1;
    let prefix = PREFIX_BITS.min(free);
    let parts = crate::par::map_chunks(1 << prefix, workers, |chunk| {
        let mut acc = XSectorChi::default();
        let mut psi_r = amps[0].1;
        let mut psi_c = amps[0].0;
        let mut w = 0usize;
        for b in 0..prefix {
            let q = 1 + b;
            if (chunk >> b) & 1 == 1 {
                psi_r *= amps[q].0;
                psi_c *= amps[q].1;
                w += 1;
            } else {
                psi_r *= amps[q].1;
                psi_c *= amps[q].0;
            }
        }
        walk(&amps[1 + prefix..], psi_r, psi_c, w, m, &mut acc);
        acc
    });
    let mut total = XSectorChi::default();
    for p in &parts {
        total.merge(p);
    }
    Ok(total.finish())
}

fn walk(amps: &[(C64, C64)], psi_r: C64, psi_c: C64, w: usize, m: usize, acc: &mut XSectorChi) {
    match amps.split_first() {
        None => {
            if w <= m {
                acc.add_pair(psi_r, psi_c);
            } else {
                acc.add_pair(psi_c, psi_r);
            }
        }
        Some((&(inside, outside), tail)) => {
            walk(tail, psi_r * outside, psi_c * inside, w, m, acc);
            walk(tail, psi_r * inside, psi_c * outside, w + 1, m, acc);
        }
    }
}

/// Logical chi for arbitrary X-string amplitudes `psi[S]` (bit `a` of `S`
/// marks qubit `a`), `psi.len() == 2^n`.
pub fn logical_chi_from_amplitudes(n: usize, psi: &[C64]) -> Result<ChiMatrix> {
    let m = check_odd(n)?;
    if psi.len() != 1 << n {
        return Err(crate::Error::Dimension(1 << n, psi.len()));
    }
    let full = (1usize << n) - 1;
    let mut acc = XSectorChi::default();
    for r in (0..1usize << n).filter(|r| r & 1 == 0) {
        let c = full ^ r;
        if (r.count_ones() as usize) <= m {
            acc.add_pair(psi[r], psi[c]);
        } else {
            acc.add_pair(psi[c], psi[r]);
        }
    }
    Ok(acc.finish())
}

/// `(eps, delta)` read off a single-qubit X-sector logical chi:
/// `chi_XX = eps/2`, `chi_XI = -i delta/2`.
pub fn eps_delta_from_chi(chi: &ChiMatrix) -> (f64, f64) {
    (2.0 * chi.get(1, 1).re, -2.0 * chi.get(1, 0).im)
}

/// Large-`n` forms of the logical parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    pub eps_hat: f64,
    pub delta_hat: f64,
    pub eps: f64,
    pub delta: f64,
    /// `eps / eps_hat - 1`
    pub eps_rel_dev: f64,
    pub delta_rel_dev: f64,
}

/// `eps_hat = sqrt(2/(pi n)) sin^{n+1} theta / cos theta`,
/// `delta_hat = sqrt(2/(pi n)) sin^n theta`, with the exact values alongside.
pub fn theorem1_asymptotics(n: usize, theta: f64) -> Result<Asymptotics> {
    check_odd(n)?;
    let half = (theta / 2.0).sin();
    if half.is_nan() || half * half >= 0.5 || theta <= 0.0 {
        bail!(OutOfRange, "need 0 < theta with sin^2(theta/2) < 1/2, got theta = {theta}");
    }
    let pref = (2.0 / (core::f64::consts::PI * n as f64)).sqrt();
    let (s, c) = theta.sin_cos();
    let eps_hat = pref * s.powi(n as i32 + 1) / c;
    let delta_hat = pref * s.powi(n as i32);
    let (eps, delta) = logical_eps_delta_closed(n, theta)?;
    Ok(Asymptotics {
        eps_hat,
        delta_hat,
        eps,
        delta,
        eps_rel_dev: eps / eps_hat - 1.0,
        delta_rel_dev: delta / delta_hat - 1.0,
    })
}

/// Probability that more than half of `n` independent flips occur, and its
/// large-`n` approximation `sin^{n+1} theta / (sqrt(2 pi n) cos theta)` with
/// `p = sin^2(theta/2)`.
pub fn decoding_error_probability(n: usize, p: f64) -> Result<(f64, f64)> {
    check_odd(n)?;
    if !(p > 0.0 && p < 0.5) {
        bail!(OutOfRange, "need 0 < p < 1/2, got {p}");
    }
    let mut acc = KahanF64::new();
    for w in n.div_ceil(2)..=n {
        acc.add(biguint_to_f64(&binomial(n as u64, w as u64)) * p.powi(w as i32) * (1.0 - p).powi((n - w) as i32));
    }
    let theta = 2.0 * p.sqrt().asin();
    let (s, c) = theta.sin_cos();
    let approx = s.powi(n as i32 + 1) / c / (2.0 * core::f64::consts::PI * n as f64).sqrt();
    Ok((acc.value(), approx))
}

/// Elementary symmetric polynomial `e_m(x)`.
pub fn elementary_symmetric(x: &[f64], m: usize) -> f64 {
    let mut e = vec![0.0f64; m + 1];
    e[0] = 1.0;
    for &v in x {
        for k in (1..=m).rev() {
            e[k] += e[k - 1] * v;
        }
    }
    e[m]
}

/// Outcome of the random search for a point beating the symmetric minimum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FmWitness {
    /// `C(n,m) c^{m/n}`
    pub symmetric_value: f64,
    pub min_sampled: f64,
    pub samples: usize,
    pub violations: usize,
    /// Norm of the finite-difference gradient of `f_m` along the constraint
    /// surface at the symmetric point.
    pub tangent_gradient: f64,
}

/// Samples positive vectors with `prod x = c` and checks `e_m(x) >=
/// e_m(c^{1/n}, ...) - 1e-12`.
pub fn minimize_fm_witness(n: usize, m: usize, c: f64, samples: usize, seed: u64) -> Result<FmWitness> {
    if c.is_nan() || c <= 0.0 || n == 0 || m > n {
        bail!(InvalidArgument, "need c > 0 and 0 <= m <= n, got n={n} m={m} c={c}");
    }
    let root = c.powf(1.0 / n as f64);
    let sym = vec![root; n];
    let symmetric_value = elementary_symmetric(&sym, m);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_sampled = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..samples {
        let mut logs: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mean = logs.iter().sum::<f64>() / n as f64;
        logs.iter_mut().for_each(|l| *l += root.ln() - mean);
        let x: Vec<f64> = logs.iter().map(|l| l.exp()).collect();
        let v = elementary_symmetric(&x, m);
        min_sampled = min_sampled.min(v);
        if v < symmetric_value - 1e-12 * symmetric_value.max(1.0) {
            violations += 1;
        }
    }
    // derivative along log-coordinates directions that keep the product fixed
    let h = 1e-6;
    let mut grad2 = 0.0;
    for k in 1..n {
        let mut plus = sym.clone();
        let mut minus = sym.clone();
        plus[0] *= h.exp();
        plus[k] *= (-h).exp();
        minus[0] *= (-h).exp();
        minus[k] *= h.exp();
        let g = (elementary_symmetric(&plus, m) - elementary_symmetric(&minus, m)) / (2.0 * h);
        grad2 += g * g;
    }
    Ok(FmWitness { symmetric_value, min_sampled, samples, violations, tangent_gradient: grad2.sqrt() })
}

/// `sum_{w<=m} (-1)^w C(n,w)` and `(-1)^m C(n-1,m)` for odd `n`.
pub fn binomial_alternating_identity(n: usize) -> Result<(BigInt, BigInt)> {
    let m = check_odd(n)?;
    let mut lhs = BigInt::zero();
    for w in 0..=m {
        lhs += sign(w as i64) * BigInt::from(binomial(n as u64, w as u64));
    }
    let rhs = sign(m as i64) * BigInt::from(binomial((n - 1) as u64, m as u64));
    Ok((lhs, rhs))
}

/// Leading-order check of `delta <= ((n+1)/(2n)) eps / s`, `s` the geometric
/// mean of `sin(theta_a / 2)`. Returns `(delta, bound)`.
pub fn inhomogeneous_bound(angles: &[f64]) -> Result<(f64, f64)> {
    let n = angles.len();
    let (eps, delta) = inhomogeneous_eps_delta(angles)?;
    let log_mean = angles.iter().map(|t| (t / 2.0).sin().abs().ln()).sum::<f64>() / n as f64;
    let s = log_mean.exp();
    Ok((delta, (n + 1) as f64 / (2 * n) as f64 * eps / s))
}
