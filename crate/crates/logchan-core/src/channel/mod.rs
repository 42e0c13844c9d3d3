//! Chi-matrix and Pauli-transfer-matrix representations of `n`-qubit channels.
//!
//! Both are indexed by Hermitian Pauli basis index (I0 X1 Y2 Z3 digits,
//! qubit 0 most significant). The transfer matrix is stored row = output:
//! `N[a][b] = Tr(P_a N(P_b)) / d`, so trace preservation reads as a first
//! row equal to `(1, 0, ..., 0)`.

mod compose;
mod convert;
mod dense;
mod metrics;
mod twirl;

use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

pub use compose::{compose, growth_fit, rm_eps_delta, Composition, GrowthFit, MAX_COMPOSE};
pub use convert::{chi_to_ptm, offdiag_identity_check, ptm_to_chi, OffDiagReport};
pub use dense::{chi_from_kraus, pauli_matrix, ptm_from_kraus, random_cptp_kraus, random_unital_kraus};
pub use metrics::{
    average_infidelity, benchmarking_parameter, chi_diamond_bound, coherence_angle, diamond_bounds, eps_delta, metrics,
    unitarity, ChannelMetrics,
};
pub use twirl::{clifford_group, clifford_twirl, pauli_twirl, twirl, SignedPermutation};

use crate::error::{bail, Error, Result};
use crate::numeric::linalg::{hermitian_deviation, hermitian_eigenvalues, CMat, RMat};
use crate::pauli::single_qubit_product;
use crate::C64;

/// Largest qubit count with dense storage.
pub const MAX_DENSE_QUBITS: usize = 3;

/// `d^2 x d^2` chi matrix: `N(rho) = sum_ij chi_ij P_i rho P_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    n: usize,
    m: CMat,
}

/// `d^2 x d^2` real Pauli transfer matrix, row = output.
#[derive(Debug, Clone, PartialEq)]
pub struct Ptm {
    n: usize,
    m: RMat,
}

fn dims(n: usize) -> Result<usize> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        bail!(OutOfRange, "qubit count {n} outside 1..={MAX_DENSE_QUBITS}");
    }
    Ok(1 << (2 * n))
}

impl ChiMatrix {
    pub fn new(n: usize, m: CMat) -> Result<Self> {
        let d2 = dims(n)?;
        if m.nrows() != d2 || m.ncols() != d2 {
            return Err(Error::Dimension(d2, m.nrows()));
        }
        Ok(Self { n, m })
    }

    /// Row-major entries.
    pub fn from_entries(n: usize, entries: &[C64]) -> Result<Self> {
        let d2 = dims(n)?;
        if entries.len() != d2 * d2 {
            return Err(Error::Dimension(d2 * d2, entries.len()));
        }
        Self::new(n, CMat::from_row_slice(d2, d2, entries))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let d2 = dims(n)?;
        let mut m = CMat::zeros(d2, d2);
        m[(0, 0)] = C64::new(1.0, 0.0);
        Ok(Self { n, m })
    }

    /// Single-qubit rotation `exp(-i theta X / 2)`.
    pub fn x_rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = C64::new((1.0 + c) / 2.0, 0.0);
        m[(1, 1)] = C64::new((1.0 - c) / 2.0, 0.0);
        m[(0, 1)] = C64::new(0.0, s / 2.0);
        m[(1, 0)] = C64::new(0.0, -s / 2.0);
        Self { n: 1, m }
    }

    /// Single-qubit channel with the dephasing/rotation transfer block
    /// `[[1-eps, -delta], [delta, 1-eps]]` acting on (Y, Z).
    pub fn eps_delta(eps: f64, delta: f64) -> Self {
        let mut m = CMat::zeros(4, 4);
        m[(0, 0)] = C64::new(1.0 - eps / 2.0, 0.0);
        m[(1, 1)] = C64::new(eps / 2.0, 0.0);
        m[(0, 1)] = C64::new(0.0, delta / 2.0);
        m[(1, 0)] = C64::new(0.0, -delta / 2.0);
        Self { n: 1, m }
    }

    /// Depolarizing channel with transfer-matrix eigenvalue `p`.
    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        let d2 = dims(n)?;
        let mut m = CMat::zeros(d2, d2);
        let w = (1.0 - p) / d2 as f64;
        for i in 0..d2 {
            m[(i, i)] = C64::new(w, 0.0);
        }
        m[(0, 0)] += C64::new(p, 0.0);
        Ok(Self { n, m })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim2(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn entries(&self) -> Vec<C64> {
        let d2 = self.dim2();
        (0..d2 * d2).map(|k| self.m[(k / d2, k % d2)]).collect()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        hermitian_deviation(&self.m)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn is_psd(&self, tol: f64) -> bool {
        self.eigenvalues().first().is_none_or(|&l| l >= -tol)
    }

    /// `max |sum_ij chi_ij P_j P_i - I|` over operator coefficients.
    pub fn trace_preservation_residual(&self) -> f64 {
        let table = PauliTable::new(self.n);
        let d2 = self.dim2();
        let mut acc = alloc::vec![crate::numeric::KahanC64::new(); d2];
        for i in 0..d2 {
            for j in 0..d2 {
                let (k, e) = table.mul(j, i);
                acc[k].add(self.m[(i, j)] * i_pow(e));
            }
        }
        acc.iter()
            .enumerate()
            .map(|(k, a)| (a.value() - C64::new((k == 0) as u8 as f64, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian, PSD and trace preserving within the given tolerances.
    pub fn is_cptp(&self, herm_tol: f64, psd_tol: f64, tp_tol: f64) -> bool {
        self.hermitian_deviation() <= herm_tol && self.is_psd(psd_tol) && self.trace_preservation_residual() <= tp_tol
    }
}

impl Ptm {
    pub fn new(n: usize, m: RMat) -> Result<Self> {
        let d2 = dims(n)?;
        if m.nrows() != d2 || m.ncols() != d2 {
            return Err(Error::Dimension(d2, m.nrows()));
        }
        Ok(Self { n, m })
    }

    pub fn from_entries(n: usize, entries: &[f64]) -> Result<Self> {
        let d2 = dims(n)?;
        if entries.len() != d2 * d2 {
            return Err(Error::Dimension(d2 * d2, entries.len()));
        }
        Self::new(n, RMat::from_row_slice(d2, d2, entries))
    }

    pub fn identity(n: usize) -> Result<Self> {
        let d2 = dims(n)?;
        Ok(Self { n, m: RMat::identity(d2, d2) })
    }

    pub fn depolarizing(n: usize, p: f64) -> Result<Self> {
        let mut t = Self::identity(n)?;
        for i in 1..t.dim2() {
            t.m[(i, i)] = p;
        }
        Ok(t)
    }

    /// Single-qubit dephasing/rotation channel.
    pub fn eps_delta(eps: f64, delta: f64) -> Self {
        let mut m = RMat::identity(4, 4);
        m[(2, 2)] = 1.0 - eps;
        m[(3, 3)] = 1.0 - eps;
        m[(3, 2)] = delta;
        m[(2, 3)] = -delta;
        Self { n: 1, m }
    }

    /// Single-qubit rotation `exp(-i theta X / 2)`.
    pub fn x_rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::eps_delta(1.0 - c, s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn dim2(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &RMat {
        &self.m
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.m[(a, b)]
    }

    pub fn entries(&self) -> Vec<f64> {
        let d2 = self.dim2();
        (0..d2 * d2).map(|k| self.m[(k / d2, k % d2)]).collect()
    }

    /// Block acting on the traceless Paulis.
    pub fn unital_block(&self) -> RMat {
        let d2 = self.dim2();
        self.m.view((1, 1), (d2 - 1, d2 - 1)).into_owned()
    }

    /// Column mapping the identity into traceless Paulis.
    pub fn nonunital_column(&self) -> Vec<f64> {
        (1..self.dim2()).map(|a| self.m[(a, 0)]).collect()
    }

    /// Distance of the first row from `(1, 0, ..., 0)`.
    pub fn trace_preservation_residual(&self) -> f64 {
        (0..self.dim2()).map(|b| (self.m[(0, b)] - (b == 0) as u8 as f64).abs()).fold(0.0, f64::max)
    }

    /// `max |N_u^T N_u - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let u = self.unital_block();
        let g = u.transpose() * &u;
        let k = g.nrows();
        (0..k * k).map(|i| (g[(i / k, i % k)] - (i / k == i % k) as u8 as f64).abs()).fold(0.0, f64::max)
    }
}

/// `i^e` as a complex number.
#[inline]
pub fn i_pow(e: u8) -> C64 {
    match e & 3 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

/// Products of Hermitian basis Paulis, `P_i P_j = i^e P_k`.
#[derive(Debug, Clone)]
pub struct PauliTable {
    d2: usize,
    prod: Vec<(u16, u8)>,
}

impl PauliTable {
    pub fn new(n: usize) -> Self {
        let d2 = 1usize << (2 * n);
        let mut prod = Vec::with_capacity(d2 * d2);
        for i in 0..d2 {
            for j in 0..d2 {
                let mut k = 0usize;
                let mut e = 0u8;
                for q in (0..n).rev() {
                    let a = ((i >> (2 * q)) & 3) as u8;
                    let b = ((j >> (2 * q)) & 3) as u8;
                    let (c, f) = single_qubit_product(a, b);
                    k |= (c as usize) << (2 * q);
                    e = (e + f) & 3;
                }
                prod.push((k as u16, e));
            }
        }
        Self { d2, prod }
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> (usize, u8) {
        let (k, e) = self.prod[i * self.d2 + j];
        (k as usize, e)
    }

    /// `P_i P_j P_k = i^e P_out`.
    #[inline]
    pub fn triple(&self, i: usize, j: usize, k: usize) -> (usize, u8) {
        let (t, e1) = self.mul(i, j);
        let (o, e2) = self.mul(t, k);
        (o, (e1 + e2) & 3)
    }
}
