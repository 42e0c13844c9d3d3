//! Dense operator helpers for small channels (random generation and Kraus
//! conversions).

use alloc::vec::Vec;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{ChiMatrix, Ptm};
use crate::error::Result;
use crate::numeric::linalg::{inv_sqrt_psd, kron, trace_of_product, CMat, RMat};
use crate::C64;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

/// Dense matrix of the Hermitian basis Pauli with the given index.
pub fn pauli_matrix(n: usize, index: usize) -> CMat {
    let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
    let i = C64::new(0.0, 1.0);
    let singles = [
        CMat::from_row_slice(2, 2, &[l, o, o, l]),
        CMat::from_row_slice(2, 2, &[o, l, l, o]),
        CMat::from_row_slice(2, 2, &[o, -i, i, o]),
        CMat::from_row_slice(2, 2, &[l, o, o, -l]),
    ];
    (0..n).fold(CMat::identity(1, 1), |acc, q| {
        let digit = (index >> (2 * (n - 1 - q))) & 3;
        kron(&acc, &singles[digit])
    })
}

fn gaussian_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat {
    CMat::from_fn(d, d, |_, _| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

/// Kraus operators of a random CPTP map with `rank` Kraus terms.
pub fn random_cptp_kraus<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Vec<CMat> {
    let d = 1 << n;
    let raw: Vec<CMat> = (0..rank.max(1)).map(|_| gaussian_matrix(d, rng)).collect();
    let s = raw.iter().fold(CMat::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let norm = inv_sqrt_psd(&s);
    raw.into_iter().map(|k| k * &norm).collect()
}

/// Kraus operators of a random mixture of unitaries (a unital channel).
pub fn random_unital_kraus<R: Rng + ?Sized>(n: usize, terms: usize, rng: &mut R) -> Vec<CMat> {
    let d = 1 << n;
    let terms = terms.max(1);
    let mut weights: Vec<f64> = (0..terms).map(|_| rng.random::<f64>() + 1e-3).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    weights
        .into_iter()
        .map(|w| {
            let g = gaussian_matrix(d, rng);
            let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
            let eig = h.symmetric_eigen();
            let phases = CMat::from_diagonal(&eig.eigenvalues.map(|l| C64::new(0.0, -l).exp()));
            let u = &eig.eigenvectors * phases * eig.eigenvectors.adjoint();
            u * C64::new(w.sqrt(), 0.0)
        })
        .collect()
}

/// `chi_ij = sum_a c_ai conj(c_aj)` with `K_a = sum_i c_ai P_i`.
pub fn chi_from_kraus(n: usize, kraus: &[CMat]) -> Result<ChiMatrix> {
    let d2 = 1usize << (2 * n);
    let d = (1usize << n) as f64;
    let paulis: Vec<CMat> = (0..d2).map(|i| pauli_matrix(n, i)).collect();
    let coeffs: Vec<Vec<C64>> =
        kraus.iter().map(|k| paulis.iter().map(|p| trace_of_product(p, k) / d).collect()).collect();
    let m = CMat::from_fn(d2, d2, |i, j| coeffs.iter().map(|c| c[i] * c[j].conj()).sum());
    ChiMatrix::new(n, m)
}

/// `N_ab = Tr(P_a sum_k K P_b K^dag) / d`.
pub fn ptm_from_kraus(n: usize, kraus: &[CMat]) -> Result<Ptm> {
    let d2 = 1usize << (2 * n);
    let d = (1usize << n) as f64;
    let paulis: Vec<CMat> = (0..d2).map(|i| pauli_matrix(n, i)).collect();
    let images: Vec<CMat> = paulis
        .iter()
        .map(|p| kraus.iter().fold(CMat::zeros(1 << n, 1 << n), |acc, k| acc + k * p * k.adjoint()))
        .collect();
    let m = RMat::from_fn(d2, d2, |a, b| trace_of_product(&paulis[a], &images[b]).re / d);
    Ptm::new(n, m)
}
