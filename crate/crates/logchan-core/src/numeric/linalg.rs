//! Thin helpers over `nalgebra` dense matrices.

use alloc::vec::Vec;
use nalgebra::DMatrix;

use super::KahanC64;
use crate::C64;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

pub type CMat = DMatrix<C64>;
pub type RMat = DMatrix<f64>;

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMat) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// `m^{-1/2}` for a positive definite Hermitian matrix.
pub fn inv_sqrt_psd(m: &CMat) -> CMat {
    let eig = m.clone().symmetric_eigen();
    let mut d = CMat::zeros(m.nrows(), m.ncols());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        d[(i, i)] = C64::new(1.0 / l.max(f64::MIN_POSITIVE).sqrt(), 0.0);
    }
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// Largest `|m_ij - conj(m_ji)|`.
pub fn hermitian_deviation(m: &CMat) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.shape();
    let (br, bc) = b.shape();
    CMat::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

/// Trace of `a * b` with compensated summation.
pub fn trace_of_product(a: &CMat, b: &CMat) -> C64 {
    let mut acc = KahanC64::new();
    for i in 0..a.nrows() {
        for k in 0..a.ncols() {
            acc.add(a[(i, k)] * b[(k, i)]);
        }
    }
    acc.value()
}

/// Real matrix product with compensated inner sums.
pub fn matmul_real(a: &RMat, b: &RMat) -> RMat {
    let n = a.nrows();
    let m = b.ncols();
    RMat::from_fn(n, m, |i, j| (0..a.ncols()).map(|k| a[(i, k)] * b[(k, j)]).collect::<super::KahanF64>().value())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_of_pauli_y() {
        let y = CMat::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        );
        let ev = hermitian_eigenvalues(&y);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn inverse_square_root() {
        let m = CMat::from_row_slice(
            2,
            2,
            &[C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)],
        );
        let r = inv_sqrt_psd(&m);
        let back = &r * &m * &r;
        assert!((back - CMat::identity(2, 2)).norm() < 1e-12);
    }
}
