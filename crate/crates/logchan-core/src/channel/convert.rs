use super::{i_pow, ChiMatrix, PauliTable, Ptm};
use crate::error::{Error, Result};
use crate::numeric::linalg::RMat;
use crate::numeric::{KahanC64, KahanF64};
use crate::C64;
use alloc::vec;

/// Hermiticity tolerance for inputs to [`chi_to_ptm`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// `N_ab = sum_ij chi_ij i^e` over triples with `P_i P_b P_j = i^e P_a`.
pub fn chi_to_ptm(chi: &ChiMatrix) -> Result<Ptm> {
    let dev = chi.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NonHermitian(dev));
    }
    let n = chi.n();
    let d2 = chi.dim2();
    let table = PauliTable::new(n);
    let mut m = RMat::zeros(d2, d2);
    let mut acc = vec![KahanC64::new(); d2];
    for b in 0..d2 {
        acc.iter_mut().for_each(|a| *a = KahanC64::new());
        for i in 0..d2 {
            let (t, e1) = table.mul(i, b);
            for j in 0..d2 {
                let c = chi.get(i, j);
                if c == C64::new(0.0, 0.0) {
                    continue;
                }
                let (a, e2) = table.mul(t, j);
                acc[a].add(c * i_pow(e1 + e2));
            }
        }
        for a in 0..d2 {
            m[(a, b)] = acc[a].value().re;
        }
    }
    Ptm::new(n, m)
}

/// Inverse of [`chi_to_ptm`]: `chi_ij = d^-2 sum_b i^e N_cb` with
/// `P_j P_b P_i = i^e P_c`.
pub fn ptm_to_chi(ptm: &Ptm) -> Result<ChiMatrix> {
    let n = ptm.n();
    let d2 = ptm.dim2();
    let table = PauliTable::new(n);
    let norm = 1.0 / d2 as f64;
    let mut m = crate::numeric::linalg::CMat::zeros(d2, d2);
    for i in 0..d2 {
        for j in 0..d2 {
            let mut acc = KahanC64::new();
            for b in 0..d2 {
                let (c, e) = table.triple(j, b, i);
                acc.add(i_pow(e) * ptm.get(c, b));
            }
            m[(i, j)] = acc.value() * norm;
        }
    }
    ChiMatrix::new(n, m)
}

/// Both sides of the off-diagonal identity between the two representations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffDiagReport {
    /// `sum_{a != b} N_ab^2`
    pub ptm_side: f64,
    /// `d^2 sum_{i != j} |chi_ij|^2`
    pub chi_side: f64,
    pub residual: f64,
}

pub fn offdiag_identity_check(chi: &ChiMatrix) -> Result<OffDiagReport> {
    let ptm = chi_to_ptm(chi)?;
    let d2 = chi.dim2();
    let mut lhs = KahanF64::new();
    let mut rhs = KahanF64::new();
    for a in 0..d2 {
        for b in 0..d2 {
            if a != b {
                lhs.add(ptm.get(a, b) * ptm.get(a, b));
                rhs.add(chi.get(a, b).norm_sqr());
            }
        }
    }
    let ptm_side = lhs.value();
    let chi_side = d2 as f64 * rhs.value();
    Ok(OffDiagReport { ptm_side, chi_side, residual: (ptm_side - chi_side).abs() })
}
