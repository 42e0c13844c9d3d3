use alloc::vec::Vec;
use num_complex::Complex64;

use super::{average_infidelity, Ptm};
use crate::error::{bail, Result};
use crate::numeric::linalg::matmul_real;

/// Largest accepted composition count.
pub const MAX_COMPOSE: u64 = 1_000_000_000;

/// `N^m` together with its infidelity.
#[derive(Debug, Clone)]
pub struct Composition {
    pub power: Ptm,
    pub r_m: f64,
}

/// Exact matrix power by repeated squaring.
pub fn compose(n: &Ptm, m: u64) -> Result<Composition> {
    if m == 0 || m > MAX_COMPOSE {
        bail!(OutOfRange, "composition count {m} outside 1..={MAX_COMPOSE}");
    }
    let mut base = n.matrix().clone();
    let mut acc: Option<crate::numeric::linalg::RMat> = None;
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => matmul_real(&a, &base),
            });
        }
        e >>= 1;
        if e > 0 {
            base = matmul_real(&base, &base);
        }
    }
    let power = Ptm::new(n.n(), acc.expect("m >= 1"))?;
    let r_m = average_infidelity(&power);
    Ok(Composition { power, r_m })
}

/// Closed form `r_m = (2 - (1-eps+i delta)^m - (1-eps-i delta)^m) / 6`.
pub fn rm_eps_delta(eps: f64, delta: f64, m: u64) -> f64 {
    let z = Complex64::new(1.0 - eps, delta).powu(m as u32);
    (2.0 - 2.0 * z.re) / 6.0
}

/// Least-squares fit `r_m ~ a m + b m (m - 1)` over `m = 1..=m_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFit {
    pub linear: f64,
    pub quadratic: f64,
    /// Largest absolute fit residual.
    pub max_residual: f64,
}

pub fn growth_fit(n: &Ptm, m_max: u64) -> Result<GrowthFit> {
    if m_max < 2 {
        bail!(OutOfRange, "need at least two composition counts, got {m_max}");
    }
    let mut rs = Vec::with_capacity(m_max as usize);
    let mut cur = n.matrix().clone();
    for m in 1..=m_max {
        if m > 1 {
            cur = matmul_real(&cur, n.matrix());
        }
        rs.push(average_infidelity(&Ptm::new(n.n(), cur.clone())?));
    }
    Ok(fit_quadratic(&rs))
}

/// Normal equations for the two-parameter model; `rs[k]` is `r_{k+1}`.
pub(crate) fn fit_quadratic(rs: &[f64]) -> GrowthFit {
    let (mut s11, mut s12, mut s22, mut t1, mut t2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (k, &r) in rs.iter().enumerate() {
        let m = (k + 1) as f64;
        let f1 = m;
        let f2 = m * (m - 1.0);
        s11 += f1 * f1;
        s12 += f1 * f2;
        s22 += f2 * f2;
        t1 += f1 * r;
        t2 += f2 * r;
    }
    let det = s11 * s22 - s12 * s12;
    let linear = (t1 * s22 - t2 * s12) / det;
    let quadratic = (s11 * t2 - s12 * t1) / det;
    let max_residual = rs
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let m = (k + 1) as f64;
            (r - linear * m - quadratic * m * (m - 1.0)).abs()
        })
        .fold(0.0, f64::max);
    GrowthFit { linear, quadratic, max_residual }
}
