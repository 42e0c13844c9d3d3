use super::{ChiMatrix, Ptm};
use crate::error::{bail, Result};
use crate::numeric::KahanF64;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

/// Summary of coherence-related channel parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMetrics {
    pub r: f64,
    pub p: f64,
    pub u: f64,
    pub theta: f64,
    pub d_lower: f64,
    pub d_upper: f64,
    /// `(eps, delta)` when the channel has the single-qubit
    /// dephasing/rotation form.
    pub eps_delta: Option<(f64, f64)>,
}

/// `r = Tr(I - N) / (d (d + 1))`.
pub fn average_infidelity(n: &Ptm) -> f64 {
    let d = n.dim() as f64;
    let tr: KahanF64 = (0..n.dim2()).map(|i| 1.0 - n.get(i, i)).collect();
    tr.value() / (d * (d + 1.0))
}

/// `p = Tr(N_u) / (d^2 - 1)`.
pub fn benchmarking_parameter(n: &Ptm) -> f64 {
    let tr: KahanF64 = (1..n.dim2()).map(|i| n.get(i, i)).collect();
    tr.value() / (n.dim2() - 1) as f64
}

/// `u = Tr(N_u^T N_u) / (d^2 - 1)`.
pub fn unitarity(n: &Ptm) -> f64 {
    let d2 = n.dim2();
    let mut acc = KahanF64::new();
    for a in 1..d2 {
        for b in 1..d2 {
            acc.add(n.get(a, b) * n.get(a, b));
        }
    }
    acc.value() / (d2 - 1) as f64
}

/// `Theta = arccos(p / sqrt(u))`, with the ratio clamped to `[-1, 1]`.
pub fn coherence_angle(p: f64, u: f64) -> Result<f64> {
    if u.is_nan() || u <= 0.0 {
        bail!(InvalidArgument, "unitarity must be positive, got {u}");
    }
    Ok((p / u.sqrt()).clamp(-1.0, 1.0).acos())
}

/// Sum of squared off-diagonal entries of `N_u` plus `sum (1 - N_ii)^2`.
fn deviation_sum(n: &Ptm) -> f64 {
    let d2 = n.dim2();
    let mut acc = KahanF64::new();
    for a in 1..d2 {
        for b in 1..d2 {
            let v = if a == b { 1.0 - n.get(a, a) } else { n.get(a, b) };
            acc.add(v * v);
        }
    }
    acc.value()
}

/// Diamond-distance bounds `(sqrt(S) / (2d), d sqrt(S))` with `S` the
/// off-diagonal plus diagonal-deficit sum of squares of `N_u`.
pub fn diamond_bounds(n: &Ptm) -> (f64, f64) {
    let d = n.dim() as f64;
    let f = deviation_sum(n).sqrt();
    (f / (2.0 * d), d * f)
}

/// Upper bound on the diamond distance from the chi matrix of a unital
/// channel: `sqrt((d^2/4) sum_{i!=j} |chi_ij|^2 + (d^2/2) (sum_{l!=0} chi_ll)^2)`.
pub fn chi_diamond_bound(chi: &ChiMatrix) -> f64 {
    let d2 = chi.dim2() as f64;
    let mut off = KahanF64::new();
    let mut diag = KahanF64::new();
    for i in 0..chi.dim2() {
        for j in 0..chi.dim2() {
            if i != j {
                off.add(chi.get(i, j).norm_sqr());
            } else if i != 0 {
                diag.add(chi.get(i, i).re);
            }
        }
    }
    let dg = diag.value();
    (d2 / 4.0 * off.value() + d2 / 2.0 * dg * dg).sqrt()
}

/// Reads `(eps, delta)` off a single-qubit transfer matrix of the
/// dephasing/rotation form, or `None` if it is not of that form.
pub fn eps_delta(n: &Ptm, tol: f64) -> Option<(f64, f64)> {
    if n.n() != 1 {
        return None;
    }
    let eps = 1.0 - n.get(2, 2);
    let delta = n.get(3, 2);
    let mut expect = crate::numeric::linalg::RMat::identity(4, 4);
    expect[(2, 2)] = 1.0 - eps;
    expect[(3, 3)] = 1.0 - eps;
    expect[(3, 2)] = delta;
    expect[(2, 3)] = -delta;
    let worst = (0..16).map(|k| (n.get(k / 4, k % 4) - expect[(k / 4, k % 4)]).abs()).fold(0.0, f64::max);
    (worst <= tol).then_some((eps, delta))
}

pub fn metrics(n: &Ptm) -> Result<ChannelMetrics> {
    let r = average_infidelity(n);
    let p = benchmarking_parameter(n);
    let u = unitarity(n);
    let theta = coherence_angle(p, u)?;
    let (d_lower, d_upper) = diamond_bounds(n);
    Ok(ChannelMetrics { r, p, u, theta, d_lower, d_upper, eps_delta: eps_delta(n, 1e-12) })
}
