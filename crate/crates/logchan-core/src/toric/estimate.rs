//! String-sum estimators of the logical `chi_{Z1,I}` and `chi_{Z1,Z1}`, and
//! the coherent-versus-incoherent inequality they lead to.

use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

use super::lattice::TorusLattice;
use super::strings::{Move, MAX_EXCESS};
use crate::channel::{average_infidelity, chi_to_ptm, growth_fit, ChiMatrix, GrowthFit};
use crate::error::{bail, Result};
use crate::numeric::exact::{biguint_to_f64, binomial};
use crate::numeric::KahanF64;
use crate::C64;

/// Default excess-length cutoff `zeta` (strings up to `L + 2 zeta`).
pub const DEFAULT_ZETA: usize = 2;
/// Default step-separation constant `gamma`.
pub const DEFAULT_GAMMA: f64 = 0.5;
/// Code-space dimension of the toric code.
pub const D_L: f64 = 4.0;

/// Number of `Z1`-type logical strings of length `ell`, without storing
/// them. A string is reached once from each of its rightward crossings of
/// the cut between columns 0 and 1, so each walk is weighted by the inverse
/// of that crossing count.
pub fn count_logical_strings(lattice: &TorusLattice, ell: usize) -> Result<u64> {
    let l = lattice.l();
    if ell < l || (ell - l) % 2 == 1 {
        return Ok(0);
    }
    if ell - l > MAX_EXCESS {
        bail!(Budget, "string length {ell} exceeds L + {MAX_EXCESS}");
    }
    // by_crossings[k]: walks with k rightward crossings of the cut
    let mut by_crossings = [0u64; MAX_EXCESS + 2];
    for r in 0..l as isize {
        let mut visited = alloc::vec![false; lattice.n_vertices()];
        visited[lattice.vertex(r, 0)] = true;
        visited[lattice.vertex(r, 1)] = true;
        count_walks(lattice, r, 1, ell - 1, r, 1, &mut visited, &mut by_crossings);
    }
    let mut total = 0u64;
    for (k, &c) in by_crossings.iter().enumerate().skip(1) {
        debug_assert_eq!(c % k as u64, 0);
        total += c / k as u64;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn count_walks(
    lat: &TorusLattice,
    y: isize,
    x: isize,
    left: usize,
    ty: isize,
    crossings: usize,
    visited: &mut [bool],
    out: &mut [u64],
) {
    let l = lat.l() as isize;
    if left == 0 {
        if (y, x) == (ty, l) {
            out[crossings] += 1;
        }
        return;
    }
    for mv in [Move::Right, Move::Up, Move::Down, Move::Left] {
        let (dy, dx) = match mv {
            Move::Right => (0, 1),
            Move::Left => (0, -1),
            Move::Up => (-1, 0),
            Move::Down => (1, 0),
        };
        let (ny, nx) = (y + dy, x + dx);
        if (ty - ny).unsigned_abs() + (l - nx).unsigned_abs() > left - 1 {
            continue;
        }
        let at_target = (ny, nx) == (ty, l);
        if at_target && left != 1 {
            continue;
        }
        let v = lat.vertex(ny, nx);
        if !at_target && visited[v] {
            continue;
        }
        // a rightward move from column 0 (mod L) crosses the cut
        let crossed = mv == Move::Right && x.rem_euclid(l) == 0;
        visited[v] = true;
        count_walks(lat, ny, nx, left - 1, ty, crossings + crossed as usize, visited, out);
        if !at_target {
            visited[v] = false;
        }
    }
}

fn regime(l: usize, theta: f64) -> Result<()> {
    if !theta.is_finite() {
        bail!(InvalidArgument, "rotation angle must be finite");
    }
    if l as f64 * theta.sin().abs() >= 1.0 {
        bail!(OutOfRange, "L |sin theta| = {:.4} is not below 1", l as f64 * theta.sin().abs());
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> f64 {
    biguint_to_f64(&binomial(n as u64, k as u64))
}

/// Contribution of the strings of one length.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthContribution {
    pub length: usize,
    pub strings: u64,
    pub coherent: C64,
    pub incoherent: f64,
}

/// Estimated logical components from strings of length `<= L + 2 zeta`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalChiEstimate {
    pub l: usize,
    pub theta: f64,
    pub zeta: usize,
    pub gamma: f64,
    pub chi_z1i: C64,
    pub chi_z1z1: f64,
    pub by_length: Vec<LengthContribution>,
    /// `alpha L^{2 zeta + 1} |sin theta|^{L + 2 zeta}` with
    /// `alpha = 1 / (1 - L |sin theta|)`.
    pub coherent_tail: f64,
    /// `L C(L, (L+1)/2) (sin(theta)/2)^{L+1}`.
    pub incoherent_leading: f64,
    /// `L (sin theta)^{L+1}`.
    pub xi: f64,
    /// `24 gamma zeta^2 / sqrt(L) + (L sin theta)^{2 zeta}`, unknown constants
    /// taken as 1.
    pub error_budget: f64,
}

/// Per-string coherent term `-i C(ell-1, (ell-1)/2) (sin(theta)/2)^ell`.
pub fn coherent_string_term(ell: usize, theta: f64) -> C64 {
    C64::new(0.0, -binom(ell - 1, (ell - 1) / 2) * (theta.sin() / 2.0).powi(ell as i32))
}

/// Per-string incoherent term `C(ell, (ell+1)/2) (sin(theta)/2)^{ell+1}`.
pub fn incoherent_string_term(ell: usize, theta: f64) -> f64 {
    binom(ell, ell.div_ceil(2)) * (theta.sin() / 2.0).powi(ell as i32 + 1)
}

pub fn error_budget(l: usize, theta: f64, zeta: usize, gamma: f64) -> f64 {
    let z2 = (zeta * zeta) as f64;
    24.0 * gamma * z2 / (l as f64).sqrt() + (l as f64 * theta.sin()).abs().powi(2 * zeta as i32)
}

pub fn logical_chi_estimate(l: usize, theta: f64, zeta: usize, gamma: f64) -> Result<LogicalChiEstimate> {
    let lattice = TorusLattice::new(l)?;
    regime(l, theta)?;
    if 2 * zeta > MAX_EXCESS {
        bail!(Budget, "zeta = {zeta} exceeds the enumeration limit {}", MAX_EXCESS / 2);
    }
    let mut by_length = Vec::new();
    let mut coh = C64::new(0.0, 0.0);
    let mut inc = KahanF64::new();
    for ell in (l..=l + 2 * zeta).step_by(2) {
        let strings = count_logical_strings(&lattice, ell)?;
        let coherent = coherent_string_term(ell, theta) * strings as f64;
        let incoherent = incoherent_string_term(ell, theta) * strings as f64;
        coh += coherent;
        inc.add(incoherent);
        by_length.push(LengthContribution { length: ell, strings, coherent, incoherent });
    }
    let s = theta.sin().abs();
    let lf = l as f64;
    let alpha = 1.0 / (1.0 - lf * s);
    Ok(LogicalChiEstimate {
        l,
        theta,
        zeta,
        gamma,
        chi_z1i: coh,
        chi_z1z1: inc.value(),
        by_length,
        coherent_tail: alpha * lf.powi(2 * zeta as i32 + 1) * s.powi((l + 2 * zeta) as i32),
        incoherent_leading: lf * incoherent_string_term(l, theta),
        xi: lf * theta.sin().powi(l as i32 + 1),
        error_budget: error_budget(l, theta, zeta, gamma),
    })
}

/// Estimate of `chi_{Z1,I}` with its per-length breakdown.
pub fn coherent_estimator(l: usize, theta: f64, zeta: usize) -> Result<LogicalChiEstimate> {
    logical_chi_estimate(l, theta, zeta, DEFAULT_GAMMA)
}

/// Lower-bound estimate of `chi_{Z1,Z1}`; same report as the coherent one.
pub fn incoherent_estimator(l: usize, theta: f64, zeta: usize) -> Result<LogicalChiEstimate> {
    logical_chi_estimate(l, theta, zeta, DEFAULT_GAMMA)
}

/// Coherent versus incoherent strength of a logical channel.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem5Report {
    pub theta: f64,
    /// `sum_{i != j} |chi_ij|^2`.
    pub coherent_strength: f64,
    /// `(2 / sin^2 theta) (sum_{l != 0} chi_ll)^2`.
    pub bound: f64,
    /// `coherent_strength < bound`; an exactly zero coherent part also
    /// counts as holding.
    pub holds: bool,
    pub error_budget: f64,
    pub holds_with_budget: bool,
    /// `|chi_{Z1,I}| / chi_{Z1,Z1}`.
    pub ratio: f64,
    /// `(1 / |sin theta|) (1 + E)`.
    pub ratio_bound: f64,
    pub ratio_holds: bool,
    /// Logical average infidelity.
    pub r: f64,
    /// Predicted quadratic coefficient `d_L / ((d_L + 1) sin^2 theta) r^2 (1 + E)`.
    pub predicted_quadratic: f64,
}

/// Logical indices of `Z1` and the identity.
const Z1: usize = 12;

pub fn theorem5_ratio_check(chi: &ChiMatrix, l: usize, theta: f64, zeta: usize, gamma: f64) -> Result<Theorem5Report> {
    TorusLattice::new(l)?;
    regime(l, theta)?;
    if theta == 0.0 {
        bail!(OutOfRange, "the bound needs a nonzero rotation angle");
    }
    let d2 = chi.dim2();
    let mut off = KahanF64::new();
    let mut diag = KahanF64::new();
    for i in 0..d2 {
        for j in 0..d2 {
            if i != j {
                off.add(chi.get(i, j).norm_sqr());
            }
        }
        if i != 0 {
            diag.add(chi.get(i, i).re);
        }
    }
    let s2 = theta.sin().powi(2);
    let lhs = off.value();
    let bound = 2.0 / s2 * diag.value().powi(2);
    let e = error_budget(l, theta, zeta, gamma);
    let ratio = if chi.dim2() > Z1 { chi.get(Z1, 0).norm() / chi.get(Z1, Z1).re } else { f64::NAN };
    let ratio_bound = (1.0 + e) / theta.sin().abs();
    let r = average_infidelity(&chi_to_ptm(chi)?);
    Ok(Theorem5Report {
        theta,
        coherent_strength: lhs,
        bound,
        holds: lhs < bound || lhs == 0.0,
        error_budget: e,
        holds_with_budget: lhs <= bound * (1.0 + e),
        ratio,
        ratio_bound,
        ratio_holds: ratio <= ratio_bound,
        r,
        predicted_quadratic: D_L / ((D_L + 1.0) * s2) * r * r * (1.0 + e),
    })
}

/// Infidelity growth of repeated logical channels against the prediction.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthReport {
    pub fit: GrowthFit,
    pub r: f64,
    /// `quadratic / linear`.
    pub ratio: f64,
    /// `d_L / ((d_L + 1) sin^2 theta) r (1 + slack)`.
    pub bound: f64,
    pub holds: bool,
}

pub fn rm_growth_check(chi: &ChiMatrix, theta: f64, m_max: u64, slack: f64) -> Result<GrowthReport> {
    if theta.sin() == 0.0 {
        bail!(OutOfRange, "the growth bound needs a nonzero rotation angle");
    }
    let ptm = chi_to_ptm(chi)?;
    let fit = growth_fit(&ptm, m_max)?;
    let r = average_infidelity(&ptm);
    let ratio = fit.quadratic / fit.linear;
    let bound = D_L / ((D_L + 1.0) * theta.sin().powi(2)) * r * (1.0 + slack);
    Ok(GrowthReport { fit, r, ratio, bound, holds: ratio <= bound })
}
