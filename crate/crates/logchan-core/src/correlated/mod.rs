//! Repetition code under permutation-symmetric correlated X noise,
//! `H = h1 sum_i X_i + h2 sum_{i<j} X_i X_j (+ h3 X_1 X_2 X_3 for n = 3)`.
//!
//! Two routes to the logical chi matrix live here. The exact one expands
//! `exp(-iH)` in the X eigenbasis, where `H` is diagonal, and feeds the
//! resulting X-string amplitudes to the repetition-code recovery. The
//! combinatorial one sums the collisionless pair counts `Omega` and `Delta`
//! in exact rationals and only converts to floats when the couplings enter.
//!
//! Phase convention: `chi_XI` here carries the sign of the crate-wide
//! convention (`-i delta / 2`). The pair-count phases come out as `+i`, so
//! the collisionless prediction is conjugated to match.

mod combinatorics;

use alloc::vec::Vec;
// float math comes from libm when std is not linked
#[allow(unused_imports)]
use num_traits::Float;

pub use combinatorics::{
    alternating_power_sum, cancellation_census, census_polynomial, delta, delta_closed, delta_factored, delta_sum,
    dixon_sum, hypergeometric_3f2_terminating, kappa, omega, omega_closed, omega_delta_ratio, omega_factored,
    omega_sum, ratio_formula, CancellationCensus, Phased,
};

use crate::channel::ChiMatrix;
use crate::error::{bail, Result};
use crate::numeric::exact::to_f64;
use crate::numeric::KahanF64;
use crate::repcode::logical_chi_from_amplitudes;
use crate::C64;

/// Largest code length for the dense amplitude path.
pub const MAX_DENSE_N: usize = 9;

/// `n |h2|` above which the collisionless expansion is flagged.
pub const COLLISIONLESS_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatedModel {
    n: usize,
    h1: f64,
    h2: f64,
    h3: f64,
}

impl CorrelatedModel {
    pub fn new(n: usize, h1: f64, h2: f64) -> Result<Self> {
        if n.is_multiple_of(2) {
            bail!(InvalidArgument, "code length must be odd, got {n}");
        }
        if !(h1.is_finite() && h2.is_finite()) {
            bail!(InvalidArgument, "couplings must be finite");
        }
        Ok(Self { n, h1, h2, h3: 0.0 })
    }

    /// Adds the three-body term; only meaningful for `n = 3`.
    pub fn with_h3(mut self, h3: f64) -> Result<Self> {
        if self.n != 3 && h3 != 0.0 {
            bail!(InvalidArgument, "three-body coupling is only modelled for n = 3");
        }
        self.h3 = h3;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h1(&self) -> f64 {
        self.h1
    }

    pub fn h2(&self) -> f64 {
        self.h2
    }

    pub fn h3(&self) -> f64 {
        self.h3
    }

    pub fn m(&self) -> usize {
        (self.n - 1) / 2
    }

    pub fn t1(&self) -> f64 {
        self.h1.tan()
    }

    pub fn t2(&self) -> f64 {
        self.h2.tan()
    }

    /// Whether `n |h2|` is small enough for the collisionless expansion.
    pub fn collisionless_valid(&self) -> bool {
        self.n as f64 * self.h2.abs() <= COLLISIONLESS_LIMIT
    }

    /// Energy of the X eigenstate with `flips` entries equal to `-1`.
    fn energy(&self, flips: usize) -> f64 {
        let n = self.n as f64;
        let sx = n - 2.0 * flips as f64;
        let pairs = (sx * sx - n) / 2.0;
        let triple = if flips.is_multiple_of(2) { 1.0 } else { -1.0 };
        self.h1 * sx + self.h2 * pairs + self.h3 * triple
    }

    /// X-string amplitudes `psi[S]` of `exp(-iH) = sum_S psi(S) X(S)`.
    pub fn amplitudes(&self) -> Result<Vec<C64>> {
        if self.n > MAX_DENSE_N {
            bail!(OutOfRange, "dense path supports n <= {MAX_DENSE_N}, got {}", self.n);
        }
        let size = 1usize << self.n;
        // diagonal of exp(-iH) in the X eigenbasis, bit set = eigenvalue -1
        let mut f: Vec<C64> = (0..size)
            .map(|b| {
                let (s, c) = self.energy(b.count_ones() as usize).sin_cos();
                C64::new(c, -s)
            })
            .collect();
        // psi(S) = 2^-n sum_b f(b) (-1)^{|S & b|}
        let mut h = 1;
        while h < size {
            for i in (0..size).step_by(2 * h) {
                for j in i..i + h {
                    let (a, b) = (f[j], f[j + h]);
                    f[j] = a + b;
                    f[j + h] = a - b;
                }
            }
            h *= 2;
        }
        let scale = 1.0 / size as f64;
        Ok(f.into_iter().map(|v| v * scale).collect())
    }

    /// Logical chi after majority-vote recovery, from the dense amplitudes.
    pub fn logical_chi(&self) -> Result<ChiMatrix> {
        logical_chi_from_amplitudes(self.n, &self.amplitudes()?)
    }
}

/// Comparison of the exact logical chi against the coherence bound
/// `chi_XX >= 2n/(n+1) tan(h1) |chi_XI|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Report {
    pub chi_xx: f64,
    pub chi_xi: C64,
    /// `2n/(n+1) tan(h1) |chi_XI|`.
    pub rhs: f64,
    /// Relative slack granted for the neglected `(1 + O(n h2))` factor.
    pub tolerance: f64,
    /// `chi_XX / rhs - 1`.
    pub margin: f64,
    pub holds: bool,
    pub collisionless_valid: bool,
}

/// Slack per unit of `n |h2|`.
pub const THEOREM2_SLACK: f64 = 3.0;

pub fn theorem2_check(model: &CorrelatedModel) -> Result<Theorem2Report> {
    let chi = model.logical_chi()?;
    let chi_xx = chi.get(1, 1).re;
    let chi_xi = chi.get(1, 0);
    let n = model.n as f64;
    let rhs = 2.0 * n / (n + 1.0) * model.t1().abs() * chi_xi.norm();
    let tolerance = THEOREM2_SLACK * n * model.h2.abs();
    Ok(Theorem2Report {
        chi_xx,
        chi_xi,
        rhs,
        tolerance,
        margin: chi_xx / rhs - 1.0,
        holds: chi_xx >= rhs * (1.0 - tolerance),
        collisionless_valid: model.collisionless_valid(),
    })
}

/// One even order `q` of the collisionless expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderTerm {
    pub q: u64,
    /// `|Omega(q)|`; `None` above `q = m`.
    pub omega: Option<f64>,
    pub delta: f64,
    /// `Omega(q) / Delta(q)`; `None` above `q = m`.
    pub ratio: Option<f64>,
    /// `(n+1)/(2n) - ratio`.
    pub bound_margin: Option<f64>,
    /// `|Omega(q)| t2^q t1^(n-2q)` times the suppressed prefactor.
    pub coherent_term: f64,
    /// `Delta(q) t2^q t1^(n+1-2q)` times the suppressed prefactor.
    pub incoherent_term: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionlessPrediction {
    pub chi_xi: C64,
    /// Leading-order incoherent component (higher orders are non-negative).
    pub chi_xx: f64,
    pub terms: Vec<OrderTerm>,
    /// `sum_q Omega(q) (t2/t1^2)^q / Omega(0)`.
    pub enhancement: f64,
    /// `exp(m^3 t2^2 / t1^4)`, the large-`m` resummation of `enhancement`.
    pub enhancement_exp: f64,
}

/// Exact-rational pair counts summed against the couplings.
pub fn collisionless_prediction(model: &CorrelatedModel) -> Result<CollisionlessPrediction> {
    if model.h3 != 0.0 {
        bail!(InvalidArgument, "the pair-count expansion has no three-body term");
    }
    let n = model.n;
    let m = model.m() as u64;
    let (t1, t2) = (model.t1(), model.t2());
    let (c1, c2) = (model.h1.cos(), model.h2.cos());
    // |U| prefactor c1^n c2^{n(n-1)/2}, squared in the chi matrix
    let ln_pref = 2.0 * (n as f64 * c1.abs().ln() + (n * (n - 1) / 2) as f64 * c2.abs().ln());
    let pref = ln_pref.exp();
    let bound = (n as f64 + 1.0) / (2.0 * n as f64);
    let mut coh = KahanF64::new();
    let mut inc = KahanF64::new();
    let mut enh = KahanF64::new();
    let omega0 = to_f64(&omega_closed(0, n)?);
    let mut terms = Vec::new();
    for q in (0..=m + 1).step_by(2) {
        let d = to_f64(&delta_closed(q, n)?);
        let incoherent_term = pref * d * t2.powi(q as i32) * t1.powi((n as u64 + 1 - 2 * q) as i32);
        inc.add(incoherent_term);
        let (omega_f, ratio, margin, coherent_term) = if q <= m {
            let o = to_f64(&omega_closed(q, n)?);
            let r = to_f64(&omega_delta_ratio(q, n)?);
            let term = pref * o * t2.powi(q as i32) * t1.powi((n as u64 - 2 * q) as i32);
            coh.add(term);
            enh.add(o / omega0 * (t2 / (t1 * t1)).powi(q as i32));
            (Some(o), Some(r), Some(bound - r), term)
        } else {
            (None, None, None, 0.0)
        };
        terms.push(OrderTerm {
            q,
            omega: omega_f,
            delta: d,
            ratio,
            bound_margin: margin,
            coherent_term,
            incoherent_term,
        });
    }
    let mf = m as f64;
    Ok(CollisionlessPrediction {
        chi_xi: C64::new(0.0, -coh.value()),
        chi_xx: inc.value(),
        terms,
        enhancement: enh.value(),
        enhancement_exp: (mf * mf * mf * t2 * t2 / (t1 * t1 * t1 * t1)).exp(),
    })
}
