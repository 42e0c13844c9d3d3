//! Exact counting behind the one- plus two-body correlated model.

use alloc::vec::Vec;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{bail, Result};
use crate::numeric::exact::{binomial, binomial_i, factorial, inv_factorial_i, pochhammer, sign, GaussRat};
use crate::numeric::poly::Poly;

/// An exact value `i^phase * magnitude`. The magnitude may be negative or zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Phased {
    pub phase: u8,
    pub magnitude: BigRational,
}

impl Phased {
    pub fn new(phase: u8, magnitude: BigRational) -> Self {
        Self { phase: phase & 3, magnitude }
    }

    pub fn value(&self) -> GaussRat {
        GaussRat::from_phased(self.phase, self.magnitude.clone())
    }
}

/// Ways to split `2p` items into `p` unordered pairs: `(2p)! / (2^p p!)`.
pub fn kappa(p: u64) -> BigUint {
    factorial(2 * p) / (BigUint::one() << p) / factorial(p)
}

fn rat(x: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn half_width(n: usize) -> Result<u64> {
    if n.is_multiple_of(2) {
        bail!(InvalidArgument, "code length must be odd, got {n}");
    }
    Ok((n as u64 - 1) / 2)
}

/// Coherent-component weight with `q - kr` pair terms on the left and `kr`
/// on the right, summed over single-body placements. Needs `kr <= q <= m`.
pub fn omega(q: u64, kr: u64, n: usize) -> Result<Phased> {
    let m = half_width(n)?;
    if kr > q || q > m {
        bail!(OutOfRange, "omega needs kr <= q <= m, got q={q} kr={kr} m={m}");
    }
    let kl = q - kr;
    let n = n as u64;
    let mut mag = BigInt::from(binomial(n, 2 * kl) * binomial(n - 2 * kl, 2 * kr) * kappa(kl) * kappa(kr));
    mag *= binomial_i((n - 2 * q) as i64 - 1, m as i64 - 2 * kr as i64);
    mag *= sign(kr as i64) * sign(m as i64);
    Ok(Phased::new(((n + 4 * q - q) % 4) as u8, BigRational::from_integer(mag)))
}

/// Leading incoherent-component weight with `q - kr` pair terms on the left
/// and `kr` on the right. Needs `kr <= q <= m + 1`.
pub fn delta(q: u64, kr: u64, n: usize) -> Result<Phased> {
    let m = half_width(n)?;
    if kr > q || q > m + 1 {
        bail!(OutOfRange, "delta needs kr <= q <= m+1, got q={q} kr={kr} m={m}");
    }
    let kl = q - kr;
    let mag = binomial(n as u64, m) * binomial(m + 1, 2 * kl) * binomial(m + 1, 2 * kr) * kappa(kl) * kappa(kr);
    // i^(m+1-kl) (-i)^(m+1-kr) = i^(kr - kl)
    let phase = ((4 * q + kr - kl) % 4) as u8;
    Ok(Phased::new(phase, rat(mag)))
}

/// `omega` with the `q`-only factor pulled out, as a product of factorials.
pub fn omega_factored(q: u64, kr: u64, n: usize) -> Result<Phased> {
    let m = half_width(n)?;
    if kr > q || q > m {
        bail!(OutOfRange, "omega needs kr <= q <= m, got q={q} kr={kr} m={m}");
    }
    let n64 = n as u64;
    let pref = BigRational::new(BigInt::from(m + 1), BigInt::from((n64 - 2 * q) << q))
        * rat(binomial(n64, m))
        * rat(factorial(m) * factorial(m))
        / rat(factorial(2 * m - 2 * q) * factorial(q));
    let inner = sign(kr as i64)
        * sign(m as i64)
        * binomial_i(2 * (m - q) as i64, m as i64 - 2 * kr as i64)
        * BigInt::from(binomial(q, kr));
    Ok(Phased::new(((n64 + 3 * q) % 4) as u8, pref * BigRational::from_integer(inner)))
}

/// `delta` in factored form. The printed phase of this form is `i^q`; the
/// raw count carries `i^(-q)`, which agrees for the even `q` that survive.
pub fn delta_factored(q: u64, kr: u64, n: usize) -> Result<Phased> {
    let m = half_width(n)?;
    if kr > q || q > m + 1 {
        bail!(OutOfRange, "delta needs kr <= q <= m+1, got q={q} kr={kr} m={m}");
    }
    let pref = rat(binomial(n as u64, m)) * rat(factorial(m + 1) * factorial(m + 1))
        / rat((factorial(2 * m + 2 - 2 * q) * factorial(q)) << q);
    let inner = sign(kr as i64)
        * binomial_i(2 * (m + 1 - q) as i64, m as i64 + 1 - 2 * kr as i64)
        * BigInt::from(binomial(q, kr));
    Ok(Phased::new((q % 4) as u8, pref * BigRational::from_integer(inner)))
}

/// `Omega(q) = sum_kr omega(q, kr, n)`, exactly.
pub fn omega_sum(q: u64, n: usize) -> Result<GaussRat> {
    let mut acc = GaussRat::zero();
    for kr in 0..=q {
        acc.add_assign(&omega(q, kr, n)?.value());
    }
    Ok(acc)
}

/// `Delta(q) = sum_kr delta(q, kr, n)`, exactly.
pub fn delta_sum(q: u64, n: usize) -> Result<GaussRat> {
    let mut acc = GaussRat::zero();
    for kr in 0..=q {
        acc.add_assign(&delta(q, kr, n)?.value());
    }
    Ok(acc)
}

fn check_even(q: u64) -> Result<()> {
    if q % 2 == 1 {
        bail!(InvalidArgument, "closed forms need even q, got {q}");
    }
    Ok(())
}

/// Closed form of `Omega(q)` for even `q`; the value is `i` times this.
pub fn omega_closed(q: u64, n: usize) -> Result<BigRational> {
    check_even(q)?;
    let m = half_width(n)?;
    if q > m {
        bail!(OutOfRange, "need q <= m = {m}, got {q}");
    }
    Ok(rat(factorial(2 * m - q) * factorial(m + 1) * binomial(n as u64, m))
        / rat((factorial(m - q / 2) * factorial(q / 2) * factorial(2 * m + 1 - 2 * q)) << q))
}

/// Closed form of `Delta(q)` for even `q` (a positive real number).
pub fn delta_closed(q: u64, n: usize) -> Result<BigRational> {
    check_even(q)?;
    let m = half_width(n)?;
    if q > m + 1 {
        bail!(OutOfRange, "need q <= m + 1 = {}, got {q}", m + 1);
    }
    Ok(rat(factorial(2 * m + 2 - q) * factorial(m + 1) * binomial(n as u64, m))
        / rat((factorial(m + 1 - q / 2) * factorial(q / 2) * factorial(2 * m + 2 - 2 * q)) << q))
}

/// `Omega(q) / Delta(q)` from the exact sums, for even `q <= m`.
pub fn omega_delta_ratio(q: u64, n: usize) -> Result<BigRational> {
    check_even(q)?;
    let m = half_width(n)?;
    if q > m {
        bail!(OutOfRange, "ratio needs q <= m = {m}, got {q}");
    }
    let o = omega_sum(q, n)?;
    let d = delta_sum(q, n)?;
    debug_assert!(o.re.is_zero() && d.im.is_zero());
    Ok(o.im / d.re)
}

/// The simplified ratio `(n + 1 - 2q) / (2n - 2q)`.
pub fn ratio_formula(q: u64, n: usize) -> BigRational {
    let (q, n) = (q as i64, n as i64);
    BigRational::new(BigInt::from(n + 1 - 2 * q), BigInt::from(2 * n - 2 * q))
}

/// Both sides of the alternating sum
/// `sum_k (-1)^k C(2m-2q, m-2k) C(q, k) = (-1)^(q/2) (2m-q)! q! / ((m-q/2)! (q/2)! m!)`.
pub fn dixon_sum(m: u64, q: u64) -> Result<(BigInt, BigRational)> {
    check_even(q)?;
    if q > m {
        bail!(OutOfRange, "need q <= m, got q={q} m={m}");
    }
    let lhs = (0..=q).fold(BigInt::zero(), |acc, k| {
        acc + sign(k as i64) * binomial_i(2 * (m - q) as i64, m as i64 - 2 * k as i64) * BigInt::from(binomial(q, k))
    });
    let rhs = BigRational::from_integer(sign((q / 2) as i64)) * rat(factorial(2 * m - q) * factorial(q))
        / rat(factorial(m - q / 2) * factorial(q / 2) * factorial(m));
    Ok((lhs, rhs))
}

fn non_positive_integer(x: &BigRational) -> Option<u64> {
    use num_traits::ToPrimitive;
    (x.is_integer() && !x.is_positive()).then(|| (-x.to_integer()).to_u64()).flatten()
}

/// Terminating `3F2(a, b, c; d, e; 1)` as a finite sum of Pochhammer ratios.
pub fn hypergeometric_3f2_terminating(
    a: &BigRational,
    b: &BigRational,
    c: &BigRational,
    d: &BigRational,
    e: &BigRational,
) -> Result<BigRational> {
    let Some(len) = [a, b, c].into_iter().filter_map(non_positive_integer).min() else {
        bail!(InvalidArgument, "3F2 does not terminate: no non-positive integer among upper parameters");
    };
    let mut acc = BigRational::zero();
    for k in 0..=len {
        let den = pochhammer(d, k) * pochhammer(e, k);
        if den.is_zero() {
            bail!(InvalidArgument, "lower parameter hits a pole at k = {k} before termination at {len}");
        }
        let num = pochhammer(a, k) * pochhammer(b, k) * pochhammer(c, k);
        acc += num / (den * rat(factorial(k)));
    }
    Ok(acc)
}

/// `sum_{b=0}^{a} (-1)^b b^c C(a, b)`: zero for `c < a`, `(-1)^a a!` at `c = a`.
pub fn alternating_power_sum(a: u64, c: u32) -> BigInt {
    (0..=a).fold(BigInt::zero(), |acc, b| acc + sign(b as i64) * BigInt::from(b).pow(c) * BigInt::from(binomial(a, b)))
}

/// Expansion of the `kr`-dependent factor of the coherent weight in powers of `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct CancellationCensus {
    pub q: u64,
    /// `per_kr[kr][r]`: coefficient of `m^(2q-r)` in
    /// `falling(m, 2kr) falling(m, 2q-2kr) / q!` (before the sign and binomial).
    pub per_kr: Vec<Vec<BigRational>>,
    /// `summed[r] = sum_kr (-1)^kr C(q, kr) per_kr[kr][r]`.
    pub summed: Vec<BigRational>,
    /// Every `summed[r]` with `2r < q` is zero.
    pub cancels: bool,
    /// Surviving coefficient of `m^(3q/2)`.
    pub leading: BigRational,
    /// `(-1)^(q/2) 2^q / (q/2)!`, which the `q`-only prefactor turns into
    /// the `m^(3q/2) / (q/2)!` growth of `Omega(q) / Omega(0)`.
    pub expected_leading: BigRational,
}

/// `sum_kr (-1)^kr falling(m,2kr) falling(m,2q-2kr) / (kr! (q-kr)!)` as a polynomial in `m`.
pub fn census_polynomial(q: u64) -> Poly {
    (0..=q).fold(Poly::zero(), |acc, k| {
        let c = BigRational::from_integer(sign(k as i64)) * inv_factorial_i(k as i64) * inv_factorial_i((q - k) as i64);
        let term = &Poly::falling(1, 0, 2 * k) * &Poly::falling(1, 0, 2 * q - 2 * k);
        &acc + &term.scale(&c)
    })
}

/// Check the cancellation of powers `m^(2q-r)` for `2r < q` and report the
/// surviving coefficient of `m^(3q/2)`. `r_max` bounds the reported columns.
pub fn cancellation_census(q: u64, r_max: u64) -> Result<CancellationCensus> {
    check_even(q)?;
    let r_max = r_max.max(q / 2).min(2 * q);
    let qf = rat(factorial(q));
    let mut per_kr = Vec::new();
    let mut summed = alloc::vec![BigRational::zero(); r_max as usize + 1];
    for k in 0..=q {
        let p = &Poly::falling(1, 0, 2 * k) * &Poly::falling(1, 0, 2 * q - 2 * k);
        let row: Vec<BigRational> = (0..=r_max).map(|r| p.coeff((2 * q - r) as usize) / &qf).collect();
        let w = BigRational::from_integer(sign(k as i64) * BigInt::from(binomial(q, k)));
        for (s, c) in summed.iter_mut().zip(&row) {
            *s += &w * c;
        }
        per_kr.push(row);
    }
    let cancels = summed.iter().take(q.div_ceil(2) as usize).all(Zero::is_zero);
    let leading = summed[(q / 2) as usize].clone();
    let expected_leading =
        BigRational::from_integer(sign((q / 2) as i64) * (BigInt::one() << q)) * inv_factorial_i((q / 2) as i64);
    Ok(CancellationCensus { q, per_kr, summed, cancels, leading, expected_leading })
}
