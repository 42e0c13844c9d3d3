//! Exact integer and rational helpers built on `num-bigint`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `n!` exactly.
pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` for signed arguments: zero unless `0 <= k <= n`.
pub fn binomial_i(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        BigInt::zero()
    } else {
        BigInt::from(binomial(n as u64, k as u64))
    }
}

/// `1 / x!` for a signed argument, zero for negative `x` (the reciprocal gamma
/// function vanishes at the poles).
pub fn inv_factorial_i(x: i64) -> BigRational {
    if x < 0 {
        BigRational::zero()
    } else {
        BigRational::new(BigInt::one(), BigInt::from(factorial(x as u64)))
    }
}

/// `x!` as a rational, for non-negative `x`.
pub fn factorial_q(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(factorial(x)))
}

/// Falling factorial `x (x-1) ... (x-k+1)` over the integers.
pub fn falling(x: i64, k: u64) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, j| acc * (x - j))
}

/// Rising factorial (Pochhammer symbol) `(a)_k` over the rationals.
pub fn pochhammer(a: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut cur = a.clone();
    for _ in 0..k {
        acc *= &cur;
        cur += BigRational::one();
    }
    acc
}

/// `(-1)^k` as a big integer.
pub fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// A Gaussian rational `re + i im`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `i^phase * mag`.
    pub fn from_phased(phase: u8, mag: BigRational) -> Self {
        let z = BigRational::zero();
        match phase & 3 {
            0 => Self { re: mag, im: z },
            1 => Self { re: z, im: mag },
            2 => Self { re: -mag, im: z },
            _ => Self { re: z, im: -mag },
        }
    }

    /// Write as `i^phase * mag` with `mag >= 0`, when the value lies on an axis.
    pub fn to_phased(&self) -> Option<(u8, BigRational)> {
        let zero = BigRational::zero();
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => Some((0, zero)),
            (false, true) if self.re > zero => Some((0, self.re.clone())),
            (false, true) => Some((2, -self.re.clone())),
            (true, false) if self.im > zero => Some((1, self.im.clone())),
            (true, false) => Some((3, -self.im.clone())),
            _ => None,
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }

    pub fn to_c64(&self) -> crate::C64 {
        crate::C64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(5, 7), BigUint::zero());
        assert_eq!(factorial(6), BigUint::from(720u32));
        assert_eq!(falling(5, 3), BigInt::from(60));
        assert_eq!(falling(2, 3), BigInt::zero());
        assert_eq!(pochhammer(&q(-2), 3), q(0));
        assert_eq!(pochhammer(&qq(1, 2), 2), qq(3, 4));
        assert_eq!(binomial_i(4, -1), BigInt::zero());
    }

    #[test]
    fn phased_round_trip() {
        for p in 0..4u8 {
            let g = GaussRat::from_phased(p, qq(3, 7));
            assert_eq!(g.to_phased(), Some((p, qq(3, 7))));
        }
    }
}
