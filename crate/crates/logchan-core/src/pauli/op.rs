use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::Bits;
use crate::error::{bail, Error, Result};

/// An `n`-qubit Pauli operator `i^phase * X^x * Z^z`.
///
/// The phase is stored relative to the plain `X^x Z^z` product, so a
/// Hermitian `Y` on one qubit has `phase == 1` (`Y = i X Z`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOp {
    x: Bits,
    z: Bits,
    phase: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        Self { x: Bits::zeros(n), z: Bits::zeros(n), phase: 0 }
    }

    /// Build from raw masks and a phase exponent (taken mod 4).
    pub fn from_bits(x: Bits, z: Bits, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension(x.len(), z.len()));
        }
        Ok(Self { x, z, phase: phase & 3 })
    }

    /// The Hermitian operator with the given supports (each `Y` Hermitian).
    pub fn hermitian(x: Bits, z: Bits) -> Result<Self> {
        let y = x.and_count(&z);
        Self::from_bits(x, z, (y % 4) as u8)
    }

    /// Hermitian Z-type string on the listed qubits.
    pub fn z_string(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self { x: Bits::zeros(n), z: Bits::from_indices(n, qubits), phase: 0 }
    }

    /// Hermitian X-type string on the listed qubits.
    pub fn x_string(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self { x: Bits::from_indices(n, qubits), z: Bits::zeros(n), phase: 0 }
    }

    /// Hermitian single-qubit Pauli given by basis digit (0 I, 1 X, 2 Y, 3 Z).
    pub fn single(n: usize, qubit: usize, digit: u8) -> Self {
        let mut p = Self::identity(n);
        p.set_letter(qubit, digit);
        p
    }

    /// Hermitian basis element number `index` (qubit 0 is the most
    /// significant base-4 digit).
    pub fn from_basis_index(n: usize, index: usize) -> Self {
        let mut p = Self::identity(n);
        for q in 0..n {
            let digit = ((index >> (2 * (n - 1 - q))) & 3) as u8;
            p.set_letter(q, digit);
        }
        p
    }

    /// Replace the letter on `qubit`, keeping the operator Hermitian-canonical
    /// relative to its previous state.
    fn set_letter(&mut self, qubit: usize, digit: u8) {
        let had_y = self.x.get(qubit) && self.z.get(qubit);
        let (xb, zb) = match digit & 3 {
            0 => (false, false),
            1 => (true, false),
            2 => (true, true),
            _ => (false, true),
        };
        self.x.set(qubit, xb);
        self.z.set(qubit, zb);
        let dy = (xb && zb) as i8 - had_y as i8;
        self.phase = ((self.phase as i8 + dy).rem_euclid(4)) as u8;
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn x_bits(&self) -> &Bits {
        &self.x
    }

    #[inline]
    pub fn z_bits(&self) -> &Bits {
        &self.z
    }

    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    /// Number of `Y` factors, `|x AND z|`.
    pub fn y_count(&self) -> usize {
        self.x.and_count(&self.z)
    }

    /// Number of non-identity tensor factors.
    pub fn weight(&self) -> usize {
        self.x.or_count(&self.z)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Phase exponent relative to the Hermitian operator with the same support.
    pub fn text_phase(&self) -> u8 {
        ((self.phase as usize + 4 - self.y_count() % 4) % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.text_phase().is_multiple_of(2)
    }

    /// The same support with the phase reset to the Hermitian convention.
    pub fn to_hermitian(&self) -> Self {
        let mut p = self.clone();
        p.phase = (self.y_count() % 4) as u8;
        p
    }

    /// Basis digit on `qubit` (0 I, 1 X, 2 Y, 3 Z).
    pub fn letter(&self, qubit: usize) -> u8 {
        basis_digit(self.x.get(qubit), self.z.get(qubit))
    }

    /// Basis index of the support (phase ignored).
    pub fn basis_index(&self) -> usize {
        (0..self.n()).fold(0usize, |acc, q| (acc << 2) | self.letter(q) as usize)
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)).is_multiple_of(2)
    }

    /// Operator product `self * other` with exact phase.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.n() {
            return Err(Error::Dimension(self.n(), other.n()));
        }
        // Z^z1 X^x2 = (-1)^{|z1 & x2|} X^x2 Z^z1
        let swap = self.z.and_count(&other.x);
        let phase = ((self.phase as usize + other.phase as usize + 2 * swap) % 4) as u8;
        let mut x = self.x.clone();
        x.xor_assign(&other.x);
        let mut z = self.z.clone();
        z.xor_assign(&other.z);
        Ok(Self { x, z, phase })
    }

    /// Operator product; panics on a qubit-count mismatch.
    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("qubit count mismatch")
    }

    /// Letters only, no phase prefix.
    pub fn letters(&self) -> String {
        (0..self.n()).map(|q| ['I', 'X', 'Y', 'Z'][self.letter(q) as usize]).collect()
    }
}

/// Digit of a single-qubit support: I 0, X 1, Y 2, Z 3.
#[inline]
pub fn basis_digit(x: bool, z: bool) -> u8 {
    match (x, z) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

/// Basis index from per-qubit digits, qubit 0 most significant.
pub fn basis_index(digits: &[u8]) -> usize {
    digits.iter().fold(0usize, |acc, &d| (acc << 2) | d as usize)
}

/// Product of Hermitian single-qubit Paulis `P_a P_b = i^e P_c`, returned as
/// `(c, e)`.
#[inline]
pub fn single_qubit_product(a: u8, b: u8) -> (u8, u8) {
    const TABLE: [[(u8, u8); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 0), (3, 1), (2, 3)],
        [(2, 0), (3, 3), (0, 0), (1, 1)],
        [(3, 0), (2, 1), (1, 3), (0, 0)],
    ];
    TABLE[a as usize][b as usize]
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.text_phase() as usize];
        write!(f, "{}{}", prefix, self.letters())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PauliOp {
    type Err = Error;

    /// Accepts an optional prefix `+`, `-`, `+i`, `-i`, `i` (the Unicode
    /// minus sign is also accepted) followed by letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, rest) = if let Some(r) = s.strip_prefix('+') {
            (0u8, r)
        } else if let Some(r) = s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
            (2u8, r)
        } else {
            (0u8, s)
        };
        let (imag, body) = match rest.strip_prefix('i') {
            Some(r) => (1u8, r),
            None => (0u8, rest),
        };
        if body.is_empty() {
            bail!(Parse, "empty Pauli string {s:?}");
        }
        let digits: Vec<u8> = body
            .chars()
            .map(|c| match c {
                'I' => Ok(0),
                'X' => Ok(1),
                'Y' => Ok(2),
                'Z' => Ok(3),
                other => Err(Error::Parse(alloc::format!("unexpected character {other:?} in {s:?}"))),
            })
            .collect::<Result<_>>()?;
        let n = digits.len();
        let mut p = Self::identity(n);
        for (q, &d) in digits.iter().enumerate() {
            p.set_letter(q, d);
        }
        p.phase = (p.phase + sign + imag) & 3;
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(s: &str) -> PauliOp {
        s.parse().unwrap()
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        assert_eq!(p("X").mul(&p("Z")), p("-iY"));
        assert_eq!(p("Z").mul(&p("Z")), p("I"));
        assert_eq!(p("X").mul(&p("Y")), p("+iZ"));
        assert_eq!(p("Y").mul(&p("Z")), p("iX"));
        assert_eq!(p("Z").mul(&p("X")), p("iY"));
    }

    #[test]
    fn text_round_trip() {
        for s in ["+XYZI", "-iYY", "+iZ", "-IIX"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("\u{2212}iXY"), p("-iXY"));
        assert!("XQ".parse::<PauliOp>().is_err());
        assert!("".parse::<PauliOp>().is_err());
    }

    #[test]
    fn basis_index_order() {
        assert_eq!(PauliOp::from_basis_index(2, 0b01_11), p("XZ"));
        assert_eq!(p("YX").basis_index(), 0b10_01);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(p("X").try_mul(&p("XX")).is_err());
    }
}
