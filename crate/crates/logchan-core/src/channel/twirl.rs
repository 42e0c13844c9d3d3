//! Group averages of a transfer matrix over Pauli and Clifford conjugations.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::Ptm;
use crate::error::{bail, Result};
use crate::numeric::linalg::RMat;

/// Action of a Clifford (or Pauli) on the Hermitian Pauli basis:
/// `C P_b C^dag = sign_b P_{perm_b}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPermutation {
    pub image: Vec<(u16, i8)>,
}

impl SignedPermutation {
    pub fn identity(d2: usize) -> Self {
        Self { image: (0..d2).map(|b| (b as u16, 1)).collect() }
    }

    /// `self` after `other`.
    pub fn after(&self, other: &Self) -> Self {
        Self {
            image: other
                .image
                .iter()
                .map(|&(t, s)| {
                    let (t2, s2) = self.image[t as usize];
                    (t2, s * s2)
                })
                .collect(),
        }
    }

    fn from_fn(n: usize, f: impl Fn(&mut [bool], &mut [bool]) -> bool) -> Self {
        let d2 = 1usize << (2 * n);
        let image = (0..d2)
            .map(|b| {
                let mut x = alloc::vec![false; n];
                let mut z = alloc::vec![false; n];
                for q in 0..n {
                    let digit = (b >> (2 * (n - 1 - q))) & 3;
                    x[q] = digit == 1 || digit == 2;
                    z[q] = digit == 2 || digit == 3;
                }
                let flip = f(&mut x, &mut z);
                let t = (0..n).fold(0usize, |acc, q| (acc << 2) | crate::pauli::basis_digit(x[q], z[q]) as usize);
                (t as u16, if flip { -1 } else { 1 })
            })
            .collect();
        Self { image }
    }

    pub fn hadamard(n: usize, q: usize) -> Self {
        Self::from_fn(n, |x, z| {
            let flip = x[q] && z[q];
            core::mem::swap(&mut x[q], &mut z[q]);
            flip
        })
    }

    pub fn phase(n: usize, q: usize) -> Self {
        Self::from_fn(n, |x, z| {
            let flip = x[q] && z[q];
            z[q] ^= x[q];
            flip
        })
    }

    pub fn cnot(n: usize, c: usize, t: usize) -> Self {
        Self::from_fn(n, |x, z| {
            let flip = x[c] && z[t] && !(x[t] ^ z[c]);
            x[t] ^= x[c];
            z[c] ^= z[t];
            flip
        })
    }

    /// Conjugation by the Pauli with basis index `p`.
    pub fn pauli(n: usize, p: usize) -> Self {
        let d2 = 1usize << (2 * n);
        let table = super::PauliTable::new(n);
        Self {
            image: (0..d2)
                .map(|b| {
                    let (_, e1) = table.mul(p, b);
                    let (_, e2) = table.mul(b, p);
                    (b as u16, if e1 == e2 { 1 } else { -1 })
                })
                .collect(),
        }
    }
}

/// All signed permutations generated by Hadamard, phase and CNOT gates.
pub fn clifford_group(n: usize) -> Result<Vec<SignedPermutation>> {
    if n == 0 || n > 2 {
        bail!(OutOfRange, "Clifford group enumeration supports 1 or 2 qubits, got {n}");
    }
    let mut gens = Vec::new();
    for q in 0..n {
        gens.push(SignedPermutation::hadamard(n, q));
        gens.push(SignedPermutation::phase(n, q));
        for t in 0..n {
            if t != q {
                gens.push(SignedPermutation::cnot(n, q, t));
            }
        }
    }
    let start = SignedPermutation::identity(1 << (2 * n));
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(g) = queue.pop_front() {
        for h in &gens {
            let next = h.after(&g);
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// `(1/|G|) sum_g T_g N T_g^{-1}`.
pub fn twirl(n: &Ptm, group: &[SignedPermutation]) -> Result<Ptm> {
    let d2 = n.dim2();
    let mut acc = RMat::zeros(d2, d2);
    for g in group {
        for a in 0..d2 {
            let (ta, sa) = g.image[a];
            for b in 0..d2 {
                let (tb, sb) = g.image[b];
                acc[(ta as usize, tb as usize)] += (sa * sb) as f64 * n.get(a, b);
            }
        }
    }
    Ptm::new(n.n(), acc / group.len() as f64)
}

pub fn pauli_twirl(n: &Ptm) -> Result<Ptm> {
    let group: Vec<SignedPermutation> = (0..n.dim2()).map(|p| SignedPermutation::pauli(n.n(), p)).collect();
    twirl(n, &group)
}

pub fn clifford_twirl(n: &Ptm) -> Result<Ptm> {
    twirl(n, &clifford_group(n.n())?)
}
