use alloc::boxed::Box;
use alloc::vec::Vec;

use super::{Bits, PauliOp};
use crate::error::{bail, Error, Result};

/// Source of standard errors: one fixed Pauli per syndrome.
pub trait StandardErrors: Send + Sync {
    /// A Pauli whose syndrome is `s`.
    fn standard_error(&self, s: &Bits) -> Result<PauliOp>;
}

/// Result of writing `P = i^eta * E_s * L_a * G_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub syndrome: Bits,
    /// Logical basis index over the `k` logical qubits (I0 X1 Y2 Z3 digits).
    pub logical: usize,
    /// Which generators enter the ordered product `G_x`.
    pub stabilizer: Bits,
    pub eta: u8,
}

/// Reduced row basis used to express stabilizer elements in generators.
#[derive(Debug, Clone)]
struct Gf2Basis {
    /// `(pivot column, row over 2n columns, combination over generators)`
    rows: Vec<(usize, Bits, Bits)>,
}

impl Gf2Basis {
    fn new(gens: &[PauliOp]) -> Result<Self> {
        let n = gens.first().map_or(0, PauliOp::n);
        let r = gens.len();
        let mut rows: Vec<(usize, Bits, Bits)> = Vec::new();
        for (i, g) in gens.iter().enumerate() {
            let mut v = symplectic(g, n);
            let mut comb = Bits::zeros(r);
            comb.flip(i);
            for (p, row, c) in &rows {
                if v.get(*p) {
                    v.xor_assign(row);
                    comb.xor_assign(c);
                }
            }
            let pivot = v.ones().next();
            match pivot {
                Some(p) => {
                    // keep the basis fully reduced on pivot columns
                    for (_, row, c) in rows.iter_mut() {
                        if row.get(p) {
                            row.xor_assign(&v);
                            c.xor_assign(&comb);
                        }
                    }
                    rows.push((p, v, comb));
                }
                None => bail!(InvalidArgument, "generator {i} is dependent on earlier generators"),
            }
        }
        Ok(Self { rows })
    }

    fn solve(&self, target: &PauliOp, r: usize) -> Option<Bits> {
        let mut v = symplectic(target, target.n());
        let mut comb = Bits::zeros(r);
        for (p, row, c) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                comb.xor_assign(c);
            }
        }
        v.is_zero().then_some(comb)
    }
}

fn symplectic(p: &PauliOp, n: usize) -> Bits {
    Bits::from_indices(2 * n, p.x_bits().ones().chain(p.z_bits().ones().map(|q| q + n)))
}

/// A stabilizer code with fixed logical representatives and standard errors.
pub struct StabilizerCode {
    n: usize,
    k: usize,
    generators: Vec<PauliOp>,
    x_bar: Vec<PauliOp>,
    z_bar: Vec<PauliOp>,
    logicals: Vec<PauliOp>,
    basis: Gf2Basis,
    table: Box<dyn StandardErrors>,
}

impl core::fmt::Debug for StabilizerCode {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("StabilizerCode")
            .field("n", &self.n)
            .field("k", &self.k)
            .field("generators", &self.generators.len())
            .finish()
    }
}

impl StabilizerCode {
    /// Checks independence and all commutation relations before accepting.
    pub fn new(
        generators: Vec<PauliOp>,
        x_bar: Vec<PauliOp>,
        z_bar: Vec<PauliOp>,
        table: Box<dyn StandardErrors>,
    ) -> Result<Self> {
        let n = generators.first().map_or(0, PauliOp::n);
        let k = x_bar.len();
        if z_bar.len() != k {
            return Err(Error::Dimension(k, z_bar.len()));
        }
        if generators.len() + k != n {
            bail!(InvalidArgument, "{} generators and {k} logical qubits do not fill {n} qubits", generators.len());
        }
        for g in generators.iter().chain(&x_bar).chain(&z_bar) {
            if g.n() != n {
                return Err(Error::Dimension(n, g.n()));
            }
            if !g.is_hermitian() {
                bail!(InvalidArgument, "{g} is not Hermitian");
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes_with(b) {
                    bail!(InvalidArgument, "generators {a} and {b} anticommute");
                }
            }
            for l in x_bar.iter().chain(&z_bar) {
                if !a.commutes_with(l) {
                    bail!(InvalidArgument, "generator {a} anticommutes with logical {l}");
                }
            }
        }
        for i in 0..k {
            for j in 0..k {
                let anti_xz = !x_bar[i].commutes_with(&z_bar[j]);
                if anti_xz != (i == j) || !x_bar[i].commutes_with(&x_bar[j]) || !z_bar[i].commutes_with(&z_bar[j]) {
                    bail!(InvalidArgument, "logical operators {i},{j} have the wrong commutation");
                }
            }
        }
        let basis = Gf2Basis::new(&generators)?;
        let logicals = (0..1usize << (2 * k)).map(|a| logical_rep(&x_bar, &z_bar, n, a)).collect();
        Ok(Self { n, k, generators, x_bar, z_bar, logicals, basis, table })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generators(&self) -> &[PauliOp] {
        &self.generators
    }

    pub fn x_bar(&self) -> &[PauliOp] {
        &self.x_bar
    }

    pub fn z_bar(&self) -> &[PauliOp] {
        &self.z_bar
    }

    /// The Hermitian logical representative `L_a`.
    pub fn logical(&self, a: usize) -> &PauliOp {
        &self.logicals[a]
    }

    pub fn syndrome(&self, p: &PauliOp) -> Bits {
        let mut s = Bits::zeros(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if !g.commutes_with(p) {
                s.flip(i);
            }
        }
        s
    }

    /// Standard error for a syndrome, normalised to its Hermitian phase.
    pub fn standard_error(&self, s: &Bits) -> Result<PauliOp> {
        let e = self.table.standard_error(s)?;
        if self.syndrome(&e) != *s {
            bail!(IncompleteTable, "standard error {e} does not carry syndrome {s:?}");
        }
        Ok(e.to_hermitian())
    }

    /// Logical class of an operator that commutes with every generator.
    pub fn logical_class(&self, r: &PauliOp) -> usize {
        let mut a = 0usize;
        for j in 0..self.k {
            let xb = !r.commutes_with(&self.z_bar[j]);
            let zb = !r.commutes_with(&self.x_bar[j]);
            a = (a << 2) | super::basis_digit(xb, zb) as usize;
        }
        a
    }

    /// Ordered product `g_0^{x_0} g_1^{x_1} ...`.
    pub fn stabilizer_element(&self, x: &Bits) -> PauliOp {
        x.ones().fold(PauliOp::identity(self.n), |acc, i| acc.mul(&self.generators[i]))
    }

    pub fn decompose(&self, p: &PauliOp) -> Result<Decomposition> {
        if p.n() != self.n {
            return Err(Error::Dimension(self.n, p.n()));
        }
        let syndrome = self.syndrome(p);
        let e = self.standard_error(&syndrome)?;
        // E is Hermitian, so E^2 = I and P = E (E P)
        let r = e.mul(p);
        let logical = self.logical_class(&r);
        let g = self.logicals[logical].mul(&r);
        let stabilizer = self
            .basis
            .solve(&g, self.generators.len())
            .ok_or_else(|| Error::IncompleteTable(alloc::format!("residual {g} is not a stabilizer")))?;
        let gx = self.stabilizer_element(&stabilizer);
        let eta = (g.phase_exp() + 4 - gx.phase_exp()) & 3;
        Ok(Decomposition { syndrome, logical, stabilizer, eta })
    }

    /// `i^eta * E_s * L_a * G_x`.
    pub fn recompose(&self, d: &Decomposition) -> Result<PauliOp> {
        let e = self.standard_error(&d.syndrome)?;
        let prod = e.mul(&self.logicals[d.logical]).mul(&self.stabilizer_element(&d.stabilizer));
        let phase = prod.phase_exp() + d.eta;
        Ok(prod.with_phase(phase))
    }
}

/// Hermitian product of logical X/Z bars for logical index `a`.
fn logical_rep(x_bar: &[PauliOp], z_bar: &[PauliOp], n: usize, a: usize) -> PauliOp {
    let k = x_bar.len();
    let mut acc = PauliOp::identity(n);
    for j in 0..k {
        let digit = (a >> (2 * (k - 1 - j))) & 3;
        let factor = match digit {
            0 => continue,
            1 => x_bar[j].clone(),
            3 => z_bar[j].clone(),
            _ => x_bar[j].mul(&z_bar[j]),
        };
        acc = acc.mul(&factor);
    }
    acc.to_hermitian()
}
