use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use super::lattice::TorusLattice;
use super::table::{standard_error_table, MatchingDecoder, ToricDecoder, TABLE_L};
use crate::error::{bail, Result};
use crate::pauli::{Bits, PauliOp, StabilizerCode, StandardErrors};

/// Standard errors of the toric code from a two-sector decoder.
///
/// The code's syndrome lists the `L^2 - 1` independent plaquettes first
/// (they detect X errors) and then the `L^2 - 1` independent stars. The
/// dropped last generator of each kind is restored from parity.
pub struct ToricStandardErrors {
    decoder: Box<dyn ToricDecoder>,
}

impl ToricStandardErrors {
    pub fn new(decoder: Box<dyn ToricDecoder>) -> Self {
        Self { decoder }
    }
}

fn defects(bits: &Bits, offset: usize, count: usize) -> Vec<usize> {
    let mut out: Vec<usize> = (0..count - 1).filter(|&i| bits.get(offset + i)).collect();
    if out.len() % 2 == 1 {
        out.push(count - 1);
    }
    out
}

impl StandardErrors for ToricStandardErrors {
    fn standard_error(&self, s: &Bits) -> Result<PauliOp> {
        let lat = *self.decoder.lattice();
        let v = lat.n_vertices();
        if s.len() != 2 * (v - 1) {
            bail!(IncompleteTable, "syndrome length {} for L = {}", s.len(), lat.l());
        }
        let x = self.decoder.decode_x(&defects(s, 0, v))?;
        let z = self.decoder.decode_z(&defects(s, v - 1, v))?;
        let n = lat.n_qubits();
        PauliOp::hermitian(Bits::from_indices(n, x), Bits::from_indices(n, z))
    }
}

/// Default decoder: the exhaustive table at `L = 3`, exhaustive pairing
/// otherwise.
pub fn default_decoder(lattice: TorusLattice) -> Result<Box<dyn ToricDecoder>> {
    if lattice.l() == TABLE_L {
        Ok(Box::new(standard_error_table(TABLE_L)?))
    } else {
        Ok(Box::new(MatchingDecoder::new(lattice)))
    }
}

/// The `L x L` toric code with plaquette Z generators, star X generators
/// (last of each dropped) and straight-string logical operators.
pub fn build_code(l: usize) -> Result<(TorusLattice, StabilizerCode)> {
    let lattice = TorusLattice::new(l)?;
    let decoder = default_decoder(lattice)?;
    let code = build_code_with(lattice, decoder)?;
    Ok((lattice, code))
}

pub fn build_code_with(lattice: TorusLattice, decoder: Box<dyn ToricDecoder>) -> Result<StabilizerCode> {
    let n = lattice.n_qubits();
    let v = lattice.n_vertices();
    let mut gens = Vec::with_capacity(2 * (v - 1));
    for p in 0..v - 1 {
        gens.push(PauliOp::z_string(n, lattice.plaquette(p)));
    }
    for s in 0..v - 1 {
        gens.push(PauliOp::x_string(n, lattice.star(s)));
    }
    let x_bar = vec![PauliOp::x_string(n, lattice.x1_support()), PauliOp::x_string(n, lattice.x2_support())];
    let z_bar = vec![PauliOp::z_string(n, lattice.z1_support()), PauliOp::z_string(n, lattice.z2_support())];
    StabilizerCode::new(gens, x_bar, z_bar, Box::new(ToricStandardErrors::new(decoder)))
}
