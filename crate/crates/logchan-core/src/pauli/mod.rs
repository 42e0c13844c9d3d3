//! Pauli operators with exact phase tracking, and stabilizer codes.

mod bits;
mod code;
mod op;

pub use bits::Bits;
pub use code::{Decomposition, StabilizerCode, StandardErrors};
pub use op::{basis_digit, basis_index, single_qubit_product, PauliOp};
