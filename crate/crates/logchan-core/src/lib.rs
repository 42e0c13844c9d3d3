//! Logical channels of small stabilizer codes under coherent noise.
//!
//! The crate is `no_std` with `alloc`. Enable the `parallel` feature to run
//! the large enumerations on a rayon pool; chunking and reduction order are
//! fixed, so results do not depend on the worker count.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod channel;
pub mod correlated;
pub mod error;
pub mod numeric;
pub mod par;
pub mod pauli;
pub mod repcode;
pub mod toric;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
