//! Numerical building blocks shared by the channel and code modules.

pub mod exact;
pub mod kahan;
pub mod linalg;
pub mod poly;

pub use kahan::{KahanC64, KahanF64};
