//! Exact arithmetic in `F_q[t]` and the machinery for studying gaps between
//! irreducible polynomials with a prescribed primitive root.

pub mod budget;
pub mod error;
pub mod experiments;
pub mod factorizer;
pub mod ffcore;
pub mod geometry;
pub mod primroots;
pub mod sieve;
pub mod symbols;

pub use budget::Budget;
pub use error::{Error, Result};
