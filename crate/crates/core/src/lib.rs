//! Weighted analysis of conical operators on the six-dimensional cone over `S^5`,
//! bundle cohomology on `P^2`, and virtual-dimension counts for moduli of
//! conically singular deformations.

pub mod cone;
pub mod error;
pub mod fredholm;
pub mod moduli;
pub mod p2;
pub mod rate;
pub mod report;

pub use error::{Error, Result};
pub use rate::{Rate, RateKind, Window};
