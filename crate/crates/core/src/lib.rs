//! Generalized inverses in rings: the (b,c)-inverse and its relatives over
//! exact finite rings, rational matrices and floating-point matrices.

pub mod banach;
pub mod error;
pub mod exec;
pub mod inverse;
pub mod lab;
pub mod ring;

pub use error::{Error, Result};
pub use exec::Execution;
