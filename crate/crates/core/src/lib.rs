//! Exact verification of higher-order Serre relations for loop generators
//! built on spin chains at roots of unity.

pub mod bank;
pub mod check;
pub mod divpow;
pub mod error;
pub mod explain;
pub mod int;
pub mod qcomb;
pub mod repchain;
pub mod runner;
pub mod scalar;
pub mod serre;
pub mod terms;

pub use check::{IdentityCheck, Status, Witness};
pub use error::{Error, Result};
pub use int::Int;
