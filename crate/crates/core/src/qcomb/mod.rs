//! Exact scalar rings and q-combinatorics.

pub mod cyclo;
pub mod laurent;
pub mod lemmas;
pub mod phiadic;
pub mod qnum;

pub use cyclo::{CycloElem, CycloRing};
pub use laurent::LaurentPoly;
pub use phiadic::{PhiAdicElem, PhiAdicRing};
pub use qnum::{gauss_binomial, omega_factorial, q_factorial, q_int, Flavor};
