//! Site representations, the chain, graded operators and the barred
//! operators built from them.

pub mod barred;
pub mod cache;
pub mod chain;
pub mod gate;
pub mod operator;
pub mod site;

pub use barred::{build_barred_ops, Barred, BarredOps};
pub use chain::{ChainContext, ChainGenerators, Generator};
pub use gate::{chain_self_check, rep_self_check, GateMode};
pub use operator::{GradedOperator, Layout};
pub use site::{build_site_rep, SiteKind, SiteRep};
