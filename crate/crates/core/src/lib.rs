//! Finite loops with involution and the Cayley-Dickson doubling process.
//!
//! Loops are dense Cayley tables with the identity at index 0. On top of the
//! table type the crate provides involution classification, doubling,
//! property checks, automorphism groups, and a small term language for
//! identities.

pub mod analysis;
pub mod automorphism;
pub mod catalog;
pub mod doubling;
pub mod f2;
pub mod involution;
pub mod io;
pub mod loops;
pub mod terms;

pub use analysis::{AnalysisError, PropertyReport};
pub use automorphism::{AutError, AutGroup, Flavor};
pub use doubling::{DoubleResult, DoublingError, DoublingParams};
pub use involution::{Involution, InvolutionError, InvolutionReport};
pub use loops::{ElemId, LoopError, LoopTable, Side, StructureReport, SubloopHandle};
pub use terms::{Identity, Term, TermError};
