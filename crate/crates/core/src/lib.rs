//! Probabilistic cyber-attribution reasoning: an environmental model of
//! probabilistic formulas over worlds, an analytical model of defeasible
//! arguments, and the bridge that links them.

pub mod am;
pub mod attribution;
pub mod bridge;
pub mod em;
pub mod error;
pub mod kb;
pub mod language;
pub mod lp;
pub mod output;
pub mod rational;

pub use error::{IncaError, Result};
