//! Justification logic workbench: syntax, basic and sharp models, J⁻
//! consequence, justification epistemic models and their Kripke collapse.

pub mod consequence;
pub mod error;
pub mod jem;
pub mod model;
pub mod multiworld;
pub mod russell;
pub mod sample;
pub mod syntax;

pub use error::{Error, Limits, Result};
