pub mod classifier4;
pub mod classifier6;
pub mod error;
pub mod exec;
pub mod laurent;
pub mod lattice;
pub mod localization;
pub mod rational;
pub mod reduction;
pub mod report;
pub mod toric;

pub use error::{Error, Result};
