pub mod cli;
pub mod error;
pub mod graph;
pub mod maxcut_analysis;
pub mod mis_variant;
pub mod optimizer;
pub mod qaoa;
pub mod statevector;

pub use error::{Error, Result};
