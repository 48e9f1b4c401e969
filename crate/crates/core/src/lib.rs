pub mod algebra;
pub mod analysis;
pub mod error;
pub mod hypergraph;
pub mod resultant;
pub mod spectra;
pub mod switching;
pub mod tensor;

pub use error::{Error, Result};
