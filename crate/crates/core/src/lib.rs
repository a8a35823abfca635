pub mod error;
pub mod family;
pub mod spectral_propagator;
pub mod cli_io;
pub mod hermite_basis;
pub mod nonlinearity;
pub mod solver;
pub mod tensor;
pub mod tf_analysis;

pub use error::{Error, Result};
