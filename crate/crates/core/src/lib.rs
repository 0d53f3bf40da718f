pub mod algebra;
pub mod cli;
pub mod error;
pub mod evolve;
pub mod fock;
pub mod ground;
pub mod prepare;
pub mod squeeze;

pub use error::{Error, Result};
