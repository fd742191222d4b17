pub mod cli;
pub mod cone;
pub mod error;
pub mod etale;
pub mod lattice;
pub mod monoid;
pub mod pointed;
pub mod scheme;
pub mod valuation;
pub mod zeta;

pub use error::{Error, Result};
