pub mod error;
pub mod measured;
pub mod polytope;
pub mod rational;

pub use error::{Error, Result};
pub mod angle;
pub mod ehrhart;
pub mod solidpoly;
pub mod valuation;
pub mod families;
pub mod cli;
pub mod io;
