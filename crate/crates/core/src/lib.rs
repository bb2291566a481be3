pub mod arith;
pub mod balance;
pub mod closed_form;
pub mod error;
pub mod families;
pub mod numeric;
pub mod params;
pub mod riccati;
pub mod solver;

pub use error::{Error, Result};
