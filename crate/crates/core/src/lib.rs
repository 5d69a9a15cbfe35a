pub mod cli;
pub mod compiler;
pub mod device;
pub mod error;
pub mod hhl;
pub mod numerics;
pub mod simulator;
pub mod units;

pub use error::{Error, Result};
