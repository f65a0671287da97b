pub mod error;
pub mod exactlin;
pub mod exterior;
pub mod analyze;
pub mod liealg;
pub mod grassmann;
pub mod experiments;

pub use error::{Error, Result};
