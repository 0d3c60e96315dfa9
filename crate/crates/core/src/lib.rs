pub mod berry;
pub mod chsh;
pub mod continuum;
pub mod distributions;
pub mod error;
pub mod infogeo;
pub mod lengths;
pub mod numeric;
pub mod quantum;
pub mod scan_io;

pub use error::{Error, Result};
