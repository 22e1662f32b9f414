pub mod asymptotics;
pub mod cli;
pub mod error;
pub mod json;
pub mod mc;
pub mod lattice;
pub mod scattering;
pub mod series;
pub mod svg;
pub mod tropical;

pub use error::{Error, Result};

