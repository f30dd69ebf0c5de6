pub mod cli;
pub mod cstar;
pub mod error;
pub mod extract;
pub mod factor;
pub mod fdqg;
pub mod fixtures;
pub mod fusionring;
pub mod io;
pub mod numerics;
pub mod reconstruct;

pub use error::{Error, Result};
