pub mod constructions;
pub mod error;
mod f4;
pub mod field;
pub mod groebner;
pub mod io;
pub mod koszul;
pub mod linalg;
pub mod pei;
pub mod poly;
pub mod projection;
pub mod syzygy;

pub use error::{Error, Result};
