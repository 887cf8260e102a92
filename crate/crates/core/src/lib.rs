pub mod algebra;
mod error;
pub mod gen;
pub mod natset;
pub mod realizer;
pub mod selftest;
pub mod truncadd;
pub mod wordcap;

pub use error::{Error, Result};
