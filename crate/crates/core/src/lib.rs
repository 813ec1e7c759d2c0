pub mod cache;
pub mod cli;
pub mod dowling;
pub mod error;
pub mod group;
pub mod homology;
pub mod io;
pub mod linalg;
pub mod poset;
pub mod rational;
pub mod series;
pub mod stability;
pub mod symm;

pub use error::{Error, Result};
