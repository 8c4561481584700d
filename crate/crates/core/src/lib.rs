pub mod adjoint;
pub mod error;
pub mod genrep;
pub mod genset;
pub mod groupconj;
pub mod liealg;
pub mod projector_core;
pub mod report;
pub mod linalg;
pub mod rational;
pub mod rootsystem;
pub mod symfield;

pub use error::{Error, Result};
