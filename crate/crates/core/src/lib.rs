pub mod dilation;
pub mod error;
pub mod hermitian;
pub mod operator;
pub mod qsolver;
pub mod report;
pub mod tolerance;
pub mod verifier;

pub use error::{Error, ErrorKind, Result};
pub use tolerance::Tolerances;
