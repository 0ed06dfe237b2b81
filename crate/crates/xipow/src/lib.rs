pub mod algebraic;
pub mod barrier;
pub mod cli;
pub mod creal;
pub mod erisk;
pub mod error;
pub mod formula;
pub mod poly;
pub mod qe;
pub mod rat;
pub mod rsolver;
pub mod sexp;
pub mod sign;
pub mod upoly;
pub mod xz;

pub use error::{Error, ErrorKind, Result};
