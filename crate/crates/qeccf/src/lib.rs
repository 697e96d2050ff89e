//! Quantum error-correcting code projectors obtained by Fourier inversion over
//! subgroups of finite error groups, with detectability analysis and the
//! search driver that tabulates the resulting codes.

pub mod codes;
pub mod cxla;
pub mod errbasis;
pub mod error;
pub mod fourier;
pub mod matgroup;
pub mod repn;
pub mod tablegen;

pub use error::{Error, Result};
