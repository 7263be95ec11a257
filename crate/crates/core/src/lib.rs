pub mod affinekit;
pub mod cmatrix;
pub mod error;
pub mod latticekit;
pub mod linalg;
pub mod parafermion;
pub mod qseries;
pub mod rootsys;

pub use error::{Error, Result};
