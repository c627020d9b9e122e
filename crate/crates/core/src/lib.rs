pub mod construct;
pub mod error;
pub mod chevalley;
pub mod cli;
pub mod expr;
pub mod fixtures;
pub mod golden;
pub mod kostant;
pub mod linalg;
pub mod parabolic;
pub mod realform;
pub mod rootsys;
pub mod scalar;
pub mod symmetry;

pub use error::{Error, Result};
