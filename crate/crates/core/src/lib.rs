pub mod arith;
pub mod cli;
pub mod decide;
pub mod error;
pub mod exec;
pub mod linalg;
pub mod numberfield;
pub mod padic;
pub mod poly;
pub mod quadform;
pub mod raminv;
pub mod report;
pub mod search;

pub use error::{Error, Result};
