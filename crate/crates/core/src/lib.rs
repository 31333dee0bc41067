//! Exact decision procedures for local and global holomorphic similarity
//! of matrix families with polynomial entries.

pub mod algebra;
pub mod cocycle;
pub mod curves;
pub mod error;
pub mod json;
pub mod par;
pub mod smith;
pub mod sylvester;
pub mod topology;

pub use error::{Error, ParseError, Result};
