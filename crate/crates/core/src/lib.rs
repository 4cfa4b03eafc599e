//! Wheeler maps: a compressed index over a tagged text that reports the
//! distinct tags labeling the occurrences of any substring of a
//! preprocessed pattern.

pub mod codec;
pub mod error;
pub mod frequent;
pub mod grid;
pub mod hierarchy;
pub mod listing;
pub mod map;
pub mod oracle;
pub mod rlbwt;
pub mod rmq;
pub mod runs;
pub mod slp;
pub mod stats;
pub mod tagtree;
pub mod text;

pub use error::{Error, Result};
