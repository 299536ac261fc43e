//! Countable scattered spaces, continuous functions on them, and the
//! embeddability quasi-order between such functions.

pub mod error;
pub mod func;
pub mod graph;
pub mod label;
pub mod rank;
pub mod reduction;
pub mod space;
pub mod text;
pub mod value;

pub use error::{Error, Result};
