//! Five-vector calculus on a single chart of space-time.
//!
//! A five-vector is the operator `u^α ∂_α + u⁵·1` acting on scalar fields. This
//! crate provides exact scalar fields, the operator algebra and its frames,
//! the degenerate and nondegenerate inner products, flows and Lie derivatives,
//! the five-vector connection with parallel transport, five-vector forms, and
//! a scenario-driven identity harness.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod connection;
pub mod error;
pub mod field;
pub mod flow;
pub mod forms;
pub mod harness;
pub mod metric;

pub use error::{Error, Result};
