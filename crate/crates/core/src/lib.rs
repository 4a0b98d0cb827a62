//! Streaming Max-DICUT estimation.
//!
//! Bounded-degree reduction of a directed multigraph, estimation of the
//! distribution of edge neighborhood types from a vertex sample, and a
//! ball-local rounding rule whose expectation over that distribution
//! approximates the maximum directed cut.

pub mod dense;
pub mod error;
pub mod graph;
pub mod local;
pub mod params;
pub mod reduce;
pub mod stream;
pub mod tape;
pub mod types;

pub use error::{Error, Result};
