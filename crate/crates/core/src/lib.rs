//! Worst-case response-time analysis for parallel DAG tasks on multicores.
//!
//! The crate bounds the response time of a DAG task under any
//! work-conserving scheduler, lowers those bounds by inserting precedence
//! edges that build long generalized paths, sizes federated core
//! allocations against deadlines, and ships a task generator, a list
//! scheduling simulator and an experiment harness.

pub mod alloc;
pub mod bound;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod io;
pub mod optimize;
pub mod sim;
pub mod taskgen;

pub use error::{Error, Result};
pub use graph::{DagTask, Time, VertexId};
