//! Power-law random graphs, neighborhood-growth metrics, and BFS-based
//! diameter, radius, closeness and distance-oracle algorithms.

pub mod algos;
pub mod error;
pub mod fit;
pub mod genmodel;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod properties;
pub mod rng;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{Graph, UNREACHED};
