//! Decompositions of bounded-degree graphs into an independent set plus a
//! degenerate remainder, and recolouring paths between `(Δ+1)`-colourings.
//!
//! - [`cubic`]: linear-time near-bipartite decomposition of subcubic graphs by
//!   reduction rules.
//! - [`kdegen`]: `k`-degenerate decompositions of graphs of maximum degree `k`.
//! - [`recolour`]: compaction and path finding in the reconfiguration graph.
//! - [`gadgets`]: hardness instances of maximum degree `2k - 2`.
//! - [`oracles`]: brute-force references and random generators.

pub mod batch;
pub mod cubic;
pub mod error;
pub mod formats;
pub mod gadgets;
pub mod graph;
pub mod kdegen;
pub mod oracles;
pub mod recolour;

pub use error::{Error, Result};
pub use graph::{Decomposition, Graph, Vertex, VertexOrder};
pub use recolour::{Colouring, RecolourPath, RecolourStep};
