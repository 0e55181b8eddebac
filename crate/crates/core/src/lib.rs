pub mod cli;
pub mod error;
pub mod graph;
pub mod hikes;
pub mod lifts;
pub mod models;
pub mod nb;
pub mod oracle;
pub mod pipeline;
pub mod prg;
pub mod spectra;
pub mod structure;

pub use error::{Error, Result};
pub use graph::{DirectedEdge, Graph, HalfEdge, Multigraph};
pub use lifts::{EdgeSigning, SignedGraph};
