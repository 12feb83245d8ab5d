//! Protein-network PageRank: ingestion, transition matrix, a double
//! precision reference, and runs on the simulated fabric.

mod fabric_run;
mod graph;
mod reference;
mod report;
mod transition;

pub use fabric_run::{fabric_pagerank, fabric_pagerank_matrix, FabricPageRank, FabricRunError};
pub use graph::{load_graph, random_graph, synthetic_network, Graph};
pub use reference::{reference_pagerank, reference_pagerank_detailed, PageRankParams, PowerIteration};
pub use report::{rank_csv, rank_report, summary_csv, RankRow, RANK_CSV_HEADER, SUMMARY_CSV_HEADER};
pub use transition::{build_transition, TransitionMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no nodes")]
    Empty,
    #[error("node {node} out of range for {nodes} nodes")]
    NodeOutOfRange { node: usize, nodes: usize },
    #[error("invalid PageRank parameters: {0}")]
    InvalidParams(String),
}
