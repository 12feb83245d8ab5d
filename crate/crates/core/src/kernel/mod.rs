//! Lowering of matrix-vector products and PageRank steps into injection
//! schedules.
//!
//! A schedule is a list of timestamped actions: boundary injections that
//! hop through the fabric, and single-cycle bus transactions. Building a
//! schedule never touches a fabric; the same schedule can be replayed on
//! any fabric of compatible size.

mod matrix;
mod matvec;
mod pagerank;
mod schedule;
mod walkthrough;

pub use matrix::Matrix;
pub use matvec::{build_matvec, build_tiled_matvec, MatrixShape, Tile, TilePlan};
pub use pagerank::{
    build_pagerank_iteration, build_tiled_pagerank_iteration, pagerank_iteration_timesteps, teleport_term,
};
pub use schedule::{Action, InjectionSchedule, ScheduledAction};
pub use walkthrough::walkthrough;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScheduleError {
    #[error("{rows}x{cols} matrix does not fit a {fabric_rows}x{fabric_cols} fabric untiled; use the tiled builder")]
    NeedsTiling {
        rows: usize,
        cols: usize,
        fabric_rows: usize,
        fabric_cols: usize,
    },
    #[error("a {rows}x{cols} fabric cannot host a tile (need at least 1x2)")]
    Unschedulable { rows: usize, cols: usize },
    #[error("vector has {found} entries, matrix has {expected} columns")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("damping factor {0} outside [0, 1]")]
    InvalidDamping(f64),
    #[error("malformed schedule: {0}")]
    Malformed(String),
    #[error("schedule line {line}: {message}")]
    Parse { line: usize, message: String },
}
