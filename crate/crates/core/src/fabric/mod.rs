//! Cycle-stepped model of the site grid.
//!
//! Sites are addressed row-major (`row * cols + col`). Each site has a left
//! and a top input FIFO and two output links, right and down, closing into a
//! torus. A message not addressed to the current site goes down until it
//! reaches the destination row, then right. Row and column buses move data
//! in a single cycle regardless of distance.

mod config;
mod route;
mod sim;
mod site;
mod trace;

pub use config::{FabricConfig, DEFAULT_CLOCK_HZ, DEFAULT_FIFO_DEPTH, DEFAULT_MAX_CYCLES, MAX_SITES};
pub use route::{neighbor, route_decision, Link, Route};
pub use sim::{BusOp, Fabric, MessageCounters, OffloadRead, Port, RunOutcome};
pub use site::{InPort, SiteState};
pub use trace::{sites_written, trace_csv, trace_text, EventKind, TraceEvent, TRACE_CSV_HEADER};

use crate::isa::CodecError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("invalid fabric configuration: {0}")]
    Config(String),
    #[error("fabric config line {line}: {message}")]
    ConfigParse { line: usize, message: String },
    #[error("port {port:?} is not on the boundary of a {rows}x{cols} fabric")]
    PortOutOfRange { port: Port, rows: usize, cols: usize },
    #[error("column {0} out of range")]
    ColumnOutOfRange(usize),
    #[error("row {0} out of range")]
    RowOutOfRange(usize),
    #[error("site {0} out of range")]
    SiteOutOfRange(usize),
    #[error("sink {sink} is not in row {row}")]
    SinkNotInRow { sink: usize, row: usize },
    #[error("cannot schedule for cycle {requested}; fabric is already at cycle {current}")]
    PastCycle { requested: u64, current: u64 },
    #[error("cycle {cycle}: site {site} sent a message to nonexistent site {dest}")]
    AddressOutOfRange { cycle: u64, site: usize, dest: u16 },
    #[error("cycle {cycle}: {port} FIFO of site {site} overflowed (depth {depth})")]
    FifoOverflow {
        cycle: u64,
        site: usize,
        port: InPort,
        depth: usize,
    },
    #[error("cycle {cycle}: site {site} already holds an unreduced bus result")]
    BusOutboxOccupied { cycle: u64, site: usize },
    #[error("cycle {cycle}: site {site} holds a result for {dest}, but the row is reduced into {sink}")]
    BusMisroute {
        cycle: u64,
        site: usize,
        dest: u16,
        sink: usize,
    },
    #[error("watchdog: run exceeded {cycles} cycles")]
    Watchdog { cycles: u64 },
    #[error(transparent)]
    Codec(#[from] CodecError),
}
