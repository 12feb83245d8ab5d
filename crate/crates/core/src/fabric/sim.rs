use std::collections::BTreeMap;
use std::ops::Range;

use log::warn;

use super::route::{neighbor, route_decision, Link, Route};
use super::site::{InPort, SiteState};
use super::trace::{EventKind, TraceEvent};
use super::{FabricConfig, SimError};
use crate::isa::{apply_instruction, MessageWord, Opcode};
use crate::kernel::{Action, InjectionSchedule};

/// Boundary port used for injections from the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Port {
    /// Left port of the site in column 0 of the given row.
    LeftEdge(usize),
    /// Top port of the site in row 0 of the given column.
    TopEdge(usize),
}

/// One value read back from a site during an offload, tagged with the
/// output slot it fills.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OffloadRead {
    pub site: usize,
    pub slot: usize,
}

/// Single-cycle bus transactions. They bypass the hop links.
#[derive(Debug, Clone, PartialEq)]
pub enum BusOp {
    /// Deliver `word` to every site of `col` within `rows` at once.
    ColumnBroadcast {
        col: usize,
        rows: Range<usize>,
        word: MessageWord,
    },
    /// Fold every parked streaming result of `row` into `sink` with A_ADD,
    /// ascending column order.
    RowReduce { row: usize, sink: usize },
    /// Read site registers out to the host.
    Offload { reads: Vec<OffloadRead> },
}

impl BusOp {
    fn order_key(&self) -> (u8, usize) {
        match self {
            BusOp::ColumnBroadcast { col, .. } => (1, *col),
            BusOp::RowReduce { row, .. } => (2, *row),
            BusOp::Offload { .. } => (3, 0),
        }
    }
}

/// Result of [`Fabric::run`].
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Register of every site, by address, once the fabric went quiescent.
    pub final_values: Vec<f32>,
    pub timesteps: u64,
    /// Empty unless tracing is enabled.
    pub trace: Vec<TraceEvent>,
    /// Offloaded values by slot; later offloads of a slot replace earlier ones.
    pub outputs: BTreeMap<usize, f32>,
}

impl RunOutcome {
    /// Offloaded slots `0..n` as a dense vector.
    pub fn output_vector(&self, n: usize) -> Option<Vec<f32>> {
        (0..n).map(|i| self.outputs.get(&i).copied()).collect()
    }
}

/// Message accounting, for conservation checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MessageCounters {
    pub injected: u64,
    /// Streaming results placed on hop links.
    pub emitted: u64,
    /// Messages removed from a FIFO by the addressed site.
    pub consumed: u64,
    pub forwarded: u64,
}

/// The R×C site grid with its link and bus state.
///
/// A cycle runs in fixed phases: edge injections land in their FIFOs; every
/// site (ascending address) takes at most one message from its left port and
/// then one from its top port, forwarding, consuming or executing it; bus
/// transactions commit; link transfers arrive in the neighbour FIFOs ready
/// for the next cycle.
#[derive(Debug, Clone)]
pub struct Fabric {
    config: FabricConfig,
    sites: Vec<SiteState>,
    cycle: u64,
    injections: BTreeMap<u64, Vec<(Port, MessageWord)>>,
    bus: BTreeMap<u64, Vec<BusOp>>,
    queued: usize,
    outputs: BTreeMap<usize, f32>,
    nonfinite_count: u64,
    counters: MessageCounters,
    tracing: bool,
    trace: Vec<TraceEvent>,
}

impl Fabric {
    pub fn new(config: FabricConfig) -> Result<Self, SimError> {
        config.validate()?;
        let sites = (0..config.sites()).map(SiteState::new).collect();
        Ok(Self {
            config,
            sites,
            cycle: 0,
            injections: BTreeMap::new(),
            bus: BTreeMap::new(),
            queued: 0,
            outputs: BTreeMap::new(),
            nonfinite_count: 0,
            counters: MessageCounters::default(),
            tracing: false,
            trace: Vec::new(),
        })
    }

    /// Record every event of subsequent cycles into the run trace.
    pub fn with_tracing(mut self, on: bool) -> Self {
        self.tracing = on;
        self
    }

    pub fn set_tracing(&mut self, on: bool) {
        self.tracing = on;
    }

    pub fn config(&self) -> &FabricConfig {
        &self.config
    }

    pub fn cycle(&self) -> u64 {
        self.cycle
    }

    pub fn sites(&self) -> &[SiteState] {
        &self.sites
    }

    pub fn site(&self, addr: usize) -> &SiteState {
        &self.sites[addr]
    }

    pub fn values(&self) -> Vec<f32> {
        self.sites.iter().map(|s| s.stored_value).collect()
    }

    pub fn nonfinite_count(&self) -> u64 {
        self.nonfinite_count
    }

    pub fn counters(&self) -> MessageCounters {
        self.counters
    }

    /// Messages sitting in FIFOs, i.e. in flight.
    pub fn in_flight(&self) -> usize {
        self.queued
    }

    pub fn outputs(&self) -> &BTreeMap<usize, f32> {
        &self.outputs
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.trace)
    }

    pub fn is_quiescent(&self) -> bool {
        self.queued == 0 && self.injections.is_empty() && self.bus.is_empty()
    }

    fn check_dest(&self, site: usize, dest: u16) -> Result<(), SimError> {
        if (dest as usize) < self.sites.len() {
            Ok(())
        } else {
            Err(SimError::AddressOutOfRange {
                cycle: self.cycle,
                site,
                dest,
            })
        }
    }

    /// Queue `word` for delivery through a boundary port at `cycle`.
    pub fn inject(&mut self, cycle: u64, port: Port, word: MessageWord) -> Result<(), SimError> {
        if cycle < self.cycle {
            return Err(SimError::PastCycle {
                requested: cycle,
                current: self.cycle,
            });
        }
        let edge_site = self.edge_site(port)?;
        self.check_dest(edge_site, word.destination)?;
        self.injections.entry(cycle).or_default().push((port, word));
        Ok(())
    }

    fn edge_site(&self, port: Port) -> Result<usize, SimError> {
        match port {
            Port::LeftEdge(r) if r < self.config.rows => Ok(self.config.address(r, 0)),
            Port::TopEdge(c) if c < self.config.cols => Ok(self.config.address(0, c)),
            _ => Err(SimError::PortOutOfRange {
                port,
                rows: self.config.rows,
                cols: self.config.cols,
            }),
        }
    }

    /// Queue a bus transaction for `cycle`.
    pub fn schedule_bus(&mut self, cycle: u64, mut op: BusOp) -> Result<(), SimError> {
        if cycle < self.cycle {
            return Err(SimError::PastCycle {
                requested: cycle,
                current: self.cycle,
            });
        }
        let cfg = &self.config;
        if let BusOp::ColumnBroadcast { rows, .. } = &mut op {
            // an open-ended span means the whole column
            if rows.end == usize::MAX {
                rows.end = cfg.rows;
            }
        }
        match &op {
            BusOp::ColumnBroadcast { col, rows, .. } => {
                if *col >= cfg.cols {
                    return Err(SimError::ColumnOutOfRange(*col));
                }
                if rows.end > cfg.rows || rows.start > rows.end {
                    return Err(SimError::RowOutOfRange(rows.end));
                }
            }
            BusOp::RowReduce { row, sink } => {
                if *row >= cfg.rows {
                    return Err(SimError::RowOutOfRange(*row));
                }
                if *sink >= cfg.sites() || cfg.row_of(*sink) != *row {
                    return Err(SimError::SinkNotInRow {
                        sink: *sink,
                        row: *row,
                    });
                }
            }
            BusOp::Offload { reads } => {
                if let Some(r) = reads.iter().find(|r| r.site >= cfg.sites()) {
                    return Err(SimError::SiteOutOfRange(r.site));
                }
            }
        }
        self.bus.entry(cycle).or_default().push(op);
        Ok(())
    }

    /// Vertical-bus broadcast down a whole column in the current cycle.
    pub fn column_broadcast(&mut self, col: usize, word: MessageWord) -> Result<(), SimError> {
        let rows = 0..self.config.rows;
        self.schedule_bus(self.cycle, BusOp::ColumnBroadcast { col, rows, word })
    }

    /// Horizontal-bus reduction into `sink` in the current cycle.
    pub fn row_reduce(&mut self, row: usize, sink: usize) -> Result<(), SimError> {
        self.schedule_bus(self.cycle, BusOp::RowReduce { row, sink })
    }

    /// Advance one cycle and return its events.
    pub fn step(&mut self) -> Result<Vec<TraceEvent>, SimError> {
        let mut events = Vec::new();
        self.step_inner(Some(&mut events))?;
        if self.tracing {
            self.trace.extend(events.iter().cloned());
        }
        Ok(events)
    }

    fn step_inner(&mut self, mut events: Option<&mut Vec<TraceEvent>>) -> Result<(), SimError> {
        let t = self.cycle;

        if let Some(list) = self.injections.remove(&t) {
            for (port, word) in list {
                let (site, in_port) = match port {
                    Port::LeftEdge(_) => (self.edge_site(port)?, InPort::Left),
                    Port::TopEdge(_) => (self.edge_site(port)?, InPort::Top),
                };
                self.enqueue(site, in_port, word)?;
                self.counters.injected += 1;
            }
        }

        let mut record = |ev: TraceEvent| {
            if let Some(buf) = events.as_deref_mut() {
                buf.push(ev);
            }
        };

        let mut transfers: Vec<(usize, InPort, MessageWord)> = Vec::new();
        if self.queued > 0 {
            for addr in 0..self.sites.len() {
                if self.sites[addr].is_idle() {
                    continue;
                }
                let mut link_busy = [false; 2];
                for port in [InPort::Left, InPort::Top] {
                    let Some(&msg) = self.sites[addr].fifo(port).front() else {
                        continue;
                    };
                    match route_decision(addr, msg.destination as usize, &self.config) {
                        route @ (Route::Right | Route::Down) => {
                            let link = route.link().expect("hop route has a link");
                            if link_busy[link as usize] {
                                continue;
                            }
                            link_busy[link as usize] = true;
                            self.sites[addr].fifo_mut(port).pop_front();
                            self.queued -= 1;
                            self.counters.forwarded += 1;
                            transfers.push((neighbor(addr, link, &self.config), in_port_for(link), msg));
                            record(TraceEvent {
                                cycle: t,
                                site: addr,
                                kind: match link {
                                    Link::Right => EventKind::RouteRight,
                                    Link::Down => EventKind::RouteDown,
                                },
                                word: msg,
                                value: None,
                                link: Some(link),
                            });
                        }
                        Route::Consume if msg.opcode == Opcode::Prog => {
                            let site = &mut self.sites[addr];
                            site.fifo_mut(port).pop_front();
                            site.program(&msg);
                            self.queued -= 1;
                            self.counters.consumed += 1;
                            record(TraceEvent {
                                cycle: t,
                                site: addr,
                                kind: EventKind::ConsumeProg,
                                word: msg,
                                value: Some(msg.value),
                                link: None,
                            });
                        }
                        Route::Consume => {
                            let site = &self.sites[addr];
                            let exec = apply_instruction(msg.opcode, msg.value, site.stored_value)?;
                            let mut out = None;
                            if let Some(v) = exec.emitted {
                                let word = site.continuation(v);
                                self.check_dest(addr, word.destination)?;
                                let link = route_decision(addr, word.destination as usize, &self.config).link();
                                if let Some(link) = link {
                                    if link_busy[link as usize] {
                                        // result cannot leave this cycle; retry next cycle
                                        continue;
                                    }
                                    link_busy[link as usize] = true;
                                }
                                out = Some((word, link));
                            }
                            let site = &mut self.sites[addr];
                            site.fifo_mut(port).pop_front();
                            site.stored_value = exec.stored;
                            self.queued -= 1;
                            self.counters.consumed += 1;
                            if exec.nonfinite {
                                site.nonfinite_flag = true;
                                self.nonfinite_count += 1;
                            }
                            record(TraceEvent {
                                cycle: t,
                                site: addr,
                                kind: EventKind::Execute,
                                word: msg,
                                value: Some(exec.stored),
                                link: None,
                            });
                            if let Some((word, link)) = out {
                                let target = match link {
                                    Some(link) => (neighbor(addr, link, &self.config), in_port_for(link)),
                                    // addressed to itself: loop back through the left port
                                    None => (addr, InPort::Left),
                                };
                                transfers.push((target.0, target.1, word));
                                self.counters.emitted += 1;
                                record(TraceEvent {
                                    cycle: t,
                                    site: addr,
                                    kind: EventKind::Emit,
                                    word,
                                    value: Some(word.value),
                                    link,
                                });
                            }
                        }
                    }
                }
            }
        }

        if let Some(mut ops) = self.bus.remove(&t) {
            ops.sort_by_key(BusOp::order_key);
            for op in ops {
                self.commit_bus(t, op, &mut record)?;
            }
        }

        for (site, port, word) in transfers {
            self.enqueue(site, port, word)?;
        }

        if let Some(buf) = events {
            buf.sort_by_key(|e| (e.site, e.kind.phase()));
        }
        self.cycle += 1;
        Ok(())
    }

    fn enqueue(&mut self, site: usize, port: InPort, word: MessageWord) -> Result<(), SimError> {
        let depth = self.config.fifo_depth;
        let fifo = self.sites[site].fifo_mut(port);
        if fifo.len() >= depth {
            return Err(SimError::FifoOverflow {
                cycle: self.cycle,
                site,
                port,
                depth,
            });
        }
        fifo.push_back(word);
        self.queued += 1;
        Ok(())
    }

    fn commit_bus(
        &mut self,
        t: u64,
        op: BusOp,
        record: &mut impl FnMut(TraceEvent),
    ) -> Result<(), SimError> {
        match op {
            BusOp::ColumnBroadcast { col, rows, word } => {
                for row in rows {
                    let addr = self.config.address(row, col);
                    let site = &mut self.sites[addr];
                    if word.opcode == Opcode::Prog {
                        site.program(&word);
                        record(TraceEvent {
                            cycle: t,
                            site: addr,
                            kind: EventKind::BusBroadcast,
                            word,
                            value: Some(site.stored_value),
                            link: None,
                        });
                        continue;
                    }
                    let exec = apply_instruction(word.opcode, word.value, site.stored_value)?;
                    site.stored_value = exec.stored;
                    if exec.nonfinite {
                        site.nonfinite_flag = true;
                        self.nonfinite_count += 1;
                    }
                    record(TraceEvent {
                        cycle: t,
                        site: addr,
                        kind: EventKind::BusBroadcast,
                        word,
                        value: Some(exec.stored),
                        link: None,
                    });
                    if let Some(v) = exec.emitted {
                        if site.bus_outbox.is_some() {
                            return Err(SimError::BusOutboxOccupied { cycle: t, site: addr });
                        }
                        let parked = site.continuation(v);
                        site.bus_outbox = Some(parked);
                        record(TraceEvent {
                            cycle: t,
                            site: addr,
                            kind: EventKind::Emit,
                            word: parked,
                            value: Some(v),
                            link: None,
                        });
                    }
                }
            }
            BusOp::RowReduce { row, sink } => {
                let mut any = false;
                for col in 0..self.config.cols {
                    let addr = self.config.address(row, col);
                    let Some(parked) = self.sites[addr].bus_outbox.take() else {
                        continue;
                    };
                    if parked.destination as usize != sink {
                        return Err(SimError::BusMisroute {
                            cycle: t,
                            site: addr,
                            dest: parked.destination,
                            sink,
                        });
                    }
                    any = true;
                    let target = &mut self.sites[sink];
                    let exec = apply_instruction(Opcode::Add, parked.value, target.stored_value)?;
                    target.stored_value = exec.stored;
                    if exec.nonfinite {
                        target.nonfinite_flag = true;
                        self.nonfinite_count += 1;
                    }
                    record(TraceEvent {
                        cycle: t,
                        site: sink,
                        kind: EventKind::BusReduce,
                        word: parked,
                        value: Some(exec.stored),
                        link: None,
                    });
                }
                if !any {
                    warn!("cycle {t}: row {row} reduce into {sink} found no pending values");
                    record(TraceEvent {
                        cycle: t,
                        site: sink,
                        kind: EventKind::Warning,
                        word: MessageWord::simple(Opcode::Add, sink as u16, 0.0),
                        value: Some(self.sites[sink].stored_value),
                        link: None,
                    });
                }
            }
            BusOp::Offload { reads } => {
                for OffloadRead { site, slot } in reads {
                    let v = self.sites[site].stored_value;
                    self.outputs.insert(slot, v);
                    record(TraceEvent {
                        cycle: t,
                        site,
                        kind: EventKind::Offload,
                        word: MessageWord::simple(Opcode::Prog, site as u16, v),
                        value: Some(v),
                        link: None,
                    });
                }
            }
        }
        Ok(())
    }

    /// Load `schedule` relative to the current cycle and step until the
    /// fabric is quiescent.
    ///
    /// On a watchdog or simulation error the partial trace stays available
    /// through [`Fabric::take_trace`].
    pub fn run(&mut self, schedule: &InjectionSchedule) -> Result<RunOutcome, SimError> {
        let start = self.cycle;
        self.outputs.clear();
        for entry in &schedule.actions {
            let at = start + entry.timestep;
            match &entry.action {
                Action::Inject { port, word } => self.inject(at, *port, *word)?,
                Action::Bus(op) => self.schedule_bus(at, op.clone())?,
            }
        }
        while !self.is_quiescent() {
            if self.cycle - start >= self.config.max_cycles {
                return Err(SimError::Watchdog {
                    cycles: self.cycle - start,
                });
            }
            if self.tracing {
                let mut events = Vec::new();
                self.step_inner(Some(&mut events))?;
                self.trace.extend(events);
            } else {
                self.step_inner(None)?;
            }
        }
        Ok(RunOutcome {
            final_values: self.values(),
            timesteps: self.cycle - start,
            trace: self.take_trace(),
            outputs: self.outputs.clone(),
        })
    }
}

fn in_port_for(link: Link) -> InPort {
    match link {
        Link::Right => InPort::Left,
        Link::Down => InPort::Top,
    }
}
