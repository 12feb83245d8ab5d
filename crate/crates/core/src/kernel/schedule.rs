//! Injection schedules and their text form.
//!
//! Every line starts with the timestep it belongs to:
//!
//! ```text
//! .expect 7
//! .note free text, echoed by tools that run the schedule
//! @0 top=2 PROG dest=2 val=1.5 next=A_ADD ndest=3
//! @0 left=1 A_ADDS dest=4 val=2 next=PROG ndest=0
//! @4 .vbcast col=0 rows=0..4 A_MULS dest=0 val=1 next=PROG ndest=0
//! @5 .hreduce row=0 sink=3
//! @6 .offload 3:0 7:1
//! ```

use std::fmt::Write as _;
use std::ops::Range;

use super::ScheduleError;
use crate::fabric::{BusOp, OffloadRead, Port};
use crate::isa::{parse_message, strip_comment, MessageWord};

#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Inject { port: Port, word: MessageWord },
    Bus(BusOp),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledAction {
    pub timestep: u64,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct InjectionSchedule {
    pub actions: Vec<ScheduledAction>,
    /// Cycles the schedule should take to drain, from the cost laws.
    pub expected_timesteps: u64,
    pub notes: Vec<String>,
}

impl InjectionSchedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, timestep: u64, action: Action) {
        self.actions.push(ScheduledAction { timestep, action });
    }

    pub fn inject(&mut self, timestep: u64, port: Port, word: MessageWord) {
        self.push(timestep, Action::Inject { port, word });
    }

    pub fn bus(&mut self, timestep: u64, op: BusOp) {
        self.push(timestep, Action::Bus(op));
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Timesteps must be nondecreasing with no gaps, and the declared length
    /// must cover the last action.
    pub fn validate(&self) -> Result<(), ScheduleError> {
        let mut prev: Option<u64> = None;
        for a in &self.actions {
            if let Some(p) = prev {
                if a.timestep < p || a.timestep > p + 1 {
                    return Err(ScheduleError::Malformed(format!(
                        "timestep {} follows {p}",
                        a.timestep
                    )));
                }
            } else if a.timestep != 0 {
                return Err(ScheduleError::Malformed(format!(
                    "first action at timestep {}, expected 0",
                    a.timestep
                )));
            }
            prev = Some(a.timestep);
        }
        if let Some(last) = prev {
            if self.expected_timesteps <= last {
                return Err(ScheduleError::Malformed(format!(
                    "expected_timesteps {} does not cover action at {last}",
                    self.expected_timesteps
                )));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, ".expect {}", self.expected_timesteps);
        for note in &self.notes {
            let _ = writeln!(out, ".note {note}");
        }
        for a in &self.actions {
            let _ = write!(out, "@{} ", a.timestep);
            match &a.action {
                Action::Inject { port, word } => {
                    let _ = match port {
                        Port::LeftEdge(r) => write!(out, "left={r} "),
                        Port::TopEdge(c) => write!(out, "top={c} "),
                    };
                    let _ = writeln!(out, "{word}");
                }
                Action::Bus(BusOp::ColumnBroadcast { col, rows, word }) => {
                    if rows.end == usize::MAX {
                        let _ = writeln!(out, ".vbcast col={col} {word}");
                    } else {
                        let _ = writeln!(out, ".vbcast col={col} rows={}..{} {word}", rows.start, rows.end);
                    }
                }
                Action::Bus(BusOp::RowReduce { row, sink }) => {
                    let _ = writeln!(out, ".hreduce row={row} sink={sink}");
                }
                Action::Bus(BusOp::Offload { reads }) => {
                    out.push_str(".offload");
                    for r in reads {
                        let _ = write!(out, " {}:{}", r.site, r.slot);
                    }
                    out.push('\n');
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ScheduleError> {
        let mut sched = InjectionSchedule::new();
        let mut expect = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let err = |message: String| ScheduleError::Parse {
                line: line_no,
                message,
            };
            let trimmed = raw.trim();
            if let Some(note) = trimmed.strip_prefix(".note") {
                sched.notes.push(note.trim().to_string());
                continue;
            }
            let line = strip_comment(raw);
            if line.is_empty() {
                continue;
            }
            if let Some(n) = line.strip_prefix(".expect") {
                expect = Some(
                    n.trim()
                        .parse::<u64>()
                        .map_err(|_| err(format!("invalid .expect `{}`", n.trim())))?,
                );
                continue;
            }
            let rest = line
                .strip_prefix('@')
                .ok_or_else(|| err("expected `@<timestep>` prefix".into()))?;
            let (ts, body) = rest
                .split_once(char::is_whitespace)
                .ok_or_else(|| err("missing action after timestep".into()))?;
            let timestep: u64 = ts
                .parse()
                .map_err(|_| err(format!("invalid timestep `{ts}`")))?;
            let action = parse_action(body.trim()).map_err(err)?;
            sched.push(timestep, action);
        }
        sched.expected_timesteps = match expect {
            Some(n) => n,
            None => sched.actions.last().map_or(0, |a| a.timestep + 1),
        };
        Ok(sched)
    }
}

fn parse_action(body: &str) -> Result<Action, String> {
    let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
    let rest = rest.trim();
    match head {
        ".vbcast" => {
            let mut col = None;
            let mut rows = None;
            let mut remaining = rest;
            loop {
                let (tok, tail) = remaining.split_once(char::is_whitespace).unwrap_or((remaining, ""));
                if let Some(v) = tok.strip_prefix("col=") {
                    col = Some(parse_usize(v)?);
                } else if let Some(v) = tok.strip_prefix("rows=") {
                    rows = Some(parse_range(v)?);
                } else {
                    break;
                }
                remaining = tail.trim_start();
            }
            let word = parse_message(remaining)?;
            let col = col.ok_or("missing col=")?;
            Ok(Action::Bus(BusOp::ColumnBroadcast {
                col,
                // no explicit span: the whole column, resolved against the fabric at run time
                rows: rows.unwrap_or(0..usize::MAX),
                word,
            }))
        }
        ".hreduce" => {
            let mut row = None;
            let mut sink = None;
            for tok in rest.split_whitespace() {
                if let Some(v) = tok.strip_prefix("row=") {
                    row = Some(parse_usize(v)?);
                } else if let Some(v) = tok.strip_prefix("sink=") {
                    sink = Some(parse_usize(v)?);
                } else {
                    return Err(format!("unexpected `{tok}` in .hreduce"));
                }
            }
            Ok(Action::Bus(BusOp::RowReduce {
                row: row.ok_or("missing row=")?,
                sink: sink.ok_or("missing sink=")?,
            }))
        }
        ".offload" => {
            let reads = rest
                .split_whitespace()
                .map(|tok| {
                    let (site, slot) = tok
                        .split_once(':')
                        .ok_or_else(|| format!("expected <site>:<slot>, found `{tok}`"))?;
                    Ok(OffloadRead {
                        site: parse_usize(site)?,
                        slot: parse_usize(slot)?,
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok(Action::Bus(BusOp::Offload { reads }))
        }
        _ => {
            let port = if let Some(v) = head.strip_prefix("left=") {
                Port::LeftEdge(parse_usize(v)?)
            } else if let Some(v) = head.strip_prefix("top=") {
                Port::TopEdge(parse_usize(v)?)
            } else {
                return Err(format!("expected left=<row>, top=<col> or a directive, found `{head}`"));
            };
            Ok(Action::Inject {
                port,
                word: parse_message(rest)?,
            })
        }
    }
}

fn parse_usize(v: &str) -> Result<usize, String> {
    v.parse().map_err(|_| format!("invalid integer `{v}`"))
}

fn parse_range(v: &str) -> Result<Range<usize>, String> {
    let (a, b) = v
        .split_once("..")
        .ok_or_else(|| format!("expected <start>..<end>, found `{v}`"))?;
    Ok(parse_usize(a)?..parse_usize(b)?)
}
