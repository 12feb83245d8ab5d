use std::fmt;

use super::Link;
use crate::isa::MessageWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EventKind {
    RouteRight,
    RouteDown,
    ConsumeProg,
    Execute,
    Emit,
    BusBroadcast,
    BusReduce,
    Offload,
    /// A bus transaction that had nothing to do.
    Warning,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::RouteRight => "route-right",
            EventKind::RouteDown => "route-down",
            EventKind::ConsumeProg => "consume-prog",
            EventKind::Execute => "execute",
            EventKind::Emit => "emit",
            EventKind::BusBroadcast => "bus-broadcast",
            EventKind::BusReduce => "bus-reduce",
            EventKind::Offload => "offload",
            EventKind::Warning => "warning",
        }
    }

    /// Events of these kinds change the site's register or latches.
    pub fn writes_site(self) -> bool {
        matches!(
            self,
            EventKind::ConsumeProg | EventKind::Execute | EventKind::BusBroadcast | EventKind::BusReduce
        )
    }

    /// Phase within a cycle: hop traffic, then broadcasts, reductions, offloads.
    pub(crate) fn phase(self) -> u8 {
        match self {
            EventKind::RouteRight
            | EventKind::RouteDown
            | EventKind::ConsumeProg
            | EventKind::Execute
            | EventKind::Emit => 0,
            EventKind::BusBroadcast => 1,
            EventKind::BusReduce => 2,
            EventKind::Offload => 3,
            EventKind::Warning => 4,
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub cycle: u64,
    pub site: usize,
    pub kind: EventKind,
    pub word: MessageWord,
    /// Register value after the event, or the emitted value for `Emit`.
    pub value: Option<f32>,
    /// Output link used, for route and hop-level emit events.
    pub link: Option<Link>,
}

impl TraceEvent {
    /// `cycle=<u64> site=<u12> event=<kind> word=<16 hex> value=<f32|->`
    pub fn to_line(&self) -> String {
        format!(
            "cycle={} site={} event={} word={:016x} value={}",
            self.cycle,
            self.site,
            self.kind,
            self.word.bits(),
            fmt_value(self.value)
        )
    }

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{:016x},{}",
            self.cycle,
            self.site,
            self.kind,
            self.word.bits(),
            fmt_value(self.value)
        )
    }
}

fn fmt_value(v: Option<f32>) -> String {
    v.map(|v| format!("{v:?}")).unwrap_or_else(|| "-".into())
}

pub const TRACE_CSV_HEADER: &str = "cycle,site,event,word,value";

pub fn trace_text(events: &[TraceEvent]) -> String {
    events.iter().map(|e| e.to_line() + "\n").collect()
}

pub fn trace_csv(events: &[TraceEvent]) -> String {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for e in events {
        out.push_str(&e.to_csv_row());
        out.push('\n');
    }
    out
}

/// Sites whose register or latches were written somewhere in `events`.
pub fn sites_written(events: &[TraceEvent]) -> std::collections::BTreeSet<usize> {
    events
        .iter()
        .filter(|e| e.kind.writes_site())
        .map(|e| e.site)
        .collect()
}
