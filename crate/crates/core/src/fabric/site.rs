use std::collections::VecDeque;

use crate::isa::{MessageWord, Opcode};

/// Input port of a site. Left is fed by the row neighbour (or the left
/// edge), top by the column neighbour (or the top edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InPort {
    Left,
    Top,
}

impl std::fmt::Display for InPort {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InPort::Left => "left",
            InPort::Top => "top",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SiteState {
    pub address: usize,
    pub stored_value: f32,
    pub latched_next_opcode: Opcode,
    pub latched_next_destination: u16,
    pub in_left: VecDeque<MessageWord>,
    pub in_top: VecDeque<MessageWord>,
    /// Sticky: set once any instruction at this site produced NaN or ±inf.
    pub nonfinite_flag: bool,
    /// Streaming result parked for the horizontal bus.
    pub bus_outbox: Option<MessageWord>,
}

impl SiteState {
    pub fn new(address: usize) -> Self {
        Self {
            address,
            stored_value: 0.0,
            latched_next_opcode: Opcode::Prog,
            latched_next_destination: 0,
            in_left: VecDeque::new(),
            in_top: VecDeque::new(),
            nonfinite_flag: false,
            bus_outbox: None,
        }
    }

    pub(crate) fn fifo(&self, port: InPort) -> &VecDeque<MessageWord> {
        match port {
            InPort::Left => &self.in_left,
            InPort::Top => &self.in_top,
        }
    }

    pub(crate) fn fifo_mut(&mut self, port: InPort) -> &mut VecDeque<MessageWord> {
        match port {
            InPort::Left => &mut self.in_left,
            InPort::Top => &mut self.in_top,
        }
    }

    pub(crate) fn is_idle(&self) -> bool {
        self.in_left.is_empty() && self.in_top.is_empty()
    }

    /// PROG: register write plus continuation latch.
    pub(crate) fn program(&mut self, word: &MessageWord) {
        self.stored_value = word.value;
        self.latched_next_opcode = word.next_opcode;
        self.latched_next_destination = word.next_destination;
    }

    /// Wrap a streaming result in the latched continuation.
    pub(crate) fn continuation(&self, value: f32) -> MessageWord {
        MessageWord::simple(self.latched_next_opcode, self.latched_next_destination, value)
    }
}
