use std::fmt;
use std::str::FromStr;

use super::CodecError;

/// The ten instructions understood by a site.
///
/// Numeric codes are frozen: they are the values stored in the 4-bit opcode
/// fields of a [`MessageWord`](super::MessageWord).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Opcode {
    Prog = 0,
    Update = 1,
    Add = 2,
    Sub = 3,
    Mul = 4,
    Div = 5,
    AddS = 6,
    SubS = 7,
    MulS = 8,
    DivS = 9,
}

/// Arithmetic performed by the `A_*` instruction families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ArithOp {
    /// `stored ∘ incoming`, stored on the left.
    #[inline]
    pub fn apply(self, stored: f32, incoming: f32) -> f32 {
        match self {
            ArithOp::Add => stored + incoming,
            ArithOp::Sub => stored - incoming,
            ArithOp::Mul => stored * incoming,
            ArithOp::Div => stored / incoming,
        }
    }
}

impl Opcode {
    pub const ALL: [Opcode; 10] = [
        Opcode::Prog,
        Opcode::Update,
        Opcode::Add,
        Opcode::Sub,
        Opcode::Mul,
        Opcode::Div,
        Opcode::AddS,
        Opcode::SubS,
        Opcode::MulS,
        Opcode::DivS,
    ];

    #[inline]
    pub const fn code(self) -> u8 {
        self as u8
    }

    /// Mnemonic as written in assembly text.
    pub const fn mnemonic(self) -> &'static str {
        match self {
            Opcode::Prog => "PROG",
            Opcode::Update => "UPDATE",
            Opcode::Add => "A_ADD",
            Opcode::Sub => "A_SUB",
            Opcode::Mul => "A_MUL",
            Opcode::Div => "A_DIV",
            Opcode::AddS => "A_ADDS",
            Opcode::SubS => "A_SUBS",
            Opcode::MulS => "A_MULS",
            Opcode::DivS => "A_DIVS",
        }
    }

    /// Arithmetic of an `A_*` instruction, `None` for PROG and UPDATE.
    pub const fn arith(self) -> Option<ArithOp> {
        match self {
            Opcode::Add | Opcode::AddS => Some(ArithOp::Add),
            Opcode::Sub | Opcode::SubS => Some(ArithOp::Sub),
            Opcode::Mul | Opcode::MulS => Some(ArithOp::Mul),
            Opcode::Div | Opcode::DivS => Some(ArithOp::Div),
            Opcode::Prog | Opcode::Update => None,
        }
    }

    /// Streaming instructions forward their result instead of storing it.
    pub const fn is_streaming(self) -> bool {
        matches!(
            self,
            Opcode::AddS | Opcode::SubS | Opcode::MulS | Opcode::DivS
        )
    }
}

impl TryFrom<u8> for Opcode {
    type Error = u8;

    fn try_from(code: u8) -> Result<Self, u8> {
        Opcode::ALL.get(code as usize).copied().ok_or(code)
    }
}

impl fmt::Display for Opcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

impl FromStr for Opcode {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Opcode::ALL
            .iter()
            .copied()
            .find(|op| op.mnemonic().eq_ignore_ascii_case(s))
            .ok_or_else(|| CodecError::UnknownMnemonic(s.to_string()))
    }
}
