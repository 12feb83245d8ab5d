//! Message words and instruction semantics.
//!
//! Everything here is pure: packing and unpacking the 64-bit message word,
//! the ten-instruction set, and what each operational instruction does to a
//! site's register. Routing and timing live in [`crate::fabric`].

mod asm;
mod exec;
mod message;
mod opcode;

pub use asm::{assemble, disassemble, from_hex, parse_message, to_hex};
pub(crate) use asm::strip_comment;
pub use exec::{apply_instruction, Execution};
pub use message::{MessageWord, MAX_ADDRESS};
pub use opcode::{ArithOp, Opcode};

use std::fmt;

/// Which of the two opcode/address slots a codec error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpcodeField {
    Primary,
    Next,
}

impl fmt::Display for OpcodeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpcodeField::Primary => "opcode (bits 0-3)",
            OpcodeField::Next => "next opcode (bits 48-51)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodecError {
    #[error("invalid instruction code {code} in {field}")]
    InvalidInstruction { field: OpcodeField, code: u8 },
    #[error("address {address} in {field} slot exceeds 12 bits")]
    AddressOverflow { field: OpcodeField, address: u16 },
    #[error("unknown mnemonic `{0}`")]
    UnknownMnemonic(String),
    #[error("{0} is handled by the site state machine, not the execution unit")]
    NotExecutable(Opcode),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
