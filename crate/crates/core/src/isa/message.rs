use std::fmt;

use super::{CodecError, Opcode, OpcodeField};

/// Largest address representable in a 12-bit destination field.
pub const MAX_ADDRESS: u16 = 0x0fff;

const OPCODE_SHIFT: u32 = 0;
const DEST_SHIFT: u32 = 4;
const VALUE_SHIFT: u32 = 16;
const NEXT_OPCODE_SHIFT: u32 = 48;
const NEXT_DEST_SHIFT: u32 = 52;

const NIBBLE: u64 = 0xf;
const ADDR: u64 = 0xfff;
const VALUE: u64 = 0xffff_ffff;

/// One 64-bit message: an instruction for the addressed site plus the
/// continuation (`next_opcode`, `next_destination`) a PROG latches.
///
/// Bit 0 is the least-significant bit of the packed word:
///
/// ```text
///  63      52 51  48 47                          16 15      4 3    0
/// +----------+------+------------------------------+---------+------+
/// | next dst | nop  |        f32 payload           |  dest   |  op  |
/// +----------+------+------------------------------+---------+------+
/// ```
///
/// Equality compares the payload bit pattern, so NaN payloads round-trip.
#[derive(Debug, Clone, Copy)]
pub struct MessageWord {
    pub opcode: Opcode,
    pub destination: u16,
    pub value: f32,
    pub next_opcode: Opcode,
    pub next_destination: u16,
}

impl PartialEq for MessageWord {
    fn eq(&self, other: &Self) -> bool {
        self.opcode == other.opcode
            && self.destination == other.destination
            && self.value.to_bits() == other.value.to_bits()
            && self.next_opcode == other.next_opcode
            && self.next_destination == other.next_destination
    }
}

impl Eq for MessageWord {}

impl MessageWord {
    pub fn new(
        opcode: Opcode,
        destination: u16,
        value: f32,
        next_opcode: Opcode,
        next_destination: u16,
    ) -> Self {
        Self {
            opcode,
            destination,
            value,
            next_opcode,
            next_destination,
        }
    }

    /// A message with an empty continuation (`PROG` → 0).
    pub fn simple(opcode: Opcode, destination: u16, value: f32) -> Self {
        Self::new(opcode, destination, value, Opcode::Prog, 0)
    }

    pub fn encode(&self) -> Result<u64, CodecError> {
        for (field, addr) in [
            (OpcodeField::Primary, self.destination),
            (OpcodeField::Next, self.next_destination),
        ] {
            if addr > MAX_ADDRESS {
                return Err(CodecError::AddressOverflow { field, address: addr });
            }
        }
        Ok(((self.opcode.code() as u64) << OPCODE_SHIFT)
            | ((self.destination as u64) << DEST_SHIFT)
            | ((self.value.to_bits() as u64) << VALUE_SHIFT)
            | ((self.next_opcode.code() as u64) << NEXT_OPCODE_SHIFT)
            | ((self.next_destination as u64) << NEXT_DEST_SHIFT))
    }

    pub fn decode(word: u64) -> Result<Self, CodecError> {
        let opcode_at = |shift: u32, field: OpcodeField| {
            let code = ((word >> shift) & NIBBLE) as u8;
            Opcode::try_from(code).map_err(|code| CodecError::InvalidInstruction { field, code })
        };
        Ok(Self {
            opcode: opcode_at(OPCODE_SHIFT, OpcodeField::Primary)?,
            destination: ((word >> DEST_SHIFT) & ADDR) as u16,
            value: f32::from_bits(((word >> VALUE_SHIFT) & VALUE) as u32),
            next_opcode: opcode_at(NEXT_OPCODE_SHIFT, OpcodeField::Next)?,
            next_destination: ((word >> NEXT_DEST_SHIFT) & ADDR) as u16,
        })
    }

    /// Packed word; only valid for messages that already passed address checks.
    pub(crate) fn bits(&self) -> u64 {
        self.encode().unwrap_or(0)
    }
}

/// Assembly form: `OPCODE dest=<u12> val=<f32> next=<OPCODE> ndest=<u12>`.
impl fmt::Display for MessageWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} dest={} val={:?} next={} ndest={}",
            self.opcode, self.destination, self.value, self.next_opcode, self.next_destination
        )
    }
}
