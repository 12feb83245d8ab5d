use super::{CodecError, Opcode};

/// Outcome of running one operational instruction against a site register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Execution {
    pub stored: f32,
    /// Value to forward under the site's latched continuation (streaming forms only).
    pub emitted: Option<f32>,
    /// The produced value is NaN or infinite.
    pub nonfinite: bool,
}

/// Fabric-independent semantics of every instruction except PROG.
///
/// * `UPDATE` overwrites the register with `incoming`.
/// * `A_ADD`..`A_DIV` accumulate `stored ∘ incoming` into the register.
/// * `A_ADDS`..`A_DIVS` leave the register alone and emit `stored ∘ incoming`.
///
/// Non-commutative operators keep the stored value on the left.
pub fn apply_instruction(kind: Opcode, incoming: f32, stored: f32) -> Result<Execution, CodecError> {
    let exec = match kind {
        Opcode::Prog => return Err(CodecError::NotExecutable(kind)),
        Opcode::Update => Execution {
            stored: incoming,
            emitted: None,
            nonfinite: !incoming.is_finite(),
        },
        op => {
            // every remaining opcode has an arithmetic form
            let result = op.arith().map(|a| a.apply(stored, incoming)).unwrap_or(stored);
            if op.is_streaming() {
                Execution {
                    stored,
                    emitted: Some(result),
                    nonfinite: !result.is_finite(),
                }
            } else {
                Execution {
                    stored: result,
                    emitted: None,
                    nonfinite: !result.is_finite(),
                }
            }
        }
    };
    Ok(exec)
}
