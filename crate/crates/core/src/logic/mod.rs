//! Boolean skeleton of a user requirement: slots, minterm tables, POS
//! expressions and minimal Product-of-Sums synthesis.

mod minimize;
mod pos;
mod slot;
mod table;

use alloc::string::String;
use core::fmt;

pub use minimize::minimize_pos;
pub use pos::{enumerate_satisfying, eval_pos, Literal, PosExpression, SumTerm};
pub use slot::Slot;
pub use table::{Assignment, MintermTable};

/// Largest slot count accepted by [`MintermTable`].
pub const MAX_TABLE_SLOTS: usize = 10;
/// Largest slot count [`enumerate_satisfying`] will walk.
pub const MAX_ENUMERATION_SLOTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LogicError {
    MalformedTable(String),
    ArityMismatch { expected: usize, actual: usize },
    MissingSlot(Slot),
    TooManySlots(usize),
    MalformedExpression(String),
}

impl fmt::Display for LogicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicError::MalformedTable(reason) => write!(f, "malformed minterm table: {reason}"),
            LogicError::ArityMismatch { expected, actual } => {
                write!(f, "assignment has {actual} bits, expected {expected}")
            }
            LogicError::MissingSlot(slot) => write!(f, "assignment does not cover slot {slot}"),
            LogicError::TooManySlots(n) => {
                write!(
                    f,
                    "{n} slots exceeds the enumeration limit of {MAX_ENUMERATION_SLOTS}"
                )
            }
            LogicError::MalformedExpression(reason) => write!(f, "malformed expression: {reason}"),
        }
    }
}

impl core::error::Error for LogicError {}
