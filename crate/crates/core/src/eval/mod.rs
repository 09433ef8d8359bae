//! Gold-answer oracle, dataset validation and answer-file scoring.

mod score;
mod validate;

use alloc::string::String;
use core::fmt;

pub use score::{score, AnswerFile, ScoreReport, Tally};
pub use validate::{oracle_answer, validate_dataset, CheckResult, ValidationReport, CHECK_NAMES};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvalError {
    NoSatisfyingOption(String),
    MultipleSatisfyingOptions {
        sample_id: String,
        indices: alloc::vec::Vec<usize>,
    },
    UnboundOccurrence {
        sample_id: String,
        occurrence: usize,
    },
    UnknownSampleId(String),
    InvalidLetter {
        sample_id: String,
        letter: String,
    },
    DuplicateAnswer(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::NoSatisfyingOption(id) => {
                write!(f, "{id}: no option satisfies the requirement")
            }
            EvalError::MultipleSatisfyingOptions { sample_id, indices } => {
                write!(
                    f,
                    "{sample_id}: options {indices:?} all satisfy the requirement"
                )
            }
            EvalError::UnboundOccurrence {
                sample_id,
                occurrence,
            } => {
                write!(f, "{sample_id}: occurrence {occurrence} has no binding")
            }
            EvalError::UnknownSampleId(id) => write!(f, "answer for unknown sample {id}"),
            EvalError::InvalidLetter { sample_id, letter } => {
                write!(f, "{sample_id}: answer {letter:?} is not one of A-E")
            }
            EvalError::DuplicateAnswer(id) => write!(f, "sample {id} answered twice"),
        }
    }
}

impl core::error::Error for EvalError {}
