//! End-to-end query synthesis: slot selection, minterm tables, minimal POS,
//! primitive binding, feasibility against a flight pool, sample assembly
//! and rendering.

mod dataset;
mod pipeline;
mod render;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::analytics::ComplexityMetrics;
use crate::constraint::{ConstraintError, Primitive};
use crate::flight::{FlightError, FlightOption, Route};
use crate::logic::{MintermTable, PosExpression};

pub use dataset::{
    generate_dataset, generate_dataset_with, generate_unit, parse_grid, FlightSource,
    GenerationParams, GridCell, QueryUnit, SyntheticSource, UnitOutput, UnitRunner, REFERENCE_GRID,
};
pub use pipeline::{
    assemble_samples, bind_primitives, feasibility_check, generate_minterms, requirement_satisfied,
    select_slots,
};
pub use render::{
    apply_paraphrase, check_operand_mentions, mention_count, render_requirement, Paraphraser,
};

pub const OPTIONS_PER_SAMPLE: usize = 5;
pub const LETTERS: [char; OPTIONS_PER_SAMPLE] = ['A', 'B', 'C', 'D', 'E'];

/// Shape of the requirement skeleton plus option-matching quotas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QueryConfig {
    pub num_slots: usize,
    pub num_minterms: usize,
    pub min_positives: usize,
    pub min_negatives: usize,
    pub max_subsets_per_query: usize,
}

impl QueryConfig {
    pub const DEFAULT_MAX_SUBSETS: usize = 8;

    /// 2 to 6 slots, 2 to 3 minterms, and fewer minterms than table rows.
    pub fn new(num_slots: usize, num_minterms: usize) -> Result<Self, QueryError> {
        if !(2..=6).contains(&num_slots) {
            return Err(QueryError::BadSlotCount(num_slots));
        }
        if !(2..=3).contains(&num_minterms) {
            return Err(QueryError::BadMintermCount(num_minterms));
        }
        if num_minterms >= 1 << num_slots {
            return Err(QueryError::FullTable {
                slots: num_slots,
                minterms: num_minterms,
            });
        }
        Ok(QueryConfig {
            num_slots,
            num_minterms,
            min_positives: 1,
            min_negatives: 4,
            max_subsets_per_query: Self::DEFAULT_MAX_SUBSETS,
        })
    }

    /// `2x2`-style label used in ids and grid specs.
    pub fn label(&self) -> String {
        format!("{}x{}", self.num_slots, self.num_minterms)
    }
}

/// A rendered requirement with one primitive bound per literal occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedQuery {
    pub id: String,
    pub num_slots: usize,
    pub num_minterms: usize,
    pub table: MintermTable,
    pub pos: PosExpression,
    /// Occurrence id to the primitive bound there (negated literals hold
    /// the negated member of the pair).
    pub bindings: BTreeMap<usize, Primitive>,
    pub text: String,
    pub atypical: bool,
    pub route: Route,
}

impl GeneratedQuery {
    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn bindings(&self) -> &BTreeMap<usize, Primitive> {
        &self.bindings
    }

    pub fn config_key(&self) -> (usize, usize) {
        (self.num_slots, self.num_minterms)
    }
}

/// One multiple-choice item: a query, five options and the gold index.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub sample_id: String,
    pub query_id: String,
    pub query: GeneratedQuery,
    pub options: Vec<FlightOption>,
    pub gold: usize,
    pub metrics: ComplexityMetrics,
    pub gold_entropy: f64,
}

impl Sample {
    pub fn gold_letter(&self) -> char {
        LETTERS[self.gold]
    }
}

pub fn letter_index(letter: char) -> Option<usize> {
    LETTERS.iter().position(|&l| l == letter)
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryError {
    BadSlotCount(usize),
    BadMintermCount(usize),
    FullTable { slots: usize, minterms: usize },
    Constraint(ConstraintError),
    UnboundOccurrence(usize),
    Infeasible { positives: usize, negatives: usize },
    InsufficientNegatives { available: usize, needed: usize },
    InsufficientPositives,
    Flight(FlightError),
    BadGrid(String),
    Abandoned(String),
}

impl From<ConstraintError> for QueryError {
    fn from(e: ConstraintError) -> Self {
        QueryError::Constraint(e)
    }
}

impl From<FlightError> for QueryError {
    fn from(e: FlightError) -> Self {
        QueryError::Flight(e)
    }
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryError::BadSlotCount(k) => write!(f, "slot count {k} outside 2..=6"),
            QueryError::BadMintermCount(m) => write!(f, "minterm count {m} outside 2..=3"),
            QueryError::FullTable { slots, minterms } => {
                write!(f, "{minterms} minterms fill the whole {slots}-slot table")
            }
            QueryError::Constraint(e) => write!(f, "{e}"),
            QueryError::UnboundOccurrence(id) => {
                write!(f, "occurrence {id} has no bound primitive")
            }
            QueryError::Infeasible {
                positives,
                negatives,
            } => {
                write!(f, "infeasible requirement: {positives} matching and {negatives} non-matching flights")
            }
            QueryError::InsufficientNegatives { available, needed } => {
                write!(f, "{available} negative options, need {needed}")
            }
            QueryError::InsufficientPositives => f.write_str("no positive option"),
            QueryError::Flight(e) => write!(f, "{e}"),
            QueryError::BadGrid(reason) => write!(f, "bad grid: {reason}"),
            QueryError::Abandoned(id) => write!(f, "query {id} abandoned after all retries"),
        }
    }
}

impl core::error::Error for QueryError {}
