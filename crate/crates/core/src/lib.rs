//! Core of the cocoa benchmark synthesizer.
//!
//! Builds multiple-choice flight-booking questions whose user requirement is
//! a minimal Product-of-Sums over flight attributes ("slots"), with every
//! literal occurrence bound to a concrete constraint on a flight field.
//! Everything here is pure and `no_std` (with `alloc`); file formats, the
//! importer and the command line live in the `cocoa` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analytics;
pub mod constraint;
pub mod eval;
pub mod flight;
pub mod logic;
pub mod query;
pub mod rng;

pub use analytics::{ComplexityMetrics, DependencyGraph, EntropyReport};
pub use constraint::{Operand, Primitive, PrimitivePair, Relation};
pub use flight::{Airport, ClockTime, FlightOption, RouteContext, TicketClass};
pub use logic::{Assignment, Literal, MintermTable, PosExpression, Slot, SumTerm};
pub use query::{GeneratedQuery, QueryConfig, Sample};
