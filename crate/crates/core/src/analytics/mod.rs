//! Complexity and confusion metrics: dependency graphs over slots,
//! per-option entropy and dataset-level statistics.

mod entropy;
mod graph;
mod stats;

use core::fmt;

pub use entropy::{binary_entropy, option_entropy, EntropyReport};
pub use graph::{build_dependency_graph, complexity_metrics, ComplexityMetrics, DependencyGraph};
pub use stats::{dataset_stats, token_count, vocabulary_size, CellStats, DatasetStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyticsError {
    EmptyExpression,
    NoBindings,
    EmptyDataset,
}

impl fmt::Display for AnalyticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AnalyticsError::EmptyExpression => "expression has no sum terms",
            AnalyticsError::NoBindings => "query has no bound primitives",
            AnalyticsError::EmptyDataset => "dataset is empty",
        })
    }
}

impl core::error::Error for AnalyticsError {}
