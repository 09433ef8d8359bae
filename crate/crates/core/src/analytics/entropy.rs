use super::AnalyticsError;
use crate::constraint::satisfies;
use crate::flight::FlightOption;
use crate::query::GeneratedQuery;

/// Fraction of a query's primitives an option satisfies, and its binary
/// entropy in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub p_sat: f64,
    pub p_unsat: f64,
    pub entropy: f64,
}

/// `H(p) = -(p log2 p + (1-p) log2 (1-p))` with `0 log 0 = 0`.
pub fn binary_entropy(p_sat: f64) -> f64 {
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * libm::log2(p) };
    term(p_sat) + term(1.0 - p_sat)
}

impl EntropyReport {
    pub fn from_counts(satisfied: usize, total: usize) -> Self {
        let p_sat = satisfied as f64 / total as f64;
        EntropyReport {
            p_sat,
            p_unsat: 1.0 - p_sat,
            entropy: binary_entropy(p_sat),
        }
    }
}

/// One vote per bound occurrence, on the occurrence's positive reading.
pub fn option_entropy(
    q: &GeneratedQuery,
    f: &FlightOption,
) -> Result<EntropyReport, AnalyticsError> {
    let bindings = q.bindings();
    if bindings.is_empty() {
        return Err(AnalyticsError::NoBindings);
    }
    let satisfied = bindings
        .values()
        .filter(|p| satisfies(&p.positive(), f))
        .count();
    Ok(EntropyReport::from_counts(satisfied, bindings.len()))
}
