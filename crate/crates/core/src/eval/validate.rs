use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::EvalError;
use crate::analytics::{complexity_metrics, option_entropy};
use crate::constraint::is_atypical;
use crate::logic::minimize_pos;
use crate::query::{
    check_operand_mentions, render_requirement, requirement_satisfied, GeneratedQuery, QueryError,
    Sample, OPTIONS_PER_SAMPLE,
};

pub const CHECK_NAMES: [&str; 11] = [
    "options_count",
    "oracle",
    "bindings",
    "occurrence_uniqueness",
    "atypical_flag",
    "config_fidelity",
    "metrics_roundtrip",
    "query_text",
    "flight_schema",
    "query_consistency",
    "unique_ids",
];

const ENTROPY_TOLERANCE: f64 = 1e-9;

/// Brute-force evaluation of all options; the unique satisfying index.
pub fn oracle_answer(s: &Sample) -> Result<usize, EvalError> {
    let mut hits = Vec::new();
    for (i, option) in s.options.iter().enumerate() {
        match requirement_satisfied(&s.query, option) {
            Ok(true) => hits.push(i),
            Ok(false) => {}
            Err(QueryError::UnboundOccurrence(occurrence)) => {
                return Err(EvalError::UnboundOccurrence {
                    sample_id: s.sample_id.clone(),
                    occurrence,
                })
            }
            Err(_) => unreachable!("requirement_satisfied only reports unbound occurrences"),
        }
    }
    match hits.len() {
        0 => Err(EvalError::NoSatisfyingOption(s.sample_id.clone())),
        1 => Ok(hits[0]),
        _ => Err(EvalError::MultipleSatisfyingOptions {
            sample_id: s.sample_id.clone(),
            indices: hits,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    /// `id: reason` per failing sample or query.
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub samples: usize,
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }
}

fn bindings_problem(q: &GeneratedQuery) -> Option<String> {
    let occurrences: BTreeSet<usize> = q.pos.literals().map(|l| l.occurrence_id).collect();
    if let Some(extra) = q.bindings.keys().find(|k| !occurrences.contains(k)) {
        return Some(format!("binding for unknown occurrence {extra}"));
    }
    for lit in q.pos.literals() {
        let Some(p) = q.bindings.get(&lit.occurrence_id) else {
            return Some(format!("occurrence {} unbound", lit.occurrence_id));
        };
        if p.slot() != lit.slot {
            return Some(format!(
                "occurrence {} is {} but bound to {}",
                lit.occurrence_id,
                lit.slot,
                p.slot()
            ));
        }
        if p.negated() != lit.negated {
            return Some(format!(
                "occurrence {} binding has the wrong polarity",
                lit.occurrence_id
            ));
        }
    }
    None
}

fn fidelity_problem(q: &GeneratedQuery) -> Option<String> {
    let table = &q.table;
    if table.slots().len() != q.num_slots || table.minterms().len() != q.num_minterms {
        return Some(format!(
            "recorded {}x{} but table is {}x{}",
            q.num_slots,
            q.num_minterms,
            table.slots().len(),
            table.minterms().len()
        ));
    }
    if minimize_pos(table) != q.pos {
        return Some(format!(
            "`{}` is not the minimal form of the recorded table",
            q.pos
        ));
    }
    None
}

/// Re-checks every sample and query invariant; never stops at the first
/// failure.
pub fn validate_dataset(samples: &[Sample]) -> ValidationReport {
    let mut failures: BTreeMap<&'static str, Vec<String>> =
        CHECK_NAMES.iter().map(|&n| (n, Vec::new())).collect();
    let mut fail = |name: &'static str, id: &str, reason: String| {
        failures
            .get_mut(name)
            .expect("known check")
            .push(format!("{id}: {reason}"));
    };

    let mut sample_ids = BTreeSet::new();
    let mut queries: BTreeMap<&str, &GeneratedQuery> = BTreeMap::new();
    for s in samples {
        let id = s.sample_id.as_str();
        let q = &s.query;
        if !sample_ids.insert(id) {
            fail("unique_ids", id, String::from("duplicate sample id"));
        }
        if q.id != s.query_id {
            fail(
                "query_consistency",
                id,
                format!("query id {} differs from {}", q.id, s.query_id),
            );
        }
        match queries.get(s.query_id.as_str()) {
            Some(first) if *first != q => fail(
                "query_consistency",
                id,
                String::from("query differs from earlier sample"),
            ),
            Some(_) => {}
            None => {
                queries.insert(&s.query_id, q);
            }
        }

        if s.options.len() != OPTIONS_PER_SAMPLE || s.gold >= s.options.len() {
            fail(
                "options_count",
                id,
                format!("{} options, gold index {}", s.options.len(), s.gold),
            );
        }
        let binding_issue = bindings_problem(q);
        if let Some(reason) = &binding_issue {
            fail("bindings", id, reason.clone());
        }
        if binding_issue.is_none() {
            match oracle_answer(s) {
                Ok(index) if index == s.gold => {}
                Ok(index) => fail(
                    "oracle",
                    id,
                    format!("oracle picks {index}, gold is {}", s.gold),
                ),
                Err(e) => fail("oracle", id, format!("{e}")),
            }
        }

        let mut seen = BTreeSet::new();
        if let Some(p) = q
            .bindings
            .values()
            .find(|p| !seen.insert((p.slot(), p.operand())))
        {
            fail(
                "occurrence_uniqueness",
                id,
                format!("two {} occurrences share an operand", p.slot()),
            );
        }
        if q.atypical != q.bindings.values().any(is_atypical) {
            fail("atypical_flag", id, format!("recorded {}", q.atypical));
        }
        if let Some(reason) = fidelity_problem(q) {
            fail("config_fidelity", id, reason);
        }

        match complexity_metrics(&q.pos) {
            Ok(m) if m == s.metrics => {}
            Ok(m) => fail(
                "metrics_roundtrip",
                id,
                format!("recorded {:?}, recomputed {m:?}", s.metrics),
            ),
            Err(e) => fail("metrics_roundtrip", id, format!("{e}")),
        }
        if binding_issue.is_none() && s.gold < s.options.len() {
            match option_entropy(q, &s.options[s.gold]) {
                Ok(r) if (r.entropy - s.gold_entropy).abs() <= ENTROPY_TOLERANCE => {}
                Ok(r) => fail(
                    "metrics_roundtrip",
                    id,
                    format!(
                        "gold entropy {} recomputes to {}",
                        s.gold_entropy, r.entropy
                    ),
                ),
                Err(e) => fail("metrics_roundtrip", id, format!("{e}")),
            }
        }

        if binding_issue.is_none() {
            // Template text must account for every operand exactly; a
            // paraphrase only has to keep them.
            let exact = render_requirement(&q.pos, &q.bindings).is_ok_and(|t| t == q.text);
            if let Err(reason) = check_operand_mentions(&q.text, &q.bindings, exact) {
                fail("query_text", id, reason);
            }
        }

        for (i, option) in s.options.iter().enumerate() {
            if let Err(v) = option.validate() {
                fail("flight_schema", id, format!("option {i}: {v}"));
            } else if option.travel_date != q.route.travel_date {
                fail(
                    "flight_schema",
                    id,
                    format!("option {i}: travel date off the query route"),
                );
            }
        }
    }

    ValidationReport {
        samples: samples.len(),
        checks: CHECK_NAMES
            .iter()
            .map(|&name| CheckResult {
                name,
                failures: failures.remove(name).unwrap_or_default(),
            })
            .collect(),
    }
}
