//! JSON Lines dataset files and their manifest.

use std::collections::BTreeMap;

use chrono::NaiveDate;
use cocoa_core::analytics::ComplexityMetrics;
use cocoa_core::constraint::{
    operand_text, render, template_catalog, Operand, Primitive, Relation,
};
use cocoa_core::flight::{Airport, ClockTime, Route, TicketClass};
use cocoa_core::logic::{Assignment, MintermTable, PosExpression, Slot};
use cocoa_core::query::{GeneratedQuery, GridCell, Sample, LETTERS};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::flights::{flight_from_value, flight_to_value};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct DatasetError {
    pub line: usize,
    pub reason: String,
}

#[derive(Serialize, Deserialize)]
struct WireConfig {
    slots: usize,
    minterms: usize,
}

#[derive(Serialize, Deserialize)]
struct WireTable {
    slots: Vec<String>,
    rows: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WireRoute {
    source: String,
    destination: String,
    travel_date: String,
}

#[derive(Serialize, Deserialize)]
struct WireBinding {
    occurrence_id: usize,
    slot: String,
    relation: String,
    operands: Vec<String>,
    negated: bool,
    template_id: String,
    text: String,
}

#[derive(Serialize, Deserialize)]
struct WireMetrics {
    sum_terms: usize,
    lcc: usize,
    max_degree: usize,
    components: usize,
    gold_entropy: f64,
}

#[derive(Serialize, Deserialize)]
struct WireSample {
    sample_id: String,
    query_id: String,
    config: WireConfig,
    query_text: String,
    pos: String,
    minterm_table: WireTable,
    bindings: Vec<WireBinding>,
    atypical: bool,
    route: WireRoute,
    options: Vec<Value>,
    gold_index: usize,
    gold_letter: String,
    metrics: WireMetrics,
}

fn date_text(d: NaiveDate) -> String {
    d.format("%Y-%m-%d").to_string()
}

/// Operand values as plain strings; their meaning follows from slot and relation.
fn operand_strings(op: &Operand) -> Vec<String> {
    match op {
        Operand::Dollars(v) | Operand::Duration(v) | Operand::Count(v) => vec![v.to_string()],
        Operand::Clock(t) => vec![t.to_string()],
        Operand::Window(a, b) => vec![a.to_string(), b.to_string()],
        Operand::Percent(p) => vec![p.to_string()],
        Operand::Airlines(names) => names.clone(),
        Operand::Class(c) => vec![c.name().to_string()],
        Operand::Date(d) => vec![date_text(*d)],
        Operand::Airports(codes) => codes.clone(),
    }
}

fn parse_operand(slot: Slot, relation: Relation, values: &[String]) -> Result<Operand, String> {
    let one = || match values {
        [v] => Ok(v.as_str()),
        _ => Err(format!(
            "{slot} {} takes one operand, got {}",
            relation.name(),
            values.len()
        )),
    };
    let number = |v: &str| {
        v.parse::<u32>()
            .map_err(|_| format!("{v:?} is not a count"))
    };
    let clock = |v: &str| ClockTime::parse(v).ok_or_else(|| format!("{v:?} is not an HH:MM time"));
    Ok(match slot {
        Slot::Airline => Operand::Airlines(values.to_vec()),
        Slot::TicketClass => {
            let v = one()?;
            Operand::Class(TicketClass::from_name(v).ok_or_else(|| format!("unknown class {v:?}"))?)
        }
        Slot::DepartureTime | Slot::ArrivalTime if relation == Relation::WithinWindow => {
            match values {
                [a, b] => Operand::Window(clock(a)?, clock(b)?),
                _ => return Err(format!("a window takes two times, got {}", values.len())),
            }
        }
        Slot::DepartureTime | Slot::ArrivalTime => Operand::Clock(clock(one()?)?),
        Slot::TotalTravelTime | Slot::LayoverTimes => Operand::Duration(number(one()?)?),
        Slot::NumLayovers => Operand::Count(number(one()?)?),
        Slot::Price => Operand::Dollars(number(one()?)?),
        Slot::EmissionDiff => {
            let v = one()?;
            Operand::Percent(
                v.parse()
                    .map_err(|_| format!("{v:?} is not a percentage"))?,
            )
        }
        Slot::TravelDate => {
            let v = one()?;
            Operand::Date(
                NaiveDate::parse_from_str(v, "%Y-%m-%d")
                    .map_err(|_| format!("{v:?} is not a date"))?,
            )
        }
        Slot::LayoverLocations => Operand::Airports(values.to_vec()),
    })
}

fn to_wire(s: &Sample) -> WireSample {
    let q = &s.query;
    WireSample {
        sample_id: s.sample_id.clone(),
        query_id: s.query_id.clone(),
        config: WireConfig {
            slots: q.num_slots,
            minterms: q.num_minterms,
        },
        query_text: q.text.clone(),
        pos: q.pos.to_string(),
        minterm_table: WireTable {
            slots: q
                .table
                .slots()
                .iter()
                .map(|s| s.name().to_string())
                .collect(),
            rows: q.table.minterms().iter().map(|a| a.to_string()).collect(),
        },
        bindings: q
            .bindings
            .iter()
            .map(|(&occurrence_id, p)| WireBinding {
                occurrence_id,
                slot: p.slot().name().to_string(),
                relation: p.relation().name().to_string(),
                operands: operand_strings(p.operand()),
                negated: p.negated(),
                template_id: p.template_id().to_string(),
                text: render(p).unwrap_or_else(|_| operand_text(p)),
            })
            .collect(),
        atypical: q.atypical,
        route: WireRoute {
            source: q.route.source.code().to_string(),
            destination: q.route.destination.code().to_string(),
            travel_date: date_text(q.route.travel_date),
        },
        options: s.options.iter().map(flight_to_value).collect(),
        gold_index: s.gold,
        gold_letter: s.gold_letter().to_string(),
        metrics: WireMetrics {
            sum_terms: s.metrics.sum_terms,
            lcc: s.metrics.lcc,
            max_degree: s.metrics.max_degree,
            components: s.metrics.components,
            gold_entropy: s.gold_entropy,
        },
    }
}

fn from_wire(w: WireSample) -> Result<Sample, String> {
    let slot = |name: &str| Slot::from_name(name).ok_or_else(|| format!("unknown slot {name:?}"));
    let table_slots = w
        .minterm_table
        .slots
        .iter()
        .map(|n| slot(n))
        .collect::<Result<Vec<_>, _>>()?;
    let rows = w
        .minterm_table
        .rows
        .iter()
        .map(|r| Assignment::parse(r).ok_or_else(|| format!("bad minterm row {r:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    let table = MintermTable::new(table_slots, rows).map_err(|e| e.to_string())?;
    let pos = PosExpression::parse(&w.pos).map_err(|e| e.to_string())?;

    let mut bindings = BTreeMap::new();
    for b in &w.bindings {
        let s = slot(&b.slot)?;
        let relation = Relation::from_name(&b.relation)
            .ok_or_else(|| format!("unknown relation {:?}", b.relation))?;
        let operand = parse_operand(s, relation, &b.operands)?;
        let p = Primitive::from_parts(s, relation, operand, b.negated, &b.template_id)
            .map_err(|e| e.to_string())?;
        if bindings.insert(b.occurrence_id, p).is_some() {
            return Err(format!("occurrence {} bound twice", b.occurrence_id));
        }
    }

    let airport = |code: &str| Airport::from_code(code).map_err(|e| e.to_string());
    let route = Route {
        source: airport(&w.route.source)?,
        destination: airport(&w.route.destination)?,
        travel_date: NaiveDate::parse_from_str(&w.route.travel_date, "%Y-%m-%d")
            .map_err(|_| format!("bad route date {:?}", w.route.travel_date))?,
    };
    let options = w
        .options
        .iter()
        .enumerate()
        .map(|(i, v)| {
            flight_from_value(v).map_err(|(field, reason)| format!("option {i}: {field}: {reason}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if LETTERS.get(w.gold_index).map(|l| l.to_string()) != Some(w.gold_letter.clone()) {
        return Err(format!(
            "gold letter {:?} does not match index {}",
            w.gold_letter, w.gold_index
        ));
    }

    let query = GeneratedQuery {
        id: w.query_id.clone(),
        num_slots: w.config.slots,
        num_minterms: w.config.minterms,
        table,
        pos,
        bindings,
        text: w.query_text,
        atypical: w.atypical,
        route,
    };
    Ok(Sample {
        sample_id: w.sample_id,
        query_id: w.query_id,
        query,
        options,
        gold: w.gold_index,
        metrics: ComplexityMetrics {
            sum_terms: w.metrics.sum_terms,
            components: w.metrics.components,
            lcc: w.metrics.lcc,
            max_degree: w.metrics.max_degree,
        },
        gold_entropy: w.metrics.gold_entropy,
    })
}

pub fn sample_to_line(s: &Sample) -> String {
    serde_json::to_string(&to_wire(s)).expect("samples always serialize")
}

pub fn write_jsonl(samples: &[Sample]) -> String {
    let mut out = String::new();
    for s in samples {
        out.push_str(&sample_to_line(s));
        out.push('\n');
    }
    out
}

/// Parses a dataset; blank lines are skipped.
pub fn read_jsonl(text: &str) -> Result<Vec<Sample>, DatasetError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let fail = |reason: String| DatasetError {
                line: i + 1,
                reason,
            };
            let wire: WireSample = serde_json::from_str(l).map_err(|e| fail(e.to_string()))?;
            from_wire(wire).map_err(fail)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestCell {
    pub slots: usize,
    pub minterms: usize,
    pub unique_queries: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestTemplate {
    pub id: String,
    pub slot: String,
    pub relation: String,
    pub positive: String,
    pub negative: String,
}

/// Sidecar metadata; contains nothing run-dependent beyond the inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub format_version: u32,
    pub master_seed: u64,
    pub split: String,
    pub epoch: String,
    pub flight_source: String,
    pub pool_size: Option<usize>,
    pub max_subsets_per_query: usize,
    pub grid: Vec<ManifestCell>,
    pub total_samples: usize,
    pub paraphrase_command: Option<String>,
    pub templates: Vec<ManifestTemplate>,
}

pub struct ManifestInputs<'a> {
    pub master_seed: u64,
    pub epoch: NaiveDate,
    pub flight_source: String,
    pub pool_size: Option<usize>,
    pub paraphrase_command: Option<&'a str>,
}

impl Manifest {
    pub fn build(inputs: ManifestInputs<'_>, grid: &[GridCell], samples: &[Sample]) -> Self {
        let cells = grid
            .iter()
            .map(|c| ManifestCell {
                slots: c.config.num_slots,
                minterms: c.config.num_minterms,
                unique_queries: c.unique_queries,
                samples: samples
                    .iter()
                    .filter(|s| s.query.config_key() == (c.config.num_slots, c.config.num_minterms))
                    .count(),
            })
            .collect();
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            format_version: FORMAT_VERSION,
            master_seed: inputs.master_seed,
            split: "test".to_string(),
            epoch: date_text(inputs.epoch),
            flight_source: inputs.flight_source,
            pool_size: inputs.pool_size,
            max_subsets_per_query: grid.first().map_or(0, |c| c.config.max_subsets_per_query),
            grid: cells,
            total_samples: samples.len(),
            paraphrase_command: inputs.paraphrase_command.map(str::to_string),
            templates: template_catalog()
                .iter()
                .map(|t| ManifestTemplate {
                    id: t.id.to_string(),
                    slot: t.slot.name().to_string(),
                    relation: t.relation.name().to_string(),
                    positive: t.positive.to_string(),
                    negative: t.negative.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest always serializes");
        text.push('\n');
        text
    }
}

/// `data.jsonl` -> `data.jsonl.manifest.json`.
pub fn manifest_path(dataset: &std::path::Path) -> std::path::PathBuf {
    let mut name = dataset.as_os_str().to_owned();
    name.push(".manifest.json");
    name.into()
}
