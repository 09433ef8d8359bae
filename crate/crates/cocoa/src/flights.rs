//! Flight record JSON: serialization, validated import and file-backed pools.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use cocoa_core::flight::{Airport, ClockTime, FlightOption, Route, RouteContext, TicketClass};
use cocoa_core::query::{FlightSource, QueryError};
use cocoa_core::rng::StageRng;
use rand::Rng;
use serde::Serialize;
use serde_json::{Map, Value};

pub const KNOWN_FIELDS: [&str; 14] = [
    "airline",
    "ticket_class",
    "travel_date",
    "departure_time",
    "arrival_time",
    "arrival_day_offset",
    "total_travel_time_minutes",
    "num_layovers",
    "layover_locations",
    "layover_times_minutes",
    "price_usd",
    "emission_diff_pct",
    "source",
    "destination",
];

#[derive(Debug, thiserror::Error)]
pub enum ImportError {
    #[error("malformed flight document: {0}")]
    Parse(String),
    #[error("record {index}: field `{field}`: {reason}")]
    SchemaViolation {
        index: usize,
        field: String,
        reason: String,
    },
}

/// Record layout on disk; field order is the serialization order.
#[derive(Serialize)]
struct FlightRecord<'a> {
    airline: &'a str,
    ticket_class: &'static str,
    travel_date: String,
    departure_time: String,
    arrival_time: String,
    arrival_day_offset: u32,
    total_travel_time_minutes: u32,
    num_layovers: u32,
    layover_locations: Vec<&'a str>,
    layover_times_minutes: &'a [u32],
    price_usd: u32,
    emission_diff_pct: f64,
}

pub fn flight_to_value(f: &FlightOption) -> Value {
    let record = FlightRecord {
        airline: &f.airline,
        ticket_class: f.ticket_class.name(),
        travel_date: f.travel_date.format("%Y-%m-%d").to_string(),
        departure_time: f.departure_time.to_string(),
        arrival_time: f.arrival_time.to_string(),
        arrival_day_offset: f.arrival_day_offset,
        total_travel_time_minutes: f.total_travel_time,
        num_layovers: f.num_layovers,
        layover_locations: f.layover_locations.iter().map(Airport::code).collect(),
        layover_times_minutes: &f.layover_times,
        price_usd: f.price,
        emission_diff_pct: f.emission_diff_pct,
    };
    serde_json::to_value(record).expect("flight records always serialize")
}

type FieldResult<T> = Result<T, (String, String)>;

fn field<'a>(obj: &'a Map<String, Value>, name: &str) -> FieldResult<&'a Value> {
    obj.get(name)
        .ok_or_else(|| (name.to_string(), "missing".to_string()))
}

fn str_field<'a>(obj: &'a Map<String, Value>, name: &str) -> FieldResult<&'a str> {
    field(obj, name)?
        .as_str()
        .ok_or_else(|| (name.to_string(), "expected a string".to_string()))
}

fn u32_field(obj: &Map<String, Value>, name: &str) -> FieldResult<u32> {
    field(obj, name)?
        .as_u64()
        .and_then(|v| u32::try_from(v).ok())
        .ok_or_else(|| {
            (
                name.to_string(),
                "expected a non-negative integer".to_string(),
            )
        })
}

fn parse_with<T>(
    obj: &Map<String, Value>,
    name: &str,
    what: &str,
    parse: impl Fn(&str) -> Option<T>,
) -> FieldResult<T> {
    let raw = str_field(obj, name)?;
    parse(raw).ok_or_else(|| (name.to_string(), format!("{raw:?} is not {what}")))
}

/// Parses and validates one record against the flight invariants.
pub fn flight_from_value(value: &Value) -> FieldResult<FlightOption> {
    let obj = value
        .as_object()
        .ok_or_else(|| ("<record>".to_string(), "expected an object".to_string()))?;
    let list = |name: &str| {
        field(obj, name)?
            .as_array()
            .ok_or_else(|| (name.to_string(), "expected an array".to_string()))
    };
    let layover_locations = list("layover_locations")?
        .iter()
        .map(|v| {
            v.as_str()
                .and_then(|code| Airport::from_code(code).ok())
                .ok_or_else(|| {
                    (
                        "layover_locations".to_string(),
                        format!("{v} is not an IATA code"),
                    )
                })
        })
        .collect::<FieldResult<Vec<_>>>()?;
    let layover_times = list("layover_times_minutes")?
        .iter()
        .map(|v| {
            v.as_u64()
                .and_then(|m| u32::try_from(m).ok())
                .ok_or_else(|| {
                    (
                        "layover_times_minutes".to_string(),
                        format!("{v} is not a minute count"),
                    )
                })
        })
        .collect::<FieldResult<Vec<_>>>()?;
    let flight = FlightOption {
        airline: str_field(obj, "airline")?.to_string(),
        ticket_class: parse_with(
            obj,
            "ticket_class",
            "economy, business or first",
            TicketClass::from_name,
        )?,
        travel_date: parse_with(obj, "travel_date", "a YYYY-MM-DD date", |s| {
            NaiveDate::parse_from_str(s, "%Y-%m-%d").ok()
        })?,
        departure_time: parse_with(obj, "departure_time", "an HH:MM time", ClockTime::parse)?,
        arrival_time: parse_with(obj, "arrival_time", "an HH:MM time", ClockTime::parse)?,
        arrival_day_offset: u32_field(obj, "arrival_day_offset")?,
        total_travel_time: u32_field(obj, "total_travel_time_minutes")?,
        num_layovers: u32_field(obj, "num_layovers")?,
        layover_locations,
        layover_times,
        price: u32_field(obj, "price_usd")?,
        emission_diff_pct: field(obj, "emission_diff_pct")?.as_f64().ok_or_else(|| {
            (
                "emission_diff_pct".to_string(),
                "expected a number".to_string(),
            )
        })?,
    };
    flight
        .validate()
        .map_err(|v| (v.field.to_string(), v.reason))?;
    Ok(flight)
}

/// Result of importing a flight document.
#[derive(Debug, Clone, PartialEq)]
pub struct ImportedFlights {
    pub flights: Vec<FlightOption>,
    /// Optional `source`/`destination` per record, in record order.
    pub endpoints: Vec<Option<(Airport, Airport)>>,
    /// Fields outside the schema; ignored on import.
    pub ignored_fields: BTreeSet<String>,
}

pub fn import_flights(document: &str) -> Result<ImportedFlights, ImportError> {
    let parsed: Value =
        serde_json::from_str(document).map_err(|e| ImportError::Parse(e.to_string()))?;
    let records = parsed
        .as_array()
        .ok_or_else(|| ImportError::Parse("expected an array of records".into()))?;
    let mut out = ImportedFlights {
        flights: Vec::new(),
        endpoints: Vec::new(),
        ignored_fields: BTreeSet::new(),
    };
    for (index, record) in records.iter().enumerate() {
        let violation = |(field, reason): (String, String)| ImportError::SchemaViolation {
            index,
            field,
            reason,
        };
        let flight = flight_from_value(record).map_err(violation)?;
        let obj = record.as_object().expect("checked by flight_from_value");
        out.ignored_fields.extend(
            obj.keys()
                .filter(|k| !KNOWN_FIELDS.contains(&k.as_str()))
                .cloned(),
        );
        let endpoint = |name: &str| -> Result<Option<Airport>, ImportError> {
            match obj.get(name) {
                None => Ok(None),
                Some(v) => v
                    .as_str()
                    .and_then(|code| Airport::from_code(code).ok())
                    .map(Some)
                    .ok_or_else(|| {
                        violation((name.to_string(), format!("{v} is not an IATA code")))
                    }),
            }
        };
        let endpoints = match (endpoint("source")?, endpoint("destination")?) {
            (Some(s), Some(d)) => Some((s, d)),
            (None, None) => None,
            _ => {
                return Err(violation((
                    "source".into(),
                    "source and destination must appear together".into(),
                )))
            }
        };
        out.flights.push(flight);
        out.endpoints.push(endpoints);
    }
    Ok(out)
}

pub fn flights_to_json(flights: &[FlightOption]) -> String {
    let values: Vec<Value> = flights.iter().map(flight_to_value).collect();
    serde_json::to_string_pretty(&values).expect("values always serialize")
}

/// Pools built from imported records grouped by route and date.
#[derive(Debug, Clone)]
pub struct FileSource {
    routes: Vec<RouteContext>,
}

impl FileSource {
    /// Routes with fewer than `min_pool` flights are dropped.
    pub fn from_imported(imported: ImportedFlights, min_pool: usize) -> Result<Self, ImportError> {
        let mut groups: BTreeMap<(String, String, NaiveDate), (Route, Vec<FlightOption>)> =
            BTreeMap::new();
        for (index, (flight, endpoints)) in imported
            .flights
            .into_iter()
            .zip(imported.endpoints)
            .enumerate()
        {
            let Some((source, destination)) = endpoints else {
                return Err(ImportError::SchemaViolation {
                    index,
                    field: "source".into(),
                    reason: "route pools need source and destination on every record".into(),
                });
            };
            let key = (
                source.code().to_string(),
                destination.code().to_string(),
                flight.travel_date,
            );
            let route = Route {
                source,
                destination,
                travel_date: flight.travel_date,
            };
            groups
                .entry(key)
                .or_insert_with(|| (route, Vec::new()))
                .1
                .push(flight);
        }
        let mut routes = Vec::new();
        for (route, pool) in groups.into_values() {
            if pool.len() < min_pool {
                log::info!(
                    "skipping {}-{} on {}: {} flights",
                    route.source.code(),
                    route.destination.code(),
                    route.travel_date,
                    pool.len()
                );
                continue;
            }
            let ctx = RouteContext::new(route, pool).map_err(|e| ImportError::SchemaViolation {
                index: 0,
                field: "source".into(),
                reason: e.to_string(),
            })?;
            routes.push(ctx);
        }
        if routes.is_empty() {
            return Err(ImportError::Parse(format!(
                "no route has at least {min_pool} flights"
            )));
        }
        Ok(FileSource { routes })
    }

    pub fn routes(&self) -> &[RouteContext] {
        &self.routes
    }
}

impl FlightSource for FileSource {
    fn draw_route(&self, rng: &mut StageRng) -> Result<RouteContext, QueryError> {
        Ok(self.routes[rng.gen_range(0..self.routes.len())].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RECORD: &str = r#"{
        "airline": "British Airways", "ticket_class": "economy", "travel_date": "2024-04-24",
        "departure_time": "21:40", "arrival_time": "16:05", "arrival_day_offset": 1,
        "total_travel_time_minutes": 685, "num_layovers": 1, "layover_locations": ["LHR"],
        "layover_times_minutes": [95], "price_usd": 300, "emission_diff_pct": -4,
        "aircraft": "Boeing 777", "source": "MEX", "destination": "CDG"
    }"#;

    #[test]
    fn one_record() {
        let imported = import_flights(&format!("[{RECORD}]")).unwrap();
        assert_eq!(imported.flights.len(), 1);
        let f = &imported.flights[0];
        assert_eq!(
            (f.price, f.total_travel_time, f.layover_times.as_slice()),
            (300, 685, &[95][..])
        );
        assert_eq!(
            imported.ignored_fields.iter().collect::<Vec<_>>(),
            ["aircraft"]
        );
        assert_eq!(
            imported.endpoints[0]
                .as_ref()
                .map(|(s, d)| (s.code(), d.code())),
            Some(("MEX", "CDG"))
        );
    }

    #[test]
    fn layover_mismatch_is_a_schema_violation() {
        let broken = RECORD.replace(r#""num_layovers": 1"#, r#""num_layovers": 2"#);
        let err = import_flights(&format!("[{RECORD}, {broken}]")).unwrap_err();
        assert!(
            matches!(err, ImportError::SchemaViolation { index: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn bad_types_name_the_field() {
        let broken = RECORD.replace(r#""price_usd": 300"#, r#""price_usd": "cheap""#);
        match import_flights(&format!("[{broken}]")).unwrap_err() {
            ImportError::SchemaViolation {
                index: 0, field, ..
            } => assert_eq!(field, "price_usd"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn empty_and_malformed_documents() {
        assert!(import_flights("[]").unwrap().flights.is_empty());
        assert!(matches!(import_flights("{"), Err(ImportError::Parse(_))));
        assert!(matches!(import_flights("{}"), Err(ImportError::Parse(_))));
    }
}
