//! Flight option data model, pool diagnostics and the seeded synthetic
//! flight generator.

mod airports;
mod synth;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use chrono::NaiveDate;
use core::fmt;

pub use airports::{city_of, AIRLINES, BUSIEST_AIRPORTS};
pub use synth::synthesize_flights;

pub const MINUTES_PER_DAY: u32 = 1440;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TicketClass {
    Economy,
    Business,
    First,
}

impl TicketClass {
    pub const ALL: [TicketClass; 3] = [
        TicketClass::Economy,
        TicketClass::Business,
        TicketClass::First,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TicketClass::Economy => "economy",
            TicketClass::Business => "business",
            TicketClass::First => "first",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        TicketClass::ALL.iter().copied().find(|c| c.name() == name)
    }
}

impl fmt::Display for TicketClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minutes since local midnight, in `[0, 1440)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClockTime(u16);

impl ClockTime {
    pub fn new(minutes: u32) -> Option<Self> {
        (minutes < MINUTES_PER_DAY).then_some(ClockTime(minutes as u16))
    }

    pub fn minutes(self) -> u32 {
        u32::from(self.0)
    }

    /// Parses `HH:MM` (24-hour).
    pub fn parse(text: &str) -> Option<Self> {
        let (h, m) = text.split_once(':')?;
        if h.len() != 2 || m.len() != 2 {
            return None;
        }
        let (h, m): (u32, u32) = (h.parse().ok()?, m.parse().ok()?);
        if h >= 24 || m >= 60 {
            return None;
        }
        ClockTime::new(h * 60 + m)
    }

    /// `HH:MM am/pm` on a 12-hour clock.
    pub fn am_pm(self) -> String {
        let (h, m) = (self.0 / 60, self.0 % 60);
        let suffix = if h < 12 { "am" } else { "pm" };
        let h12 = match h % 12 {
            0 => 12,
            h => h,
        };
        format!("{h12:02}:{m:02} {suffix}")
    }
}

impl fmt::Display for ClockTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.0 / 60, self.0 % 60)
    }
}

/// `22 hours and 30 minutes`, `1 hour`, `45 minutes`.
pub fn format_duration(minutes: u32) -> String {
    let plural = |n: u32, unit: &str| {
        if n == 1 {
            format!("1 {unit}")
        } else {
            format!("{n} {unit}s")
        }
    };
    let (h, m) = (minutes / 60, minutes % 60);
    match (h, m) {
        (0, m) => plural(m, "minute"),
        (h, 0) => plural(h, "hour"),
        (h, m) => format!("{} and {}", plural(h, "hour"), plural(m, "minute")),
    }
}

/// `April 24, 2024`.
pub fn format_date(date: NaiveDate) -> String {
    date.format("%B %-d, %Y").to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Airport {
    code: String,
    city: String,
}

impl Airport {
    /// Resolves the city from the embedded airport list; unknown but
    /// well-formed codes get an empty city.
    pub fn from_code(code: &str) -> Result<Self, FlightError> {
        if !is_iata_code(code) {
            return Err(FlightError::InvalidAirport(code.into()));
        }
        Ok(Airport {
            code: code.into(),
            city: city_of(code).unwrap_or_default().into(),
        })
    }

    pub fn code(&self) -> &str {
        &self.code
    }

    pub fn city(&self) -> &str {
        &self.city
    }
}

pub fn is_iata_code(code: &str) -> bool {
    code.len() == 3 && code.bytes().all(|b| b.is_ascii_uppercase())
}

/// One flight option, mirroring the scraped schema.
#[derive(Debug, Clone, PartialEq)]
pub struct FlightOption {
    pub airline: String,
    pub ticket_class: TicketClass,
    pub travel_date: NaiveDate,
    pub departure_time: ClockTime,
    pub arrival_time: ClockTime,
    pub arrival_day_offset: u32,
    /// Minutes, door to door.
    pub total_travel_time: u32,
    pub num_layovers: u32,
    pub layover_locations: Vec<Airport>,
    /// Minutes, one per layover.
    pub layover_times: Vec<u32>,
    /// Whole US dollars.
    pub price: u32,
    /// Signed percent difference from the route average.
    pub emission_diff_pct: f64,
}

/// A field-level invariant breach.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldViolation {
    pub field: &'static str,
    pub reason: String,
}

impl fmt::Display for FieldViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.reason)
    }
}

impl FlightOption {
    pub fn validate(&self) -> Result<(), FieldViolation> {
        let fail = |field, reason: String| Err(FieldViolation { field, reason });
        if self.airline.trim().is_empty() {
            return fail("airline", "empty airline".into());
        }
        if self.total_travel_time == 0 {
            return fail("total_travel_time_minutes", "must be positive".into());
        }
        let n = self.num_layovers as usize;
        if self.layover_locations.len() != n {
            return fail(
                "layover_locations",
                format!(
                    "{} locations for {n} layovers",
                    self.layover_locations.len()
                ),
            );
        }
        if self.layover_times.len() != n {
            return fail(
                "layover_times_minutes",
                format!("{} times for {n} layovers", self.layover_times.len()),
            );
        }
        if self.layover_times.contains(&0) {
            return fail(
                "layover_times_minutes",
                "layover time must be positive".into(),
            );
        }
        let layover_total: u64 = self.layover_times.iter().map(|&t| u64::from(t)).sum();
        if u64::from(self.total_travel_time) < layover_total {
            return fail(
                "total_travel_time_minutes",
                format!(
                    "{} is shorter than total layover time {layover_total}",
                    self.total_travel_time
                ),
            );
        }
        if self.price == 0 {
            return fail("price_usd", "must be positive".into());
        }
        if !self.emission_diff_pct.is_finite() {
            return fail("emission_diff_pct", "must be finite".into());
        }
        Ok(())
    }

    /// Field invariants plus a travel date strictly after `epoch`.
    pub fn validate_after(&self, epoch: NaiveDate) -> Result<(), FieldViolation> {
        self.validate()?;
        if self.travel_date <= epoch {
            return Err(FieldViolation {
                field: "travel_date",
                reason: format!(
                    "{} is not after the generation epoch {epoch}",
                    self.travel_date
                ),
            });
        }
        Ok(())
    }
}

/// Multi-line `Field: value` presentation of a flight, as shown to a reader
/// of a multiple-choice question.
pub fn render_option(f: &FlightOption) -> String {
    let arrival = match f.arrival_day_offset {
        0 => f.arrival_time.am_pm(),
        1 => format!("{} (+1 day)", f.arrival_time.am_pm()),
        d => format!("{} (+{d} days)", f.arrival_time.am_pm()),
    };
    let locations = if f.layover_locations.is_empty() {
        String::from("none")
    } else {
        f.layover_locations
            .iter()
            .map(|a| {
                if a.city.is_empty() {
                    a.code.clone()
                } else {
                    format!("{} ({})", a.code, a.city)
                }
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let times = if f.layover_times.is_empty() {
        String::from("none")
    } else {
        f.layover_times
            .iter()
            .map(|&t| format_duration(t))
            .collect::<Vec<_>>()
            .join(", ")
    };
    format!(
        "Airline: {}\nTicket Class: {}\nTravel Date: {}\nDeparture Time: {}\nArrival Time: {}\n\
         Total Travel Time: {}\nNumber of Layovers: {}\nLayover Locations: {}\nLayover Times: {}\n\
         Price: ${}\nCarbon Emission: {:+}% relative to the route average",
        f.airline,
        f.ticket_class,
        format_date(f.travel_date),
        f.departure_time.am_pm(),
        arrival,
        format_duration(f.total_travel_time),
        f.num_layovers,
        locations,
        times,
        f.price,
        f.emission_diff_pct,
    )
}

/// Source, destination and date of a flight search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Route {
    pub source: Airport,
    pub destination: Airport,
    pub travel_date: NaiveDate,
}

/// A route together with its candidate flight pool.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteContext {
    route: Route,
    pool: Vec<FlightOption>,
}

impl RouteContext {
    pub fn new(route: Route, pool: Vec<FlightOption>) -> Result<Self, FlightError> {
        if route.source == route.destination {
            return Err(FlightError::SameEndpoints);
        }
        if pool.iter().any(|f| f.travel_date != route.travel_date) {
            return Err(FlightError::MixedPool);
        }
        Ok(RouteContext { route, pool })
    }

    pub fn route(&self) -> &Route {
        &self.route
    }

    pub fn pool(&self) -> &[FlightOption] {
        &self.pool
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoolDiagnostics {
    pub economy: usize,
    pub business: usize,
    pub first: usize,
    pub min_price: u32,
    pub max_price: u32,
    pub emission_mean: f64,
}

impl PoolDiagnostics {
    pub fn count(&self, class: TicketClass) -> usize {
        match class {
            TicketClass::Economy => self.economy,
            TicketClass::Business => self.business,
            TicketClass::First => self.first,
        }
    }
}

/// Class counts, price range and mean emission difference of a pool.
pub fn route_average_checks(pool: &[FlightOption]) -> Result<PoolDiagnostics, FlightError> {
    if pool.is_empty() {
        return Err(FlightError::EmptyPool);
    }
    let mut d = PoolDiagnostics {
        economy: 0,
        business: 0,
        first: 0,
        min_price: u32::MAX,
        max_price: 0,
        emission_mean: 0.0,
    };
    for f in pool {
        match f.ticket_class {
            TicketClass::Economy => d.economy += 1,
            TicketClass::Business => d.business += 1,
            TicketClass::First => d.first += 1,
        }
        d.min_price = d.min_price.min(f.price);
        d.max_price = d.max_price.max(f.price);
        d.emission_mean += f.emission_diff_pct;
    }
    d.emission_mean /= pool.len() as f64;
    Ok(d)
}

#[derive(Debug, Clone, PartialEq)]
pub enum FlightError {
    CountTooSmall(usize),
    EmptyPool,
    InvalidAirport(String),
    SameEndpoints,
    MixedPool,
}

impl fmt::Display for FlightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlightError::CountTooSmall(n) => {
                write!(f, "flight count {n} is below the minimum of 5")
            }
            FlightError::EmptyPool => f.write_str("empty flight pool"),
            FlightError::InvalidAirport(code) => write!(f, "invalid IATA code {code:?}"),
            FlightError::SameEndpoints => {
                f.write_str("source and destination are the same airport")
            }
            FlightError::MixedPool => {
                f.write_str("pool flights do not share the route's travel date")
            }
        }
    }
}

impl core::error::Error for FlightError {}
