use alloc::format;
use alloc::string::String;

use super::{ConstraintError, Operand, Primitive, Relation};
use crate::flight::{format_date, format_duration};
use crate::logic::Slot;

/// A sentence pattern pair; `{v}` is replaced by the operand text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Template {
    pub id: &'static str,
    pub slot: Slot,
    pub relation: Relation,
    pub positive: &'static str,
    pub negative: &'static str,
}

const fn t(
    id: &'static str,
    slot: Slot,
    relation: Relation,
    positive: &'static str,
    negative: &'static str,
) -> Template {
    Template {
        id,
        slot,
        relation,
        positive,
        negative,
    }
}

use Relation::*;

static CATALOG: [Template; 25] = [
    t(
        "airline.equals",
        Slot::Airline,
        Equals,
        "Airline should be {v}.",
        "Airline should not be {v}.",
    ),
    t(
        "airline.one_of",
        Slot::Airline,
        OneOf,
        "Airline should be one of {v}.",
        "Airline should not be one of {v}.",
    ),
    t(
        "ticket_class.equals",
        Slot::TicketClass,
        Equals,
        "Ticket Class should be {v}.",
        "Ticket Class should not be {v}.",
    ),
    t(
        "departure_time.less_than",
        Slot::DepartureTime,
        LessThan,
        "Departure Time should be before {v}.",
        "Departure Time should not be before {v}.",
    ),
    t(
        "departure_time.greater_than",
        Slot::DepartureTime,
        GreaterThan,
        "Departure Time should be after {v}.",
        "Departure Time should not be after {v}.",
    ),
    t(
        "departure_time.within_window",
        Slot::DepartureTime,
        WithinWindow,
        "Departure Time should be between {v}.",
        "Departure Time should not be between {v}.",
    ),
    t(
        "arrival_time.less_than",
        Slot::ArrivalTime,
        LessThan,
        "Arrival Time should be before {v}.",
        "Arrival Time should not be before {v}.",
    ),
    t(
        "arrival_time.greater_than",
        Slot::ArrivalTime,
        GreaterThan,
        "Arrival Time should be after {v}.",
        "Arrival Time should not be after {v}.",
    ),
    t(
        "arrival_time.within_window",
        Slot::ArrivalTime,
        WithinWindow,
        "Arrival Time should be between {v}.",
        "Arrival Time should not be between {v}.",
    ),
    t(
        "total_travel_time.less_than",
        Slot::TotalTravelTime,
        LessThan,
        "Travel Time should be less than {v}.",
        "Travel Time should not be less than {v}.",
    ),
    t(
        "total_travel_time.greater_than",
        Slot::TotalTravelTime,
        GreaterThan,
        "Travel Time should be more than {v}.",
        "Travel Time should not be more than {v}.",
    ),
    t(
        "number_of_layovers.equals",
        Slot::NumLayovers,
        Equals,
        "Number of Layovers should be exactly {v}.",
        "Number of Layovers should not be exactly {v}.",
    ),
    t(
        "number_of_layovers.less_than",
        Slot::NumLayovers,
        LessThan,
        "Number of Layovers should be fewer than {v}.",
        "Number of Layovers should not be fewer than {v}.",
    ),
    t(
        "number_of_layovers.greater_than",
        Slot::NumLayovers,
        GreaterThan,
        "Number of Layovers should be more than {v}.",
        "Number of Layovers should not be more than {v}.",
    ),
    t(
        "average_carbon_emission_difference.less_than.route_average",
        Slot::EmissionDiff,
        LessThan,
        "Carbon Emission should be below {v}.",
        "Carbon Emission should not be below {v}.",
    ),
    t(
        "average_carbon_emission_difference.greater_than.route_average",
        Slot::EmissionDiff,
        GreaterThan,
        "Carbon Emission should be above {v}.",
        "Carbon Emission should not be above {v}.",
    ),
    t(
        "average_carbon_emission_difference.less_than",
        Slot::EmissionDiff,
        LessThan,
        "Carbon Emission relative to the route mean should be less than {v}.",
        "Carbon Emission relative to the route mean should not be less than {v}.",
    ),
    t(
        "average_carbon_emission_difference.greater_than",
        Slot::EmissionDiff,
        GreaterThan,
        "Carbon Emission relative to the route mean should be more than {v}.",
        "Carbon Emission relative to the route mean should not be more than {v}.",
    ),
    t(
        "travel_date.equals",
        Slot::TravelDate,
        Equals,
        "Travel Date should be {v}.",
        "Travel Date should not be {v}.",
    ),
    t(
        "price.less_than",
        Slot::Price,
        LessThan,
        "Price should be less than {v}.",
        "Price should not be less than {v}.",
    ),
    t(
        "price.greater_than",
        Slot::Price,
        GreaterThan,
        "Price should be more than {v}.",
        "Price should not be more than {v}.",
    ),
    t(
        "layover_locations.contains_any",
        Slot::LayoverLocations,
        ContainsAny,
        "Layover Locations should include {v}.",
        "Layover Locations should not include {v}.",
    ),
    t(
        "layover_locations.contains_none",
        Slot::LayoverLocations,
        ContainsNone,
        "Layover Locations should avoid {v}.",
        "Layover Locations should not avoid {v}.",
    ),
    t(
        "layover_times.less_than",
        Slot::LayoverTimes,
        LessThan,
        "Every layover should last less than {v}.",
        "Not every layover should last less than {v}.",
    ),
    t(
        "layover_times.greater_than",
        Slot::LayoverTimes,
        GreaterThan,
        "Every layover should last more than {v}.",
        "Not every layover should last more than {v}.",
    ),
];

/// The embedded template table, exported with dataset metadata.
pub fn template_catalog() -> &'static [Template] {
    &CATALOG
}

pub(super) fn lookup(id: &str) -> Option<&'static Template> {
    CATALOG.iter().find(|t| t.id == id)
}

pub(super) fn template_for(slot: Slot, relation: Relation, operand: &Operand) -> &'static Template {
    let route_average = matches!(operand, Operand::Percent(0));
    CATALOG
        .iter()
        .find(|t| {
            t.slot == slot
                && t.relation == relation
                && (slot != Slot::EmissionDiff || t.id.ends_with(".route_average") == route_average)
        })
        .expect("every legal (slot, relation) has a template")
}

fn join_list(items: &[String], last: &str) -> String {
    match items {
        [] => String::new(),
        [only] => only.clone(),
        [init @ .., tail] => format!("{} {last} {tail}", init.join(", ")),
    }
}

/// The operand as it appears inside the rendered sentence.
pub fn operand_text(p: &Primitive) -> String {
    match p.operand() {
        Operand::Dollars(v) => format!("${v}"),
        Operand::Duration(m) => format_duration(*m),
        Operand::Clock(t) => t.am_pm(),
        Operand::Window(a, b) => format!("{} and {}", a.am_pm(), b.am_pm()),
        Operand::Count(n) => format!("{n}"),
        Operand::Percent(0) => String::from("the route average"),
        Operand::Percent(p) => format!("{p:+}%"),
        Operand::Airlines(names) => join_list(names, "or"),
        Operand::Class(c) => String::from(c.name()),
        Operand::Date(d) => format_date(*d),
        Operand::Airports(codes) => {
            let last = if p.relation() == Relation::ContainsNone {
                "and"
            } else {
                "or"
            };
            join_list(codes, last)
        }
    }
}

/// Renders a primitive as one English sentence.
pub fn render(p: &Primitive) -> Result<String, ConstraintError> {
    let template = lookup(p.template_id())
        .ok_or_else(|| ConstraintError::UnknownTemplate(p.template_id().into()))?;
    let pattern = if p.negated() {
        template.negative
    } else {
        template.positive
    };
    Ok(pattern.replace("{v}", &operand_text(p)))
}
