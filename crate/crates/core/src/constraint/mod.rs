//! Primitives: concrete constraints on one slot occurrence, generated in
//! positive/negated pairs, evaluated against flights and rendered to text.

mod generate;
mod templates;

use alloc::string::String;
use alloc::vec::Vec;
use chrono::NaiveDate;
use core::fmt;

use crate::flight::{ClockTime, FlightOption, TicketClass};
use crate::logic::Slot;

pub use generate::{generate_primitive, MAX_DRAWS};
pub use templates::{operand_text, render, template_catalog, Template};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Relation {
    LessThan,
    GreaterThan,
    Equals,
    OneOf,
    WithinWindow,
    ContainsAny,
    ContainsNone,
}

impl Relation {
    pub const ALL: [Relation; 7] = [
        Relation::LessThan,
        Relation::GreaterThan,
        Relation::Equals,
        Relation::OneOf,
        Relation::WithinWindow,
        Relation::ContainsAny,
        Relation::ContainsNone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Relation::LessThan => "less_than",
            Relation::GreaterThan => "greater_than",
            Relation::Equals => "equals",
            Relation::OneOf => "one_of",
            Relation::WithinWindow => "within_window",
            Relation::ContainsAny => "contains_any",
            Relation::ContainsNone => "contains_none",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Relation::ALL.iter().copied().find(|r| r.name() == name)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Typed constraint operand, in the units of its slot.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operand {
    Dollars(u32),
    /// Minutes.
    Duration(u32),
    Clock(ClockTime),
    /// Open interval `(start, end)` on the clock, `start < end`.
    Window(ClockTime, ClockTime),
    Count(u32),
    /// Whole percent relative to the route average.
    Percent(i32),
    Airlines(Vec<String>),
    Class(TicketClass),
    Date(NaiveDate),
    /// IATA codes.
    Airports(Vec<String>),
}

/// Whether `relation` with `operand` is a legal constraint on `slot`.
pub fn is_legal(slot: Slot, relation: Relation, operand: &Operand) -> bool {
    use Operand as O;
    use Relation as R;
    match (slot, relation, operand) {
        (Slot::Airline, R::Equals, O::Airlines(names)) => names.len() == 1,
        (Slot::Airline, R::OneOf, O::Airlines(names)) => names.len() >= 2,
        (Slot::TicketClass, R::Equals, O::Class(_)) => true,
        (Slot::DepartureTime | Slot::ArrivalTime, R::LessThan | R::GreaterThan, O::Clock(_)) => {
            true
        }
        (Slot::DepartureTime | Slot::ArrivalTime, R::WithinWindow, O::Window(a, b)) => a < b,
        (
            Slot::TotalTravelTime | Slot::LayoverTimes,
            R::LessThan | R::GreaterThan,
            O::Duration(_),
        ) => true,
        (Slot::NumLayovers, R::Equals | R::LessThan | R::GreaterThan, O::Count(_)) => true,
        (Slot::EmissionDiff, R::LessThan | R::GreaterThan, O::Percent(_)) => true,
        (Slot::TravelDate, R::Equals, O::Date(_)) => true,
        (Slot::Price, R::LessThan | R::GreaterThan, O::Dollars(_)) => true,
        (Slot::LayoverLocations, R::ContainsAny | R::ContainsNone, O::Airports(codes)) => {
            !codes.is_empty()
        }
        _ => false,
    }
}

/// One constraint on one slot occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitive {
    slot: Slot,
    relation: Relation,
    operand: Operand,
    negated: bool,
    template_id: &'static str,
}

impl Primitive {
    pub fn new(
        slot: Slot,
        relation: Relation,
        operand: Operand,
        negated: bool,
    ) -> Result<Self, ConstraintError> {
        if !is_legal(slot, relation, &operand) {
            return Err(ConstraintError::IllegalRelation { slot, relation });
        }
        let template_id = templates::template_for(slot, relation, &operand).id;
        Ok(Primitive {
            slot,
            relation,
            operand,
            negated,
            template_id,
        })
    }

    /// Rebuilds a primitive from stored parts, checking the recorded
    /// template id against the catalog.
    pub fn from_parts(
        slot: Slot,
        relation: Relation,
        operand: Operand,
        negated: bool,
        template_id: &str,
    ) -> Result<Self, ConstraintError> {
        let known = templates::lookup(template_id)
            .ok_or_else(|| ConstraintError::UnknownTemplate(template_id.into()))?;
        let p = Primitive::new(slot, relation, operand, negated)?;
        if p.template_id != known.id {
            return Err(ConstraintError::TemplateMismatch(template_id.into()));
        }
        Ok(p)
    }

    pub fn slot(&self) -> Slot {
        self.slot
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn operand(&self) -> &Operand {
        &self.operand
    }

    pub fn negated(&self) -> bool {
        self.negated
    }

    pub fn template_id(&self) -> &'static str {
        self.template_id
    }

    /// The same constraint with the opposite polarity.
    pub fn complement(&self) -> Primitive {
        Primitive {
            negated: !self.negated,
            ..self.clone()
        }
    }

    /// The non-negated reading of this constraint.
    pub fn positive(&self) -> Primitive {
        Primitive {
            negated: false,
            ..self.clone()
        }
    }
}

/// A constraint and its negation, differing only in polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitivePair {
    pub positive: Primitive,
    pub negative: Primitive,
}

impl PrimitivePair {
    pub fn from_positive(positive: Primitive) -> Self {
        let positive = positive.positive();
        PrimitivePair {
            negative: positive.complement(),
            positive,
        }
    }

    /// The member matching a literal's polarity.
    pub fn for_polarity(&self, negated: bool) -> &Primitive {
        if negated {
            &self.negative
        } else {
            &self.positive
        }
    }
}

/// Evaluates `p` on `f`. Inequalities are strict; a negated primitive
/// returns the complement of its positive reading.
pub fn satisfies(p: &Primitive, f: &FlightOption) -> bool {
    satisfies_positive(p, f) != p.negated
}

fn satisfies_positive(p: &Primitive, f: &FlightOption) -> bool {
    use Operand as O;
    use Relation as R;
    fn compare<T: PartialOrd>(relation: Relation, value: T, threshold: T) -> bool {
        match relation {
            R::LessThan => value < threshold,
            R::GreaterThan => value > threshold,
            R::Equals => value == threshold,
            _ => false,
        }
    }
    match (p.slot, &p.operand) {
        (Slot::Airline, O::Airlines(names)) => names.contains(&f.airline),
        (Slot::TicketClass, O::Class(c)) => f.ticket_class == *c,
        (Slot::DepartureTime | Slot::ArrivalTime, operand) => {
            let t = if p.slot == Slot::DepartureTime {
                f.departure_time
            } else {
                f.arrival_time
            };
            match operand {
                O::Clock(threshold) => compare(p.relation, t, *threshold),
                O::Window(start, end) => *start < t && t < *end,
                _ => false,
            }
        }
        (Slot::TotalTravelTime, O::Duration(d)) => compare(p.relation, f.total_travel_time, *d),
        // "each layover": vacuously true without layovers
        (Slot::LayoverTimes, O::Duration(d)) => {
            f.layover_times.iter().all(|&t| compare(p.relation, t, *d))
        }
        (Slot::NumLayovers, O::Count(n)) => compare(p.relation, f.num_layovers, *n),
        (Slot::EmissionDiff, O::Percent(pct)) => {
            compare(p.relation, f.emission_diff_pct, f64::from(*pct))
        }
        (Slot::TravelDate, O::Date(d)) => f.travel_date == *d,
        (Slot::Price, O::Dollars(v)) => compare(p.relation, f.price, *v),
        (Slot::LayoverLocations, O::Airports(codes)) => {
            let any = f
                .layover_locations
                .iter()
                .any(|a| codes.iter().any(|c| c == a.code()));
            match p.relation {
                R::ContainsAny => any,
                R::ContainsNone => !any,
                _ => false,
            }
        }
        _ => false,
    }
}

/// True for the contrarian classes on their positive reading: emissions
/// above the route average, a price floor, or a layover minimum.
pub fn is_atypical(p: &Primitive) -> bool {
    if p.negated || p.relation != Relation::GreaterThan {
        return false;
    }
    match (p.slot, &p.operand) {
        (Slot::EmissionDiff, Operand::Percent(pct)) => *pct >= 0,
        (Slot::Price, _) | (Slot::NumLayovers, _) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    IllegalRelation { slot: Slot, relation: Relation },
    UnknownTemplate(String),
    TemplateMismatch(String),
    ExhaustedRetries(Slot),
    EmptyPool,
}

impl fmt::Display for ConstraintError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintError::IllegalRelation { slot, relation } => {
                write!(
                    f,
                    "relation {relation} with this operand is not legal for slot {slot}"
                )
            }
            ConstraintError::UnknownTemplate(id) => write!(f, "unknown template {id:?}"),
            ConstraintError::TemplateMismatch(id) => {
                write!(f, "template {id:?} does not match the primitive")
            }
            ConstraintError::ExhaustedRetries(slot) => {
                write!(
                    f,
                    "no discriminating constraint for slot {slot} in {MAX_DRAWS} draws"
                )
            }
            ConstraintError::EmptyPool => f.write_str("empty flight pool"),
        }
    }
}

impl core::error::Error for ConstraintError {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flight::tests::sample_flight;
    use alloc::vec;

    fn prim(slot: Slot, relation: Relation, operand: Operand) -> Primitive {
        Primitive::new(slot, relation, operand, false).unwrap()
    }

    #[test]
    fn strict_boundaries() {
        let mut f = sample_flight();
        f.price = 5000;
        let lt = prim(Slot::Price, Relation::LessThan, Operand::Dollars(5000));
        assert!(!satisfies(&lt, &f));
        assert!(satisfies(&lt.complement(), &f));
        f.price = 4999;
        assert!(satisfies(&lt, &f));
    }

    #[test]
    fn negated_travel_time() {
        let mut f = sample_flight();
        f.total_travel_time = 22 * 60;
        let gt = prim(
            Slot::TotalTravelTime,
            Relation::GreaterThan,
            Operand::Duration(1350),
        );
        assert!(!satisfies(&gt, &f));
        assert!(satisfies(&gt.complement(), &f));
    }

    #[test]
    fn each_layover_quantifier() {
        let mut f = sample_flight();
        let lt = prim(
            Slot::LayoverTimes,
            Relation::LessThan,
            Operand::Duration(100),
        );
        assert!(satisfies(&lt, &f));
        f.layover_times = vec![95, 120];
        f.layover_locations
            .push(crate::flight::Airport::from_code("CDG").unwrap());
        f.num_layovers = 2;
        assert!(!satisfies(&lt, &f));
        f.num_layovers = 0;
        f.layover_times.clear();
        f.layover_locations.clear();
        assert!(satisfies(&lt, &f));
    }

    #[test]
    fn window_and_locations() {
        let f = sample_flight(); // departs 21:40, layover LHR
        let w = prim(
            Slot::DepartureTime,
            Relation::WithinWindow,
            Operand::Window(
                ClockTime::parse("21:00").unwrap(),
                ClockTime::parse("22:00").unwrap(),
            ),
        );
        assert!(satisfies(&w, &f));
        let any = prim(
            Slot::LayoverLocations,
            Relation::ContainsAny,
            Operand::Airports(vec!["LHR".into()]),
        );
        let none = prim(
            Slot::LayoverLocations,
            Relation::ContainsNone,
            Operand::Airports(vec!["LHR".into()]),
        );
        assert!(satisfies(&any, &f));
        assert!(!satisfies(&none, &f));
    }

    #[test]
    fn illegal_relations_rejected() {
        assert!(Primitive::new(Slot::Price, Relation::Equals, Operand::Dollars(5), false).is_err());
        assert!(
            Primitive::new(Slot::Price, Relation::LessThan, Operand::Duration(5), false).is_err()
        );
        assert!(Primitive::new(
            Slot::Airline,
            Relation::OneOf,
            Operand::Airlines(vec!["KLM".into()]),
            false
        )
        .is_err());
        let t = ClockTime::parse("10:00").unwrap();
        assert!(Primitive::new(
            Slot::ArrivalTime,
            Relation::WithinWindow,
            Operand::Window(t, t),
            false
        )
        .is_err());
    }

    #[test]
    fn atypical_classes() {
        let floor = prim(Slot::Price, Relation::GreaterThan, Operand::Dollars(1800));
        let cap = prim(Slot::Price, Relation::LessThan, Operand::Dollars(500));
        let min_layovers = prim(Slot::NumLayovers, Relation::GreaterThan, Operand::Count(2));
        let above_avg = prim(
            Slot::EmissionDiff,
            Relation::GreaterThan,
            Operand::Percent(0),
        );
        let below_avg = prim(Slot::EmissionDiff, Relation::LessThan, Operand::Percent(0));
        assert!(is_atypical(&floor));
        assert!(is_atypical(&min_layovers));
        assert!(is_atypical(&above_avg));
        assert!(!is_atypical(&cap));
        assert!(!is_atypical(&below_avg));
        assert!(!is_atypical(&floor.complement()));
        assert!(!is_atypical(&above_avg.complement()));
    }

    #[test]
    fn template_parts_checked() {
        let p = prim(Slot::Price, Relation::LessThan, Operand::Dollars(500));
        let rebuilt = Primitive::from_parts(
            Slot::Price,
            Relation::LessThan,
            Operand::Dollars(500),
            false,
            p.template_id(),
        );
        assert_eq!(rebuilt, Ok(p));
        assert_eq!(
            Primitive::from_parts(
                Slot::Price,
                Relation::LessThan,
                Operand::Dollars(500),
                false,
                "price.nope"
            ),
            Err(ConstraintError::UnknownTemplate("price.nope".into()))
        );
        assert!(matches!(
            Primitive::from_parts(
                Slot::Price,
                Relation::LessThan,
                Operand::Dollars(500),
                false,
                "price.greater_than"
            ),
            Err(ConstraintError::TemplateMismatch(_))
        ));
    }
}
