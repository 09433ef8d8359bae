use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use chrono::Days;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use super::{satisfies, ConstraintError, Operand, Primitive, PrimitivePair, Relation};
use crate::flight::{
    ClockTime, FlightOption, RouteContext, TicketClass, BUSIEST_AIRPORTS, MINUTES_PER_DAY,
};
use crate::logic::Slot;

/// Draw budget per primitive before giving up.
pub const MAX_DRAWS: usize = 100;

/// Draws a constraint pair for `slot` from ranges informed by the pool.
///
/// A draw is kept when it splits the pool (some flight satisfies the
/// positive reading and some the negative) and its operand is not in
/// `taken`. Slots whose field is identical across the pool cannot split it;
/// any fresh draw is kept for those.
pub fn generate_primitive<R: Rng + ?Sized>(
    slot: Slot,
    rng: &mut R,
    ctx: &RouteContext,
    taken: &[Operand],
) -> Result<PrimitivePair, ConstraintError> {
    let pool = ctx.pool();
    if pool.is_empty() {
        return Err(ConstraintError::EmptyPool);
    }
    let constant = pool.iter().all(|f| same_field(slot, &pool[0], f));
    for _ in 0..MAX_DRAWS {
        let (relation, operand) = draw(slot, rng, ctx);
        if taken.contains(&operand) {
            continue;
        }
        let positive = Primitive::new(slot, relation, operand, false)
            .expect("draws are legal by construction");
        let hits = pool.iter().filter(|f| satisfies(&positive, f)).count();
        if constant || (hits > 0 && hits < pool.len()) {
            return Ok(PrimitivePair::from_positive(positive));
        }
    }
    Err(ConstraintError::ExhaustedRetries(slot))
}

fn same_field(slot: Slot, a: &FlightOption, b: &FlightOption) -> bool {
    match slot {
        Slot::Airline => a.airline == b.airline,
        Slot::TicketClass => a.ticket_class == b.ticket_class,
        Slot::DepartureTime => a.departure_time == b.departure_time,
        Slot::ArrivalTime => a.arrival_time == b.arrival_time,
        Slot::TotalTravelTime => a.total_travel_time == b.total_travel_time,
        Slot::NumLayovers => a.num_layovers == b.num_layovers,
        Slot::EmissionDiff => a.emission_diff_pct == b.emission_diff_pct,
        Slot::TravelDate => a.travel_date == b.travel_date,
        Slot::Price => a.price == b.price,
        Slot::LayoverLocations => a.layover_locations == b.layover_locations,
        Slot::LayoverTimes => a.layover_times == b.layover_times,
    }
}

fn round_to(value: u32, step: u32) -> u32 {
    ((value + step / 2) / step * step).max(step)
}

/// Uniform draw over `[min/2, 3*max/2]`, rounded to `step`.
fn threshold<R: Rng + ?Sized>(
    rng: &mut R,
    values: impl Iterator<Item = u32>,
    step: u32,
    fallback: (u32, u32),
) -> u32 {
    let (mut lo, mut hi) = (u32::MAX, 0);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (lo, hi) = fallback;
    }
    let (lo, hi) = (lo / 2, hi.saturating_mul(3) / 2);
    round_to(rng.gen_range(lo..=hi.max(lo)), step)
}

fn lt_or_gt<R: Rng + ?Sized>(rng: &mut R) -> Relation {
    if rng.gen_bool(0.5) {
        Relation::LessThan
    } else {
        Relation::GreaterThan
    }
}

fn clock<R: Rng + ?Sized>(rng: &mut R, lo: u32, hi: u32) -> ClockTime {
    ClockTime::new(rng.gen_range(lo / 5..=hi / 5) * 5).expect("within the day")
}

fn draw<R: Rng + ?Sized>(slot: Slot, rng: &mut R, ctx: &RouteContext) -> (Relation, Operand) {
    let pool = ctx.pool();
    match slot {
        Slot::Airline => {
            let names: BTreeSet<&str> = pool.iter().map(|f| f.airline.as_str()).collect();
            let names: Vec<&str> = names.into_iter().collect();
            if names.len() < 2 || rng.gen_bool(0.5) {
                let name = names.choose(rng).expect("pool is non-empty");
                (
                    Relation::Equals,
                    Operand::Airlines(alloc::vec![String::from(*name)]),
                )
            } else {
                let k = rng.gen_range(2..=names.len().min(3));
                let mut picked: Vec<String> = names
                    .choose_multiple(rng, k)
                    .map(|s| String::from(*s))
                    .collect();
                picked.sort();
                (Relation::OneOf, Operand::Airlines(picked))
            }
        }
        Slot::TicketClass => (
            Relation::Equals,
            Operand::Class(*TicketClass::ALL.choose(rng).expect("three classes")),
        ),
        Slot::DepartureTime | Slot::ArrivalTime => match rng.gen_range(0..3) {
            0 => (
                Relation::LessThan,
                Operand::Clock(clock(rng, 5, MINUTES_PER_DAY - 5)),
            ),
            1 => (
                Relation::GreaterThan,
                Operand::Clock(clock(rng, 5, MINUTES_PER_DAY - 5)),
            ),
            _ => {
                let width = rng.gen_range(12..=72) * 5;
                let start = clock(rng, 0, MINUTES_PER_DAY - 5 - width);
                let end =
                    ClockTime::new(start.minutes() + width).expect("window ends before midnight");
                (Relation::WithinWindow, Operand::Window(start, end))
            }
        },
        Slot::TotalTravelTime => {
            let d = threshold(
                rng,
                pool.iter().map(|f| f.total_travel_time),
                15,
                (60, 1440),
            );
            (lt_or_gt(rng), Operand::Duration(d))
        }
        Slot::LayoverTimes => {
            let d = threshold(
                rng,
                pool.iter().flat_map(|f| f.layover_times.iter().copied()),
                15,
                (30, 600),
            );
            (lt_or_gt(rng), Operand::Duration(d))
        }
        Slot::NumLayovers => {
            let max = pool.iter().map(|f| f.num_layovers).max().unwrap_or(0);
            let relation = [Relation::Equals, Relation::LessThan, Relation::GreaterThan]
                .choose(rng)
                .copied()
                .expect("three relations");
            (relation, Operand::Count(rng.gen_range(0..=max + 1)))
        }
        Slot::EmissionDiff => {
            let pct = if rng.gen_bool(0.5) {
                0
            } else {
                let magnitude = rng.gen_range(1..=6) * 5;
                if rng.gen_bool(0.5) {
                    magnitude
                } else {
                    -magnitude
                }
            };
            (lt_or_gt(rng), Operand::Percent(pct))
        }
        Slot::TravelDate => {
            let date = ctx.route().travel_date;
            let date = if rng.gen_bool(0.5) {
                date
            } else {
                let shift = Days::new(rng.gen_range(1..=7));
                if rng.gen_bool(0.5) {
                    date + shift
                } else {
                    date - shift
                }
            };
            (Relation::Equals, Operand::Date(date))
        }
        Slot::Price => {
            let v = threshold(rng, pool.iter().map(|f| f.price), 50, (100, 2000));
            (lt_or_gt(rng), Operand::Dollars(v))
        }
        Slot::LayoverLocations => {
            let seen: BTreeSet<&str> = pool
                .iter()
                .flat_map(|f| f.layover_locations.iter().map(|a| a.code()))
                .collect();
            let candidates: Vec<&str> = if seen.is_empty() {
                BUSIEST_AIRPORTS.iter().map(|(c, _)| *c).collect()
            } else {
                seen.into_iter().collect()
            };
            let k = rng.gen_range(1..=candidates.len().min(3));
            let mut codes: Vec<String> = candidates
                .iter()
                .choose_multiple(rng, k)
                .into_iter()
                .map(|c| String::from(*c))
                .collect();
            codes.sort();
            let relation = if rng.gen_bool(0.5) {
                Relation::ContainsAny
            } else {
                Relation::ContainsNone
            };
            (relation, Operand::Airports(codes))
        }
    }
}
