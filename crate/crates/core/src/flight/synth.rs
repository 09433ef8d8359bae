use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    Airport, ClockTime, FlightError, FlightOption, Route, TicketClass, AIRLINES, BUSIEST_AIRPORTS,
    MINUTES_PER_DAY,
};
use crate::rng::stream_key;

pub const MIN_POOL: usize = 5;

/// Generates `count` flights for `route`, fully determined by `seed`.
///
/// The first three flights cover economy, business and first so every pool
/// offers all classes. Emission differences are centered on the pool mean.
pub fn synthesize_flights(
    route: &Route,
    count: usize,
    seed: u64,
) -> Result<Vec<FlightOption>, FlightError> {
    if count < MIN_POOL {
        return Err(FlightError::CountTooSmall(count));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let code_key = |a: &Airport| {
        a.code()
            .bytes()
            .fold(0u64, |acc, b| acc << 8 | u64::from(b))
    };
    // Route "distance" is a property of the endpoints, not the seed.
    let route_hash = stream_key(&[code_key(&route.source), code_key(&route.destination)]);
    let base_flight = 120 + (route_hash % 841) as u32;
    let price_scale = 1.0 + f64::from(base_flight) / 600.0;

    let hubs: Vec<&str> = BUSIEST_AIRPORTS
        .iter()
        .map(|(c, _)| *c)
        .filter(|c| *c != route.source.code() && *c != route.destination.code())
        .collect();

    let mut flights = Vec::with_capacity(count);
    let mut emissions = Vec::with_capacity(count);
    for i in 0..count {
        let ticket_class = match i {
            0..=2 => TicketClass::ALL[i],
            _ => match rng.gen_range(0..100) {
                0..=59 => TicketClass::Economy,
                60..=84 => TicketClass::Business,
                _ => TicketClass::First,
            },
        };
        let num_layovers: u32 = match rng.gen_range(0..100) {
            0..=34 => 0,
            35..=79 => 1,
            80..=94 => 2,
            _ => 3,
        };
        let layover_locations: Vec<Airport> = hubs
            .choose_multiple(&mut rng, num_layovers as usize)
            .map(|c| Airport::from_code(c).expect("embedded codes are valid"))
            .collect();
        let layover_times: Vec<u32> = (0..num_layovers)
            .map(|_| {
                if rng.gen_bool(0.7) {
                    rng.gen_range(6..=36) * 5
                } else {
                    rng.gen_range(37..=144) * 5
                }
            })
            .collect();
        let in_air = base_flight + num_layovers * 45 + rng.gen_range(0..=24) * 5;
        let total_travel_time = in_air + layover_times.iter().sum::<u32>();

        let departure = rng.gen_range(0..MINUTES_PER_DAY / 5) * 5;
        let arrival = departure + total_travel_time;

        let class_factor = match ticket_class {
            TicketClass::Economy => rng.gen_range(0.8..1.3),
            TicketClass::Business => rng.gen_range(3.2..4.6),
            TicketClass::First => rng.gen_range(6.0..8.5),
        };
        let layover_discount = 1.0 - 0.08 * f64::from(num_layovers);
        let price =
            libm::round(320.0 * price_scale * class_factor * layover_discount).max(1.0) as u32;

        emissions.push(rng.gen_range(-25.0..30.0) + 6.0 * f64::from(num_layovers));
        flights.push(FlightOption {
            airline: AIRLINES[rng.gen_range(0..AIRLINES.len())].into(),
            ticket_class,
            travel_date: route.travel_date,
            departure_time: ClockTime::new(departure).expect("departure below 1440"),
            arrival_time: ClockTime::new(arrival % MINUTES_PER_DAY).expect("reduced mod 1440"),
            arrival_day_offset: arrival / MINUTES_PER_DAY,
            total_travel_time,
            num_layovers,
            layover_locations,
            layover_times,
            price,
            emission_diff_pct: 0.0,
        });
    }
    let mean = emissions.iter().sum::<f64>() / count as f64;
    for (f, e) in flights.iter_mut().zip(emissions) {
        // whole percent, as flight search results display it
        f.emission_diff_pct = libm::round(e - mean) + 0.0;
    }
    Ok(flights)
}
