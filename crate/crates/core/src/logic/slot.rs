use core::fmt;

/// A flight attribute used as a boolean variable in a requirement skeleton.
///
/// The declaration order is the canonical order used for serialization and
/// every tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    Airline,
    TicketClass,
    DepartureTime,
    ArrivalTime,
    TotalTravelTime,
    NumLayovers,
    EmissionDiff,
    TravelDate,
    Price,
    LayoverLocations,
    LayoverTimes,
}

impl Slot {
    pub const ALL: [Slot; 11] = [
        Slot::Airline,
        Slot::TicketClass,
        Slot::DepartureTime,
        Slot::ArrivalTime,
        Slot::TotalTravelTime,
        Slot::NumLayovers,
        Slot::EmissionDiff,
        Slot::TravelDate,
        Slot::Price,
        Slot::LayoverLocations,
        Slot::LayoverTimes,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Lower snake case name used in serialized expressions and records.
    pub fn name(self) -> &'static str {
        match self {
            Slot::Airline => "airline",
            Slot::TicketClass => "ticket_class",
            Slot::DepartureTime => "departure_time",
            Slot::ArrivalTime => "arrival_time",
            Slot::TotalTravelTime => "total_travel_time",
            Slot::NumLayovers => "number_of_layovers",
            Slot::EmissionDiff => "average_carbon_emission_difference",
            Slot::TravelDate => "travel_date",
            Slot::Price => "price",
            Slot::LayoverLocations => "layover_locations",
            Slot::LayoverTimes => "layover_times",
        }
    }

    pub fn from_name(name: &str) -> Option<Slot> {
        Slot::ALL.iter().copied().find(|s| s.name() == name)
    }

    /// Human label used at the start of rendered constraints.
    pub fn label(self) -> &'static str {
        match self {
            Slot::Airline => "Airline",
            Slot::TicketClass => "Ticket Class",
            Slot::DepartureTime => "Departure Time",
            Slot::ArrivalTime => "Arrival Time",
            Slot::TotalTravelTime => "Travel Time",
            Slot::NumLayovers => "Number of Layovers",
            Slot::EmissionDiff => "Carbon Emission",
            Slot::TravelDate => "Travel Date",
            Slot::Price => "Price",
            Slot::LayoverLocations => "Layover Locations",
            Slot::LayoverTimes => "Layover Times",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
