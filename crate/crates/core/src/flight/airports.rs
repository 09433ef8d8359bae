/// The fifty busiest airports by passenger traffic, as (IATA code, city).
pub const BUSIEST_AIRPORTS: [(&str, &str); 50] = [
    ("ATL", "Atlanta"),
    ("DXB", "Dubai"),
    ("DFW", "Dallas"),
    ("LHR", "London"),
    ("HND", "Tokyo"),
    ("DEN", "Denver"),
    ("IST", "Istanbul"),
    ("LAX", "Los Angeles"),
    ("ORD", "Chicago"),
    ("DEL", "Delhi"),
    ("CDG", "Paris"),
    ("JFK", "New York"),
    ("CAN", "Guangzhou"),
    ("AMS", "Amsterdam"),
    ("SIN", "Singapore"),
    ("MAD", "Madrid"),
    ("FRA", "Frankfurt"),
    ("ICN", "Seoul"),
    ("PEK", "Beijing"),
    ("PVG", "Shanghai"),
    ("CTU", "Chengdu"),
    ("SZX", "Shenzhen"),
    ("BCN", "Barcelona"),
    ("LAS", "Las Vegas"),
    ("MCO", "Orlando"),
    ("SEA", "Seattle"),
    ("CLT", "Charlotte"),
    ("KMG", "Kunming"),
    ("MEX", "Mexico City"),
    ("MIA", "Miami"),
    ("BKK", "Bangkok"),
    ("CGK", "Jakarta"),
    ("BOM", "Mumbai"),
    ("DOH", "Doha"),
    ("SFO", "San Francisco"),
    ("EWR", "Newark"),
    ("PHX", "Phoenix"),
    ("IAH", "Houston"),
    ("FCO", "Rome"),
    ("MUC", "Munich"),
    ("SYD", "Sydney"),
    ("YYZ", "Toronto"),
    ("SHA", "Shanghai"),
    ("BOS", "Boston"),
    ("MSP", "Minneapolis"),
    ("CKG", "Chongqing"),
    ("XIY", "Xi'an"),
    ("HGH", "Hangzhou"),
    ("JED", "Jeddah"),
    ("GRU", "Sao Paulo"),
];

pub const AIRLINES: [&str; 16] = [
    "American Airlines",
    "Delta",
    "United",
    "British Airways",
    "Lufthansa",
    "Air France",
    "KLM",
    "Emirates",
    "Qatar Airways",
    "Turkish Airlines",
    "Singapore Airlines",
    "Cathay Pacific",
    "ANA",
    "Iberia",
    "Air Canada",
    "LATAM",
];

pub fn city_of(code: &str) -> Option<&'static str> {
    BUSIEST_AIRPORTS
        .iter()
        .find(|(c, _)| *c == code)
        .map(|(_, city)| *city)
}
