//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
//! Run with `cargo test -p cocoa --test acceptance`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::time::{Duration, Instant};

use chrono::NaiveDate;
use cocoa::commands::{cmd_generate, load_dataset, GenerateArgs};
use cocoa_core::analytics::{binary_entropy, complexity_metrics, option_entropy};
use cocoa_core::constraint::{
    generate_primitive, is_atypical, satisfies, Operand, Primitive, Relation,
};
use cocoa_core::eval::{score, validate_dataset, AnswerFile};
use cocoa_core::flight::{
    synthesize_flights, Airport, ClockTime, FlightOption, Route, RouteContext, TicketClass,
};
use cocoa_core::logic::{
    enumerate_satisfying, minimize_pos, Assignment, MintermTable, PosExpression, Slot,
};
use cocoa_core::query::{requirement_satisfied, GeneratedQuery, Sample, REFERENCE_GRID};
use cocoa_core::rng::unit_stream;
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

const TABLES_PER_SLOT_COUNT: usize = 500;
const POS_TIME_LIMIT: Duration = Duration::from_secs(60);
const GENERATION_TIME_LIMIT: Duration = Duration::from_secs(300);
const ENTROPY_TABLE_TOLERANCE: f64 = 1e-3;
const ENTROPY_HALF_TOLERANCE: f64 = 1e-9;
const SWEEP_POINTS: u32 = 10_000;
const PERMUTATIONS: usize = 100;
const COMPLEMENT_PAIRS: usize = 100_000;
const BASELINE_MIN_SAMPLES: usize = 1000;
const BASELINE_RANGE: (f64, f64) = (15.0, 25.0);
const WEIGHTED_TOLERANCE: f64 = 1e-9;
const SEED: u64 = 20240501;

type Verdict = Result<String, String>;

fn check(ok: bool, pass: String, fail: String) -> Verdict {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

/// Independent truth table of a POS: direct clause evaluation per row.
fn truth_rows(pos: &PosExpression, slots: &[Slot]) -> BTreeSet<u32> {
    let position: BTreeMap<Slot, usize> = slots.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    (0..1u32 << slots.len())
        .filter(|row| {
            pos.terms().iter().all(|t| {
                t.literals()
                    .iter()
                    .any(|l| ((row >> position[&l.slot]) & 1 == 1) != l.negated)
            })
        })
        .collect()
}

fn pos_correctness() -> Verdict {
    let start = Instant::now();
    let mut rng = unit_stream(SEED, 1);
    let mut tables = 0;
    let mut failures = Vec::new();
    let mut run = |slots: &[Slot], mask: u64| {
        let rows: Vec<u32> = (0..1u32 << slots.len())
            .filter(|r| mask >> r & 1 == 1)
            .collect();
        let table = MintermTable::from_indices(slots.to_vec(), &rows).unwrap();
        let pos = minimize_pos(&table);
        let enumerated = enumerate_satisfying(&pos, slots).unwrap();
        let direct = truth_rows(&pos, slots);
        let expected: BTreeSet<u32> = rows.iter().copied().collect();
        let enumerated_rows: BTreeSet<u32> = enumerated.iter().map(Assignment::to_index).collect();
        if &enumerated != table.minterms() || direct != expected || enumerated_rows != expected {
            failures.push(format!("{} slots, mask {mask:#x}", slots.len()));
        }
    };
    for mask in 1..15u64 {
        run(&Slot::ALL[..2], mask);
        tables += 1;
    }
    for k in 2..=6usize {
        let full = if k == 6 {
            u64::MAX
        } else {
            (1u64 << (1 << k)) - 1
        };
        let mut picked: Vec<Slot> = Slot::ALL.to_vec();
        for _ in 0..TABLES_PER_SLOT_COUNT {
            picked.shuffle(&mut rng);
            let mut slots = picked[..k].to_vec();
            slots.sort();
            run(&slots, rng.gen_range(1..full));
            tables += 1;
        }
    }
    let elapsed = start.elapsed();
    check(
        failures.is_empty() && elapsed < POS_TIME_LIMIT,
        format!("{tables} tables round-trip exactly in {:.2?}", elapsed),
        format!(
            "{} mismatches ({:?}), {:.2?}",
            failures.len(),
            failures.first(),
            elapsed
        ),
    )
}

/// Smallest number of clauses realizing `target` over two variables.
fn brute_min_terms_two_slots(target: u8) -> usize {
    let clauses: Vec<u8> = (1..9u32)
        .map(|code| {
            // Per variable: 0 absent, 1 positive literal, 2 negated literal.
            let lit = |c: u32| match c {
                1 => Some(false),
                2 => Some(true),
                _ => None,
            };
            let (a, b) = (lit(code % 3), lit(code / 3));
            (0..4u8)
                .filter(|row| {
                    let bit = |v: u8| (row >> v) & 1 == 1;
                    a.is_some_and(|n| bit(0) != n) || b.is_some_and(|n| bit(1) != n)
                })
                .fold(0u8, |acc, row| acc | 1 << row)
        })
        .collect();
    (1..=clauses.len())
        .find(|&size| {
            (0u32..1 << clauses.len())
                .filter(|subset| subset.count_ones() as usize == size)
                .any(|subset| {
                    (0..clauses.len())
                        .filter(|i| subset >> i & 1 == 1)
                        .fold(0xF, |acc, i| acc & clauses[i])
                        == target
                })
        })
        .expect("non-constant functions have a POS")
}

fn minimality() -> Verdict {
    let mut violations = Vec::new();
    for mask in 1..15u8 {
        let rows: Vec<u32> = (0..4).filter(|r| mask >> r & 1 == 1).collect();
        let pos =
            minimize_pos(&MintermTable::from_indices(Slot::ALL[..2].to_vec(), &rows).unwrap());
        let best = brute_min_terms_two_slots(mask);
        if pos.terms().len() != best {
            violations.push(format!(
                "{mask:04b}: {} terms, brute force {best}",
                pos.terms().len()
            ));
        }
    }
    check(
        violations.is_empty(),
        "14 two-slot functions, 0 violations against brute force".into(),
        format!("{} violations: {violations:?}", violations.len()),
    )
}

struct Generated {
    samples: Vec<Sample>,
    elapsed: Duration,
    dataset_bytes: Vec<u8>,
    manifest_bytes: Vec<u8>,
}

fn generate(dir: &std::path::Path, name: &str, jobs: usize) -> Generated {
    let out = dir.join(name);
    let mut args = GenerateArgs::new("reference", SEED, &out);
    args.jobs = jobs;
    let start = Instant::now();
    cmd_generate(&args).expect("generation succeeds");
    let elapsed = start.elapsed();
    Generated {
        samples: load_dataset(&out).expect("dataset loads"),
        elapsed,
        dataset_bytes: fs::read(&out).unwrap(),
        manifest_bytes: fs::read(dir.join(format!("{name}.manifest.json"))).unwrap(),
    }
}

fn gold_soundness(g: &Generated) -> Verdict {
    let report = validate_dataset(&g.samples);
    let oracle_failures = report
        .check("oracle")
        .map_or(usize::MAX, |c| c.failures.len());
    let not_single = g
        .samples
        .iter()
        .filter(|s| {
            s.options
                .iter()
                .filter(|f| requirement_satisfied(&s.query, f).unwrap_or(false))
                .count()
                != 1
        })
        .count();
    let mut unique: BTreeMap<(usize, usize), BTreeSet<&str>> = BTreeMap::new();
    for s in &g.samples {
        unique
            .entry(s.query.config_key())
            .or_default()
            .insert(&s.query_id);
    }
    let counts_match = REFERENCE_GRID
        .iter()
        .all(|&(k, m, n)| unique.get(&(k, m)).map_or(0, BTreeSet::len) == n);
    let total: usize = unique.values().map(BTreeSet::len).sum();
    check(
        oracle_failures == 0 && not_single == 0 && counts_match && g.elapsed < GENERATION_TIME_LIMIT,
        format!(
            "{total} unique queries, {} samples in {:.2?}; 0 oracle mismatches, every sample has exactly 1 satisfying option",
            g.samples.len(),
            g.elapsed
        ),
        format!(
            "oracle mismatches {oracle_failures}, non-single samples {not_single}, per-cell counts match {counts_match}, {:.2?}",
            g.elapsed
        ),
    )
}

fn entropy_fixture() -> (GeneratedQuery, FlightOption, FlightOption) {
    let p = |slot, relation, operand| Primitive::new(slot, relation, operand, false).unwrap();
    let pos = PosExpression::parse("(price | ticket_class) & (price | ticket_class)").unwrap();
    let bindings = BTreeMap::from([
        (
            0,
            p(Slot::Price, Relation::LessThan, Operand::Dollars(5000)),
        ),
        (
            1,
            p(
                Slot::TicketClass,
                Relation::Equals,
                Operand::Class(TicketClass::Economy),
            ),
        ),
        (
            2,
            p(Slot::Price, Relation::LessThan, Operand::Dollars(6000)),
        ),
        (
            3,
            p(
                Slot::TicketClass,
                Relation::Equals,
                Operand::Class(TicketClass::First),
            ),
        ),
    ]);
    let date = NaiveDate::from_ymd_opt(2024, 6, 1).unwrap();
    let route = Route {
        source: Airport::from_code("MEX").unwrap(),
        destination: Airport::from_code("CDG").unwrap(),
        travel_date: date,
    };
    let query = GeneratedQuery {
        id: "q2x2-0".into(),
        num_slots: 2,
        num_minterms: 2,
        table: MintermTable::from_indices(vec![Slot::TicketClass, Slot::Price], &[3]).unwrap(),
        pos,
        bindings,
        text: String::new(),
        atypical: false,
        route,
    };
    let flight = |price, ticket_class| FlightOption {
        airline: "Air France".into(),
        ticket_class,
        travel_date: date,
        departure_time: ClockTime::parse("10:00").unwrap(),
        arrival_time: ClockTime::parse("05:00").unwrap(),
        arrival_day_offset: 1,
        total_travel_time: 660,
        num_layovers: 0,
        layover_locations: vec![],
        layover_times: vec![],
        price,
        emission_diff_pct: 0.0,
    };
    (
        query,
        flight(4500, TicketClass::Economy),
        flight(5500, TicketClass::First),
    )
}

fn entropy_reproduction() -> Verdict {
    let (query, option_a, option_b) = entropy_fixture();
    let a = option_entropy(&query, &option_a).unwrap();
    let b = option_entropy(&query, &option_b).unwrap();
    let mut sweep_ok = true;
    for i in 0..=SWEEP_POINTS {
        let p = f64::from(i) / f64::from(SWEEP_POINTS);
        let h = binary_entropy(p);
        sweep_ok &= (0.0..=1.0).contains(&h)
            && (h - binary_entropy(1.0 - p)).abs() < 1e-12
            && h <= binary_entropy(0.5);
    }
    check(
        a.p_sat == 0.75
            && (a.entropy - 0.81125).abs() <= ENTROPY_TABLE_TOLERANCE
            && b.p_sat == 0.5
            && (b.entropy - 1.0).abs() <= ENTROPY_HALF_TOLERANCE
            && sweep_ok,
        format!(
            "p_sat 0.75 -> {:.6}, p_sat 0.5 -> {:.9}; symmetry and bounds hold over {} points",
            a.entropy,
            b.entropy,
            SWEEP_POINTS + 1
        ),
        format!("A {a:?}, B {b:?}, sweep ok {sweep_ok}"),
    )
}

fn dependency_metrics() -> Verdict {
    let pos = PosExpression::parse(
        "(price | layover_times) & (layover_times | ~ticket_class) & (ticket_class | airline) \
         & (departure_time) & (~travel_date | arrival_time)",
    )
    .unwrap();
    let m = complexity_metrics(&pos).unwrap();
    let mut rng = unit_stream(SEED, 5);
    let mut unstable = 0;
    for _ in 0..PERMUTATIONS {
        let mut clauses: Vec<Vec<(Slot, bool)>> = pos
            .terms()
            .iter()
            .map(|t| t.literals().iter().map(|l| (l.slot, l.negated)).collect())
            .collect();
        clauses.shuffle(&mut rng);
        for c in &mut clauses {
            c.shuffle(&mut rng);
        }
        if complexity_metrics(&PosExpression::from_clauses(clauses).unwrap()).unwrap() != m {
            unstable += 1;
        }
    }
    check(
        (m.components, m.lcc, m.max_degree) == (3, 4, 2) && unstable == 0,
        format!("components 3, lcc 4, max_degree 2; stable under {PERMUTATIONS} permutations"),
        format!("{m:?}, {unstable} permutations changed the metrics"),
    )
}

fn complement_law() -> Verdict {
    let mut rng = unit_stream(SEED, 6);
    let airports = ["ATL", "DXB", "LHR", "HND", "CDG", "SIN"];
    let mut violations = 0;
    let mut pairs = 0;
    while pairs < COMPLEMENT_PAIRS {
        let (a, b) = (rng.gen_range(0..6), rng.gen_range(1..6));
        let route = Route {
            source: Airport::from_code(airports[a]).unwrap(),
            destination: Airport::from_code(airports[(a + b) % 6]).unwrap(),
            travel_date: NaiveDate::from_ymd_opt(2024, 3, 1).unwrap(),
        };
        let pool = synthesize_flights(&route, 50, rng.next_u64()).unwrap();
        let ctx = RouteContext::new(route, pool).unwrap();
        for _ in 0..40 {
            let slot = Slot::ALL[rng.gen_range(0..Slot::ALL.len())];
            let pair = generate_primitive(slot, &mut rng, &ctx, &[]).unwrap();
            for f in ctx.pool() {
                violations +=
                    usize::from(satisfies(&pair.positive, f) == satisfies(&pair.negative, f));
                pairs += 1;
            }
        }
    }
    check(
        violations == 0,
        format!("{pairs} (primitive, flight) pairs, 0 violations"),
        format!("{violations} violations over {pairs} pairs"),
    )
}

fn unique_occurrences(g: &Generated) -> Verdict {
    let mut queries: BTreeMap<&str, &GeneratedQuery> = BTreeMap::new();
    for s in &g.samples {
        queries.insert(&s.query_id, &s.query);
    }
    let offending: Vec<&str> = queries
        .iter()
        .filter(|(_, q)| {
            let mut seen = BTreeSet::new();
            !q.bindings
                .values()
                .all(|p| seen.insert((p.slot(), p.operand().clone())))
        })
        .map(|(id, _)| *id)
        .collect();
    check(
        offending.is_empty(),
        format!(
            "{} queries, 0 repeated (slot, operand) occurrences",
            queries.len()
        ),
        format!(
            "{} offending queries: {:?}",
            offending.len(),
            &offending[..offending.len().min(5)]
        ),
    )
}

fn determinism(first: &Generated, second: &Generated, other_jobs: &[&Generated]) -> Verdict {
    let identical = |a: &Generated, b: &Generated| {
        a.dataset_bytes == b.dataset_bytes && a.manifest_bytes == b.manifest_bytes
    };
    let same = identical(first, second);
    let jobs_independent = other_jobs.iter().all(|g| identical(first, g));
    check(
        same && jobs_independent,
        format!(
            "two runs byte-identical ({} dataset bytes, {} manifest bytes), also across --jobs",
            first.dataset_bytes.len(),
            first.manifest_bytes.len()
        ),
        format!("identical reruns {same}, identical across jobs {jobs_independent}"),
    )
}

fn scoring_sanity(g: &Generated) -> Verdict {
    let gold = AnswerFile::from_pairs(
        g.samples
            .iter()
            .map(|s| (s.sample_id.clone(), s.gold_letter().to_string())),
    )
    .unwrap();
    let perfect = score(&g.samples, &gold).unwrap();
    let constant =
        AnswerFile::from_pairs(g.samples.iter().map(|s| (s.sample_id.clone(), "A"))).unwrap();
    let baseline = score(&g.samples, &constant).unwrap();
    let base_acc = baseline.accuracy_total().unwrap_or(f64::NAN);
    let weighted = |r: &cocoa_core::eval::ScoreReport| {
        (r.regular.accuracy().unwrap_or(0.0) * r.regular.scored as f64
            + r.atypical.accuracy().unwrap_or(0.0) * r.atypical.scored as f64)
            / r.total.scored as f64
    };
    let reconcile = [&perfect, &baseline]
        .iter()
        .all(|r| (weighted(r) - r.accuracy_total().unwrap()).abs() <= WEIGHTED_TOLERANCE);
    check(
        perfect.accuracy_total() == Some(100.0)
            && baseline.n_scored >= BASELINE_MIN_SAMPLES
            && (BASELINE_RANGE.0..=BASELINE_RANGE.1).contains(&base_acc)
            && reconcile,
        format!(
            "gold 100.0; constant \"A\" {base_acc:.2} over {} samples; group accuracies reconcile with total",
            baseline.n_scored
        ),
        format!("gold {:?}, constant {base_acc:.2} over {}, reconcile {reconcile}", perfect.accuracy_total(), baseline.n_scored),
    )
}

fn atypical_flagging() -> Verdict {
    let p = |slot, relation, operand| Primitive::new(slot, relation, operand, false).unwrap();
    let contrarian = [
        p(
            Slot::EmissionDiff,
            Relation::GreaterThan,
            Operand::Percent(0),
        ),
        p(Slot::Price, Relation::GreaterThan, Operand::Dollars(1800)),
        p(Slot::NumLayovers, Relation::GreaterThan, Operand::Count(1)),
    ];
    let clock = |t: &str| ClockTime::parse(t).unwrap();
    let ordinary = [
        p(Slot::EmissionDiff, Relation::LessThan, Operand::Percent(0)),
        p(
            Slot::EmissionDiff,
            Relation::LessThan,
            Operand::Percent(-10),
        ),
        p(Slot::Price, Relation::LessThan, Operand::Dollars(1800)),
        p(Slot::NumLayovers, Relation::LessThan, Operand::Count(2)),
        p(Slot::NumLayovers, Relation::Equals, Operand::Count(1)),
        p(
            Slot::Airline,
            Relation::Equals,
            Operand::Airlines(vec!["Delta".into()]),
        ),
        p(
            Slot::Airline,
            Relation::OneOf,
            Operand::Airlines(vec!["Delta".into(), "Emirates".into()]),
        ),
        p(
            Slot::TicketClass,
            Relation::Equals,
            Operand::Class(TicketClass::First),
        ),
        p(
            Slot::DepartureTime,
            Relation::GreaterThan,
            Operand::Clock(clock("18:00")),
        ),
        p(
            Slot::DepartureTime,
            Relation::LessThan,
            Operand::Clock(clock("09:00")),
        ),
        p(
            Slot::ArrivalTime,
            Relation::WithinWindow,
            Operand::Window(clock("09:00"), clock("12:00")),
        ),
        p(
            Slot::TotalTravelTime,
            Relation::GreaterThan,
            Operand::Duration(600),
        ),
        p(
            Slot::TotalTravelTime,
            Relation::LessThan,
            Operand::Duration(600),
        ),
        p(
            Slot::LayoverTimes,
            Relation::GreaterThan,
            Operand::Duration(60),
        ),
        p(
            Slot::LayoverTimes,
            Relation::LessThan,
            Operand::Duration(60),
        ),
        p(
            Slot::TravelDate,
            Relation::Equals,
            Operand::Date(NaiveDate::from_ymd_opt(2024, 4, 2).unwrap()),
        ),
        p(
            Slot::LayoverLocations,
            Relation::ContainsAny,
            Operand::Airports(vec!["LHR".into()]),
        ),
        p(
            Slot::LayoverLocations,
            Relation::ContainsNone,
            Operand::Airports(vec!["LHR".into()]),
        ),
    ];
    let flagged_contrarian = contrarian.iter().filter(|c| is_atypical(c)).count();
    let wrong: Vec<String> = contrarian
        .iter()
        .map(Primitive::complement)
        .chain(ordinary.iter().cloned())
        .chain(ordinary.iter().map(Primitive::complement))
        .filter(is_atypical)
        .map(|p| p.template_id().to_string())
        .collect();
    check(
        flagged_contrarian == 3 && wrong.is_empty(),
        format!(
            "3 contrarian classes flagged; {} negations and other primitives unflagged",
            3 + 2 * ordinary.len()
        ),
        format!("flagged {flagged_contrarian}/3, wrongly flagged {wrong:?}"),
    )
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(&str, Verdict)> = vec![
        ("POS correctness", pos_correctness()),
        ("Minimality", minimality()),
    ];
    let first = generate(dir.path(), "a.jsonl", 0);
    let second = generate(dir.path(), "b.jsonl", 0);
    let threaded = generate(dir.path(), "d.jsonl", 4);
    let single_thread = generate(dir.path(), "c.jsonl", 1);
    results.push(("Gold soundness", gold_soundness(&first)));
    results.push(("Entropy reproduction", entropy_reproduction()));
    results.push(("Dependency metrics", dependency_metrics()));
    results.push(("Complement law", complement_law()));
    results.push(("Unique-occurrence constraint", unique_occurrences(&first)));
    results.push((
        "Determinism",
        determinism(&first, &second, &[&single_thread, &threaded]),
    ));
    results.push(("Scoring sanity", scoring_sanity(&first)));
    results.push(("Atypical flagging", atypical_flagging()));

    let mut failed = 0;
    for (i, (name, verdict)) in results.iter().enumerate() {
        match verdict {
            Ok(detail) => println!("PASS {:>2}. {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2}. {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
