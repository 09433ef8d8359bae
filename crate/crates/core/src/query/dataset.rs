use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use chrono::{Days, NaiveDate};
use rand::Rng;

use super::pipeline::{
    assemble_samples, bind_primitives, feasibility_check, generate_minterms, select_slots,
};
use super::render::{apply_paraphrase, check_operand_mentions, render_requirement, Paraphraser};
use super::{GeneratedQuery, QueryConfig, QueryError, Sample};
use crate::constraint::{is_atypical, ConstraintError};
use crate::flight::{synthesize_flights, Airport, Route, RouteContext, BUSIEST_AIRPORTS};
use crate::logic::minimize_pos;
use crate::rng::{fork, stream_key, unit_stream, StageRng};

/// `(slots, minterms, unique queries)` of the reference test split.
pub const REFERENCE_GRID: [(usize, usize, usize); 6] = [
    (2, 2, 124),
    (3, 2, 136),
    (4, 2, 117),
    (4, 3, 129),
    (5, 2, 121),
    (6, 2, 101),
];

/// Replacement attempts for an abandoned or duplicate query before giving up.
const MAX_SALT: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridCell {
    pub config: QueryConfig,
    pub unique_queries: usize,
}

/// Parses `2x2:124,4x3:129`. The reference grid is returned for `"reference"`.
pub fn parse_grid(text: &str) -> Result<Vec<GridCell>, QueryError> {
    if text.trim() == "reference" {
        return REFERENCE_GRID
            .iter()
            .map(|&(k, m, n)| {
                Ok(GridCell {
                    config: QueryConfig::new(k, m)?,
                    unique_queries: n,
                })
            })
            .collect();
    }
    let mut cells = Vec::new();
    let mut seen = BTreeSet::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || QueryError::BadGrid(format!("`{part}` is not of the form KxM:N"));
        let (shape, count) = part.split_once(':').ok_or_else(bad)?;
        let (k, m) = shape.split_once('x').ok_or_else(bad)?;
        let k: usize = k.trim().parse().map_err(|_| bad())?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let n: usize = count.trim().parse().map_err(|_| bad())?;
        if !seen.insert((k, m)) {
            return Err(QueryError::BadGrid(format!(
                "configuration {k}x{m} listed twice"
            )));
        }
        cells.push(GridCell {
            config: QueryConfig::new(k, m)?,
            unique_queries: n,
        });
    }
    if cells.is_empty() {
        return Err(QueryError::BadGrid(String::from("empty grid")));
    }
    Ok(cells)
}

/// Supplies one route and its candidate pool per query.
pub trait FlightSource: Sync {
    fn draw_route(&self, rng: &mut StageRng) -> Result<RouteContext, QueryError>;
}

/// Random routes between busy airports with synthesized pools.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticSource {
    pub epoch: NaiveDate,
    pub pool_size: usize,
    /// Travel dates fall 1 to `horizon_days` days after the epoch.
    pub horizon_days: u64,
}

impl SyntheticSource {
    pub fn new(epoch: NaiveDate, pool_size: usize) -> Self {
        SyntheticSource {
            epoch,
            pool_size,
            horizon_days: 180,
        }
    }
}

impl FlightSource for SyntheticSource {
    fn draw_route(&self, rng: &mut StageRng) -> Result<RouteContext, QueryError> {
        let a = rng.gen_range(0..BUSIEST_AIRPORTS.len());
        let b = (a + rng.gen_range(1..BUSIEST_AIRPORTS.len())) % BUSIEST_AIRPORTS.len();
        let offset = rng.gen_range(1..=self.horizon_days.max(1));
        let travel_date = self
            .epoch
            .checked_add_days(Days::new(offset))
            .unwrap_or(self.epoch);
        let route = Route {
            source: Airport::from_code(BUSIEST_AIRPORTS[a].0)?,
            destination: Airport::from_code(BUSIEST_AIRPORTS[b].0)?,
            travel_date,
        };
        let pool = synthesize_flights(&route, self.pool_size, rng.gen())?;
        Ok(RouteContext::new(route, pool)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationParams {
    pub master_seed: u64,
    pub rebind_attempts: usize,
    pub minterm_attempts: usize,
    pub route_attempts: usize,
}

impl GenerationParams {
    pub fn new(master_seed: u64) -> Self {
        GenerationParams {
            master_seed,
            rebind_attempts: 25,
            minterm_attempts: 5,
            route_attempts: 40,
        }
    }
}

/// One query to generate. `salt` is bumped when a unit has to be replaced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryUnit {
    pub config: QueryConfig,
    pub ordinal: usize,
    pub salt: u32,
}

impl QueryUnit {
    pub fn id(&self) -> String {
        format!("q{}-{}", self.config.label(), self.ordinal)
    }

    fn stream(&self, master_seed: u64) -> StageRng {
        let key = stream_key(&[
            self.config.num_slots as u64,
            self.config.num_minterms as u64,
            self.ordinal as u64,
            u64::from(self.salt),
        ]);
        unit_stream(master_seed, key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitOutput {
    pub query: GeneratedQuery,
    /// Pre-paraphrase rendering, the uniqueness key across the dataset.
    pub template_text: String,
    pub samples: Vec<Sample>,
}

/// Runs the slot/minterm/binding retry ladder for one unit.
pub fn generate_unit(
    unit: &QueryUnit,
    params: &GenerationParams,
    source: &dyn FlightSource,
    hook: Option<&dyn Paraphraser>,
) -> Result<UnitOutput, QueryError> {
    let config = &unit.config;
    let mut rng = unit.stream(params.master_seed);
    for _ in 0..params.route_attempts {
        let ctx = source.draw_route(&mut fork(&mut rng))?;
        for _ in 0..params.minterm_attempts {
            let mut shape_rng = fork(&mut rng);
            let slots = select_slots(config.num_slots, &mut shape_rng)?;
            let table = generate_minterms(slots, config.num_minterms, &mut shape_rng)?;
            let pos = minimize_pos(&table);
            for _ in 0..params.rebind_attempts {
                let bindings = match bind_primitives(&pos, &mut fork(&mut rng), &ctx) {
                    Ok(b) => b,
                    Err(QueryError::Constraint(ConstraintError::ExhaustedRetries(_))) => continue,
                    Err(e) => return Err(e),
                };
                let template_text = render_requirement(&pos, &bindings)?;
                if check_operand_mentions(&template_text, &bindings, true).is_err() {
                    continue;
                }
                let mut query = GeneratedQuery {
                    id: unit.id(),
                    num_slots: config.num_slots,
                    num_minterms: config.num_minterms,
                    table: table.clone(),
                    pos: pos.clone(),
                    atypical: bindings.values().any(is_atypical),
                    bindings,
                    text: template_text.clone(),
                    route: ctx.route().clone(),
                };
                let (positives, negatives) = match feasibility_check(&query, ctx.pool(), config) {
                    Ok(split) => split,
                    Err(QueryError::Infeasible { .. }) => continue,
                    Err(e) => return Err(e),
                };
                query.text = apply_paraphrase(hook, &template_text, &query.bindings);
                let samples = assemble_samples(
                    &query,
                    &positives,
                    &negatives,
                    &mut fork(&mut rng),
                    config.max_subsets_per_query,
                )?;
                return Ok(UnitOutput {
                    query,
                    template_text,
                    samples,
                });
            }
        }
        log::debug!("{}: route exhausted, drawing a new one", unit.id());
    }
    Err(QueryError::Abandoned(unit.id()))
}

/// Executes every unit through the given closure and returns results in
/// unit order. Implementations may run units concurrently.
pub type UnitRunner<'a> = &'a dyn Fn(
    &[QueryUnit],
    &(dyn Fn(&QueryUnit) -> Result<UnitOutput, QueryError> + Sync),
) -> Vec<Result<UnitOutput, QueryError>>;

/// Sequential generation.
pub fn generate_dataset(
    grid: &[GridCell],
    params: &GenerationParams,
    source: &dyn FlightSource,
    hook: Option<&(dyn Paraphraser + Sync)>,
) -> Result<Vec<Sample>, QueryError> {
    generate_dataset_with(grid, params, source, hook, &|units, work| {
        units.iter().map(work).collect()
    })
}

/// Generation with a caller-supplied runner. The merge is single-threaded
/// and ordered by unit, so output does not depend on scheduling.
pub fn generate_dataset_with(
    grid: &[GridCell],
    params: &GenerationParams,
    source: &dyn FlightSource,
    hook: Option<&(dyn Paraphraser + Sync)>,
    runner: UnitRunner<'_>,
) -> Result<Vec<Sample>, QueryError> {
    let units: Vec<QueryUnit> = grid
        .iter()
        .flat_map(|cell| {
            (0..cell.unique_queries).map(move |ordinal| QueryUnit {
                config: cell.config,
                ordinal,
                salt: 0,
            })
        })
        .collect();
    let work =
        |unit: &QueryUnit| generate_unit(unit, params, source, hook.map(|h| h as &dyn Paraphraser));
    let results = runner(&units, &work);
    if results.len() != units.len() {
        return Err(QueryError::BadGrid(format!(
            "runner returned {} results for {} units",
            results.len(),
            units.len()
        )));
    }

    let mut seen_texts = BTreeSet::new();
    let mut samples = Vec::new();
    for (unit, result) in units.iter().zip(results) {
        let mut attempt = *unit;
        let mut result = result;
        loop {
            match result {
                Ok(out) if seen_texts.insert(out.template_text.clone()) => {
                    samples.extend(out.samples);
                    break;
                }
                Ok(_) => log::debug!("{}: duplicate requirement, regenerating", attempt.id()),
                Err(QueryError::Abandoned(id)) => {
                    log::warn!("query {id} abandoned after all retries, replacing")
                }
                Err(e) => return Err(e),
            }
            attempt.salt += 1;
            if attempt.salt > MAX_SALT {
                return Err(QueryError::Abandoned(attempt.id()));
            }
            result = work(&attempt);
        }
    }
    Ok(samples)
}
