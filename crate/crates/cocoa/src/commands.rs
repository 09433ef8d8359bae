//! Subcommand bodies, callable in-process. Each returns what goes to stdout
//! and the process exit code.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use chrono::NaiveDate;
use cocoa_core::analytics::dataset_stats;
use cocoa_core::eval::{score, validate_dataset};
use cocoa_core::query::{
    generate_dataset_with, parse_grid, FlightSource, GenerationParams, Paraphraser, QueryConfig,
    Sample, SyntheticSource,
};

use crate::answers::parse_answers;
use crate::dataset::{manifest_path, read_jsonl, write_jsonl, Manifest, ManifestInputs};
use crate::exec::{run_parallel, CommandParaphraser};
use crate::flights::{import_flights, FileSource};
use crate::report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VIOLATIONS: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(#[from] anyhow::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Usage(_) => EXIT_USAGE,
            CommandError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            exit_code: EXIT_OK,
        }
    }
}

pub fn default_epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(2024, 1, 1).expect("valid date")
}

#[derive(Debug, Clone)]
pub struct GenerateArgs {
    pub grid: String,
    pub seed: u64,
    pub out: PathBuf,
    pub flights: Option<PathBuf>,
    pub paraphrase_cmd: Option<String>,
    pub jobs: usize,
    pub pool_size: Option<usize>,
    pub max_subsets: usize,
    pub epoch: NaiveDate,
}

impl GenerateArgs {
    pub fn new(grid: impl Into<String>, seed: u64, out: impl Into<PathBuf>) -> Self {
        GenerateArgs {
            grid: grid.into(),
            seed,
            out: out.into(),
            flights: None,
            paraphrase_cmd: None,
            jobs: 0,
            pool_size: None,
            max_subsets: QueryConfig::DEFAULT_MAX_SUBSETS,
            epoch: default_epoch(),
        }
    }
}

pub const DEFAULT_POOL_SIZE: usize = 80;

fn write_atomically(path: &Path, contents: &str) -> anyhow::Result<PathBuf> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).with_context(|| format!("writing {}", tmp.display()))?;
    Ok(tmp)
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<Outcome, CommandError> {
    let mut grid =
        parse_grid(&args.grid).map_err(|e| CommandError::Usage(format!("--grid: {e}")))?;
    if args.max_subsets == 0 {
        return Err(CommandError::Usage(
            "--max-subsets must be at least 1".into(),
        ));
    }
    if args.flights.is_some() && args.pool_size.is_some() {
        return Err(CommandError::Usage(
            "--pool-size only applies to synthesized flights, not --flights".into(),
        ));
    }
    if matches!(args.pool_size, Some(n) if n < 5) {
        return Err(CommandError::Usage("--pool-size must be at least 5".into()));
    }
    if let Some(parent) = args.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        if !parent.is_dir() {
            return Err(CommandError::Usage(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    for cell in &mut grid {
        cell.config.max_subsets_per_query = args.max_subsets;
    }

    let synthetic;
    let file_source;
    let (source, source_label, pool_size): (&dyn FlightSource, String, Option<usize>) = match &args
        .flights
    {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CommandError::Usage(format!("--flights {}: {e}", path.display())))?;
            let imported =
                import_flights(&text).with_context(|| format!("importing {}", path.display()))?;
            for field in &imported.ignored_fields {
                log::info!("flight field `{field}`: unrecognized, ignored");
            }
            file_source = FileSource::from_imported(imported, 5)
                .with_context(|| format!("pooling {}", path.display()))?;
            log::info!("{} routes with usable pools", file_source.routes().len());
            (&file_source, format!("file:{}", path.display()), None)
        }
        None => {
            let size = args.pool_size.unwrap_or(DEFAULT_POOL_SIZE);
            synthetic = SyntheticSource::new(args.epoch, size);
            (&synthetic, "synthetic".to_string(), Some(size))
        }
    };
    let hook = args.paraphrase_cmd.as_deref().map(CommandParaphraser::new);
    let hook_ref = hook.as_ref().map(|h| h as &(dyn Paraphraser + Sync));

    let params = GenerationParams::new(args.seed);
    let jobs = args.jobs;
    let samples = generate_dataset_with(&grid, &params, source, hook_ref, &|units, work| {
        run_parallel(jobs, units, work)
    })
    .context("generation failed")?;

    let manifest = Manifest::build(
        ManifestInputs {
            master_seed: args.seed,
            epoch: args.epoch,
            flight_source: source_label,
            pool_size,
            paraphrase_command: args.paraphrase_cmd.as_deref(),
        },
        &grid,
        &samples,
    );
    let manifest_out = manifest_path(&args.out);
    let data_tmp = write_atomically(&args.out, &write_jsonl(&samples))?;
    let manifest_tmp = match write_atomically(&manifest_out, &manifest.to_json()) {
        Ok(p) => p,
        Err(e) => {
            let _ = fs::remove_file(&data_tmp);
            return Err(e.into());
        }
    };
    let renamed =
        fs::rename(&data_tmp, &args.out).and_then(|()| fs::rename(&manifest_tmp, &manifest_out));
    if let Err(e) = renamed {
        for p in [&data_tmp, &manifest_tmp, &args.out, &manifest_out] {
            let _ = fs::remove_file(p);
        }
        return Err(anyhow::Error::from(e)
            .context("moving output into place")
            .into());
    }

    let queries: usize = grid.iter().map(|c| c.unique_queries).sum();
    Ok(Outcome::ok(format!(
        "generated {queries} unique queries, {} samples -> {} (manifest {})\n",
        samples.len(),
        args.out.display(),
        manifest_out.display()
    )))
}

pub fn load_dataset(path: &Path) -> Result<Vec<Sample>, CommandError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CommandError::Usage(format!("{}: {e}", path.display())))?;
    read_jsonl(&text)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(CommandError::from)
}

pub fn cmd_validate(dataset: &Path, json: bool) -> Result<Outcome, CommandError> {
    let samples = load_dataset(dataset)?;
    let report = validate_dataset(&samples);
    let stdout = if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report::validation_json(&report)).expect("json")
        )
    } else {
        report::validation_text(&report, 10)
    };
    let exit_code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATIONS
    };
    Ok(Outcome { stdout, exit_code })
}

pub fn cmd_stats(dataset: &Path, json: bool) -> Result<Outcome, CommandError> {
    let samples = load_dataset(dataset)?;
    let stats = dataset_stats(&samples).map_err(|e| anyhow::anyhow!("{e}"))?;
    Ok(Outcome::ok(if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report::stats_json(&stats)).expect("json")
        )
    } else {
        report::stats_table(&stats)
    }))
}

pub fn cmd_analyze(dataset: &Path) -> Result<Outcome, CommandError> {
    let samples = load_dataset(dataset)?;
    Ok(Outcome::ok(
        report::analyze_csv(&samples).context("writing csv")?,
    ))
}

pub fn cmd_score(dataset: &Path, answers: &Path, json: bool) -> Result<Outcome, CommandError> {
    let samples = load_dataset(dataset)?;
    let text = fs::read_to_string(answers)
        .map_err(|e| CommandError::Usage(format!("{}: {e}", answers.display())))?;
    let answers = parse_answers(&text).map_err(|e| CommandError::Usage(e.to_string()))?;
    let result = score(&samples, &answers).map_err(|e| CommandError::Usage(e.to_string()))?;
    Ok(Outcome::ok(if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&report::score_json(&result)).expect("json")
        )
    } else {
        report::score_table(&result)
    }))
}
