//! Argument parsing and the three subcommands.
//!
//! Settings resolve as: command-line flag, then the `--config` JSON file,
//! then the built-in default. `SMOOTHGAME_OUT_DIR` names a directory that
//! receives output files when `--out` is absent.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;
use smoothgame_core::engine::{run_game, GameConfig};

use crate::error::{CliError, CliResult};
use crate::names::{build_adversary, build_learner, parse_scenario, parse_weight, GameSetup, NamedSpec};
use crate::output::{
    config_hash, unix_timestamp, write_rows_csv, write_rows_json, write_summary_csv, write_transcript,
    CertificateStatus, Summary,
};
use crate::registry::{run_experiments, suite};
use crate::tables::{build_table, parse_grid, TableOptions, TABLES};

pub const OUT_DIR_ENV: &str = "SMOOTHGAME_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "smoothgame",
    version,
    about = "Online learning games on smooth function classes"
)]
struct Cli {
    /// Worker threads for experiment fan-out (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output file. Without it, files go to $SMOOTHGAME_OUT_DIR when set and
    /// tables/rows go to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Omit the generation timestamp and wall-clock figures so that reruns
    /// are byte-identical.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Play one game.
    Simulate(SimulateArgs),
    /// Run a registered suite (sharp_constants, scaling_law, divergence or all).
    Verify { suite: String },
    /// Sweep a parameter grid (fn_ratio, gn_ratio, eps_step, scaling).
    Table(TableArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// JSON file with any of: learner, adversary, scenario, radius, weight,
    /// p, q, dim, horizon, seed.
    #[arg(long)]
    config: Option<PathBuf>,
    /// zero, linint, linint_prime, feasible_midpoint, span:r=<v>
    #[arg(long)]
    learner: Option<String>,
    /// Name with optional parameters, e.g. geometric_escape:c=2,h=1,N=50
    #[arg(long)]
    adversary: Option<String>,
    /// base, s1, s2 or s3
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    /// id, exp:c=<v>, indicator, one, invlog2 or custom:<file>
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    /// Input dimension (defaults to the adversary's).
    #[arg(long)]
    dim: Option<usize>,
    /// Cap on scored rounds after round 0.
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Exit with status 1 unless the loss is at least this value.
    #[arg(long)]
    expect_at_least: Option<f64>,
    /// Exit with status 1 unless the loss is at most this value.
    #[arg(long)]
    expect_at_most: Option<f64>,
}

#[derive(Debug, Args)]
struct TableArgs {
    name: String,
    /// Comma-separated grid; an empty string gives a header-only table.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Family size for gn_ratio.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    learner: Option<String>,
    adversary: Option<String>,
    scenario: Option<String>,
    radius: Option<f64>,
    weight: Option<String>,
    p: Option<f64>,
    q: Option<f64>,
    dim: Option<usize>,
    horizon: Option<usize>,
    seed: Option<u64>,
}

const DEFAULT_HORIZON: usize = 1_000_000;

/// Parses `args` (program name first), runs the command and returns the exit
/// status: 0 when everything passed, 1 on an expectation or certificate
/// failure, 2 on a usage error.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<i32> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build()?;
    let common = Common {
        out: cli.out,
        format: cli.format,
        timestamp: !cli.no_timestamp,
    };
    pool.install(|| match cli.command {
        Command::Simulate(args) => simulate(&common, args),
        Command::Verify { suite } => verify(&common, &suite),
        Command::Table(args) => table(&common, args),
    })
}

struct Common {
    out: Option<PathBuf>,
    format: Option<Format>,
    timestamp: bool,
}

impl Common {
    /// `--out`, else `$SMOOTHGAME_OUT_DIR/<default_name>`, else nothing.
    fn destination(&self, default_name: &str) -> Option<PathBuf> {
        self.out.clone().or_else(|| {
            std::env::var_os(OUT_DIR_ENV)
                .filter(|d| !d.is_empty())
                .map(|d| Path::new(&d).join(default_name))
        })
    }

    fn comments(&self) -> Vec<String> {
        if self.timestamp {
            vec![format!("generated_at_unix={}", unix_timestamp())]
        } else {
            Vec::new()
        }
    }
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn load_config(path: &Path) -> CliResult<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

fn simulate(common: &Common, args: SimulateArgs) -> CliResult<i32> {
    let file = match &args.config {
        Some(path) => load_config(path)?,
        None => ConfigFile::default(),
    };
    let learner_text = args.learner.or(file.learner).unwrap_or_else(|| "linint".into());
    let adversary_text = args
        .adversary
        .or(file.adversary)
        .unwrap_or_else(|| "greedy_budget".into());
    let scenario_text = args.scenario.or(file.scenario).unwrap_or_else(|| "base".into());
    let radius = args.radius.or(file.radius).unwrap_or(1.0);
    let weight_text = args.weight.or(file.weight);
    let p = args.p.or(file.p).unwrap_or(2.0);
    let q = args.q.or(file.q).unwrap_or(2.0);
    let horizon = args.horizon.or(file.horizon).unwrap_or(DEFAULT_HORIZON);
    let seed = args.seed.or(file.seed).unwrap_or(0);

    if weight_text.is_some() && scenario_text != "s3" {
        return Err(CliError::usage("--weight only applies to --scenario s3"));
    }
    let weight = weight_text.as_deref().map(parse_weight).transpose()?;
    let scenario = parse_scenario(&scenario_text, radius, weight)?;
    let learner_spec = NamedSpec::parse(&learner_text)?;
    let adversary_spec = NamedSpec::parse(&adversary_text)?;
    let setup = GameSetup {
        p,
        q,
        scenario: scenario.clone(),
        seed,
    };
    let mut built = build_adversary(&adversary_spec, &setup)?;
    let dim = args.dim.or(file.dim).unwrap_or_else(|| built.adversary.dimension());
    let mut learner = build_learner(&learner_spec, dim, built.hypotheses.as_ref())?;
    let config = GameConfig::new(p, q, scenario)?
        .with_horizon(horizon)
        .with_dimension(dim)
        .with_seed(seed);

    let resolved = json!({
        "learner": learner_spec.to_string(),
        "adversary": adversary_spec.to_string(),
        "scenario": config.scenario.label(),
        "p": p,
        "q": q,
        "dim": dim,
        "horizon": horizon,
        "seed": seed,
    });
    let hash = config_hash(&resolved);

    let tr = run_game(&config, learner.as_mut(), built.adversary.as_mut())?;
    let certificate = match built.adversary.certificate().verify(&tr) {
        Ok(v) if v.passed() => CertificateStatus::Pass,
        Ok(_) => CertificateStatus::Fail,
        Err(_) => CertificateStatus::None,
    };
    let summary = Summary::new(
        &tr,
        learner_spec.to_string(),
        adversary_spec.to_string(),
        certificate,
        hash.clone(),
    );

    let mut header = resolved;
    header["kind"] = json!("header");
    header["config_hash"] = json!(hash);
    if common.timestamp {
        header["generated_at_unix"] = json!(unix_timestamp());
    }
    let file_name = format!(
        "simulate_{}_{}_{}.jsonl",
        adversary_spec.name,
        learner_spec.name,
        &hash[..12]
    );
    let destination = common.destination(&file_name);
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    if let Some(path) = &destination {
        let mut w = create(path)?;
        write_transcript(&mut w, &header, &tr, &summary)?;
        w.flush()?;
    }
    match common.format.unwrap_or(Format::Csv) {
        Format::Csv => write_summary_csv(&mut stdout, &summary, &[])?,
        Format::Json if destination.is_none() => write_transcript(&mut stdout, &header, &tr, &summary)?,
        Format::Json => writeln!(stdout, "{}", serde_json::to_string(&summary)?)?,
    }

    let mut failed = false;
    if certificate == CertificateStatus::Fail {
        eprintln!("certificate check failed: the revealed labels do not certify a class member");
        failed = true;
    }
    if let Some(lo) = args.expect_at_least {
        if !(tr.cumulative_loss >= lo) {
            eprintln!("expectation failed: loss {} < {lo}", tr.cumulative_loss);
            failed = true;
        }
    }
    if let Some(hi) = args.expect_at_most {
        if !(tr.cumulative_loss <= hi) {
            eprintln!("expectation failed: loss {} > {hi}", tr.cumulative_loss);
            failed = true;
        }
    }
    Ok(i32::from(failed))
}

fn verify(common: &Common, suite_name: &str) -> CliResult<i32> {
    let experiments = suite(suite_name)?;
    let rows = run_experiments(&experiments, common.timestamp)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    let format = common.format.unwrap_or(Format::Csv);
    let ext = if format == Format::Csv { "csv" } else { "jsonl" };
    let emit = |out: &mut dyn Write| -> CliResult<()> {
        match format {
            Format::Csv => write_rows_csv(out, &rows, &common.comments()),
            Format::Json => write_rows_json(out, &rows),
        }
    };
    match common.destination(&format!("verify_{suite_name}.{ext}")) {
        Some(path) => {
            let mut w = create(&path)?;
            emit(&mut w)?;
            w.flush()?;
        }
        None => emit(&mut io::stdout().lock())?,
    }
    for r in rows.iter().filter(|r| !r.pass) {
        eprintln!(
            "FAIL {} / {}: measured {} vs {} {}",
            r.experiment, r.parameters, r.measured, r.bound, r.expected
        );
    }
    eprintln!("verify {suite_name}: {} rows, {failed} failed", rows.len());
    Ok(i32::from(failed > 0))
}

fn table(common: &Common, args: TableArgs) -> CliResult<i32> {
    if common.format == Some(Format::Json) {
        return Err(CliError::usage("tables are emitted as CSV only"));
    }
    let spec = TABLES.iter().find(|t| t.name == args.name);
    let grid_text = match (&args.grid, spec) {
        (Some(g), _) => g.clone(),
        (None, Some(s)) => s.default_grid.to_string(),
        (None, None) => String::new(),
    };
    let grid = parse_grid(&grid_text)?;
    let opts = TableOptions {
        p: args.p,
        q: args.q,
        eps: args.eps,
        n: args.n,
    };
    let table = build_table(&args.name, &grid, &opts)?;
    let comments = common.comments();
    match common.destination(&format!("table_{}.csv", args.name)) {
        Some(path) => {
            let mut w = create(&path)?;
            table.write_csv(&mut w, &comments)?;
            w.flush()?;
        }
        None => table.write_csv(&mut io::stdout().lock(), &comments)?,
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clap_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["smoothgame", "frobnicate"]), 2);
        assert_eq!(run(["smoothgame", "simulate", "--learner", "oracle"]), 2);
        assert_eq!(run(["smoothgame", "simulate", "--scenario", "s9"]), 2);
        assert_eq!(run(["smoothgame", "verify", "nope"]), 2);
        assert_eq!(run(["smoothgame", "simulate", "--weight", "id"]), 2);
    }
}
