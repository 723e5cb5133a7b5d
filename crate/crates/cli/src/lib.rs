//! Command line front end for `localgpd`: instance files in, deterministic reports out.

pub mod bench;
pub mod commands;
pub mod error;
pub mod instances;
pub mod report;
pub mod schema;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use localgpd::foliate::ChartSource;

use crate::bench::BenchOptions;
use crate::commands::Ctx;
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::schema::InstanceFile;

/// Point cap for exhaustive commands.
pub const EXHAUSTIVE_POINTS: usize = 4;
/// Point cap for direct checks.
pub const DIRECT_POINTS: usize = 8;
/// Arrow cap for exhaustive commands (the pair groupoid on four points).
pub const EXHAUSTIVE_ARROWS: usize = 16;
pub const DIRECT_ARROWS: usize = 64;
/// Default sweep size for `bench`.
pub const BENCH_POINTS: usize = 3;

#[derive(Parser, Debug, Clone)]
#[command(name = "localgpd", version, about = "Finite sheaves, local subgroupoids and holonomy, checked exhaustively")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Instance file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the instance with any derived table swapped in.
    #[arg(long, global = true)]
    pub emit: Option<PathBuf>,
    /// Largest space accepted; for `bench` and `search-noncoherent`, the sweep size.
    #[arg(long, global = true)]
    pub max_points: Option<usize>,
    #[arg(long, global = true)]
    pub max_arrows: Option<usize>,
    /// Also run the brute-force oracles and compare.
    #[arg(long, global = true)]
    pub oracle: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    CheckSpace,
    CheckPresheaf,
    /// F1 and F2 over every cover of every open.
    CheckSheaf,
    Sheafify,
    Sections,
    CheckGroupoid,
    Glob,
    Loc,
    Coherence,
    /// The loc/glob adjunction over every wide and local subgroupoid.
    Adjunction,
    Foliate(FoliateArgs),
    Regularity,
    LocallyTop,
    Holonomy,
    ActionCheck,
    Transport,
    /// Exhaustive sweep over all spaces up to --max-points with pair groupoids.
    Bench(BenchArgs),
    SearchNoncoherent,
}

#[derive(Args, Debug, Clone, Default, PartialEq, Eq)]
pub struct FoliateArgs {
    /// Components from the charts of the atlas as given (default).
    #[arg(long)]
    pub atlas_charts: bool,
    /// Components from one chart (N(x), germ at x) per point.
    #[arg(long, conflicts_with = "atlas_charts")]
    pub canonical_germs: bool,
}

#[derive(Args, Debug, Clone, Default, PartialEq, Eq)]
pub struct BenchArgs {
    /// Atlases with at most this many charts (default 64 up to three points, 2 beyond).
    #[arg(long)]
    pub max_charts: Option<usize>,
    /// Sample this many spaces with LOCALGPD_SEED when the sweep has more.
    #[arg(long)]
    pub max_instances: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub max_stalk: usize,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckSpace => "check-space",
            Command::CheckPresheaf => "check-presheaf",
            Command::CheckSheaf => "check-sheaf",
            Command::Sheafify => "sheafify",
            Command::Sections => "sections",
            Command::CheckGroupoid => "check-groupoid",
            Command::Glob => "glob",
            Command::Loc => "loc",
            Command::Coherence => "coherence",
            Command::Adjunction => "adjunction",
            Command::Foliate(_) => "foliate",
            Command::Regularity => "regularity",
            Command::LocallyTop => "locally-top",
            Command::Holonomy => "holonomy",
            Command::ActionCheck => "action-check",
            Command::Transport => "transport",
            Command::Bench(_) => "bench",
            Command::SearchNoncoherent => "search-noncoherent",
        }
    }

    fn exhaustive(&self) -> bool {
        matches!(self, Command::Adjunction | Command::Transport | Command::Bench(_) | Command::SearchNoncoherent)
    }

    pub fn needs_input(&self) -> bool {
        !matches!(self, Command::Bench(_) | Command::SearchNoncoherent)
    }
}

/// Everything besides the command that shapes a run.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub max_points: Option<usize>,
    pub max_arrows: Option<usize>,
    pub oracle: bool,
    /// From `LOCALGPD_SEED`.
    pub seed: u64,
}

impl Settings {
    pub fn from_cli(cli: &Cli, seed: u64) -> Settings {
        Settings { max_points: cli.max_points, max_arrows: cli.max_arrows, oracle: cli.oracle, seed }
    }
}

pub struct Execution {
    pub report: Report,
    pub emitted: Option<InstanceFile>,
}

/// Runs one command on the raw bytes of an instance file.
pub fn execute(command: &Command, settings: &Settings, input: Option<&[u8]>) -> CliResult<Execution> {
    let start = Instant::now();
    let (points, arrows) = if command.exhaustive() { (EXHAUSTIVE_POINTS, EXHAUSTIVE_ARROWS) } else { (DIRECT_POINTS, DIRECT_ARROWS) };
    let max_arrows = settings.max_arrows.unwrap_or(arrows);
    let mut emitted = None;
    let mut report = match command {
        Command::Bench(args) => {
            let opts = BenchOptions {
                max_points: settings.max_points.unwrap_or(BENCH_POINTS),
                max_arrows,
                max_charts: args.max_charts,
                max_instances: args.max_instances,
                max_stalk: args.max_stalk,
                seed: settings.seed,
                workers: args.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
            };
            let mut r = Report::new(command.name(), None);
            bench::bench(&opts, &mut r)?;
            r
        }
        Command::SearchNoncoherent => {
            let mut r = Report::new(command.name(), None);
            bench::search_noncoherent(settings.max_points.unwrap_or(EXHAUSTIVE_POINTS), max_arrows, &mut r)?;
            r
        }
        _ => {
            let bytes = input.ok_or_else(|| CliError::schema("--input", "this command reads an instance file"))?;
            let file = schema::parse(bytes)?;
            let ctx = Ctx { file: &file, max_points: settings.max_points.unwrap_or(points), max_arrows, oracle: settings.oracle };
            let mut r = Report::new(command.name(), Some(schema::digest(bytes)));
            emitted = dispatch(command, &ctx, &mut r)?;
            r
        }
    };
    report.timing.elapsed_ms = start.elapsed().as_millis();
    Ok(Execution { report, emitted })
}

fn dispatch(command: &Command, ctx: &Ctx, r: &mut Report) -> CliResult<Option<InstanceFile>> {
    use commands as c;
    match command {
        Command::CheckSpace => c::check_space(ctx, r),
        Command::CheckPresheaf => c::check_presheaf(ctx, r),
        Command::CheckSheaf => c::check_sheaf(ctx, r),
        Command::Sheafify => c::sheafify(ctx, r),
        Command::Sections => c::sections(ctx, r),
        Command::CheckGroupoid => c::check_groupoid(ctx, r),
        Command::Glob => c::glob(ctx, r),
        Command::Loc => c::loc(ctx, r),
        Command::Coherence => c::coherence(ctx, r),
        Command::Adjunction => c::adjunction(ctx, r),
        Command::Foliate(args) => {
            let source = if args.canonical_germs { ChartSource::CanonicalGerms } else { ChartSource::Atlas };
            c::foliate(ctx, r, source)
        }
        Command::Regularity => c::regularity(ctx, r),
        Command::LocallyTop => c::locally_top(ctx, r),
        Command::Holonomy => c::holonomy(ctx, r),
        Command::ActionCheck => c::action_check(ctx, r),
        Command::Transport => c::transport(ctx, r),
        Command::Bench(_) | Command::SearchNoncoherent => unreachable!("handled without an instance"),
    }
}

/// `LOCALGPD_SEED` as a number; anything unparsable is hashed so every value is usable.
pub fn seed_from_env(value: Option<&str>) -> u64 {
    use sha2::{Digest, Sha256};
    match value {
        None => 0,
        Some(v) => v.trim().parse().unwrap_or_else(|_| {
            let d = Sha256::digest(v.as_bytes());
            u64::from_le_bytes(d[..8].try_into().expect("eight bytes"))
        }),
    }
}
