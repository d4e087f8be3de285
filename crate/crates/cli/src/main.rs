//! `capcert`: command-line front end for separated point sets and cover certificates.

use std::path::PathBuf;
use std::process::ExitCode;

use capcert::certify::Mode;
use capcert::experiment::{self, parse_angle, parse_mode, ExperimentConfig, OutputFormat, SeedRange, Task};
use capcert::Error;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "capcert", version, about = "Separated spherical point sets and covering lower-bound certificates")]
struct Cli {
    /// Worker threads for the data-parallel kernels. Results do not depend on it.
    #[arg(long, env = "CAPCERT_THREADS", default_value_t = 1, global = true)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample N points, delete bad pairs, report the separated set.
    Construct(Flags),
    /// Build witness sets (apexes plus ring samples) and check their diameter.
    Witness(Flags),
    /// Bound the number of illuminating directions for an apex set.
    IllumCertify(Flags),
    /// Cover a point set by balls of a given diameter.
    BallCover(Flags),
    /// Tabulate the normalized cap measure.
    CapTable(Flags),
    /// Illumination pipeline: psi = 6pi/14, phi = psi + eps, alpha = pi/14.
    Theorem1(Flags),
    /// Ball-cover pipeline: psi = pi/3, phi = pi/3 + eps, scaled to diameter 1.
    Theorem2Balls(Flags),
}

impl Command {
    fn split(self) -> (Task, Flags) {
        match self {
            Command::Construct(f) => (Task::Construct, f),
            Command::Witness(f) => (Task::Witness, f),
            Command::IllumCertify(f) => (Task::IllumCertify, f),
            Command::BallCover(f) => (Task::BallCover, f),
            Command::CapTable(f) => (Task::CapTable, f),
            Command::Theorem1(f) => (Task::Theorem1, f),
            Command::Theorem2Balls(f) => (Task::Theorem2Balls, f),
        }
    }
}

fn angle(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn mode(s: &str) -> Result<Mode, String> {
    parse_mode(s).map_err(|e| e.to_string())
}

fn seeds(s: &str) -> Result<SeedRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone)]
struct PointList(Vec<Vec<f64>>);

/// `x1,y1;x2,y2;...`
fn inline_points(s: &str) -> Result<PointList, String> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split(',')
                .map(|c| c.trim().parse::<f64>().map_err(|_| format!("bad coordinate {c:?}")))
                .collect()
        })
        .collect::<Result<_, _>>()
        .map(PointList)
}

/// Flags shared by every subcommand. Flags override values from `--config`.
#[derive(Args, Debug, Default)]
struct Flags {
    /// TOML (or .json) file with any of the settings below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Ambient dimension n (points live on S^{n-1}).
    #[arg(long)]
    dim: Option<usize>,
    /// Dimensions for cap-table, comma separated [default: --dim].
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Cone angle, radians or a fraction of pi such as pi/14.
    #[arg(long, value_parser = angle)]
    alpha: Option<f64>,
    /// Separation angle psi.
    #[arg(long, value_parser = angle)]
    psi: Option<f64>,
    /// Cap radius phi used for the candidate count (psi < phi < pi/2).
    #[arg(long, value_parser = angle)]
    phi: Option<f64>,
    /// Pipeline slack epsilon [default: 0.05].
    #[arg(long, value_parser = angle)]
    epsilon: Option<f64>,
    /// Angles for cap-table, comma separated [default: k pi/16, k = 0..16].
    #[arg(long, value_delimiter = ',', value_parser = angle)]
    thetas: Option<Vec<f64>>,
    /// Ball diameter for ball-cover [default: 1].
    #[arg(long)]
    diameter: Option<f64>,
    /// Random seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
    /// Seed sweep A..B (end exclusive) or A..=B; overrides --seed.
    #[arg(long, value_parser = seeds)]
    seeds: Option<SeedRange>,
    /// Certification mode: exact, mc or greedy [default: exact].
    #[arg(long, value_parser = mode)]
    certify: Option<Mode>,
    /// Ring samples per apex [default: max(64, 2n)].
    #[arg(long)]
    samples_per_ring: Option<usize>,
    /// Monte Carlo directions for multiplicity [default: 100000].
    #[arg(long)]
    mc_samples: Option<usize>,
    /// Largest instance for exact mode [default: 64 caps, 24 points for balls].
    #[arg(long)]
    exact_limit: Option<usize>,
    /// Candidate count to use instead of the formula for N.
    #[arg(long)]
    n_override: Option<usize>,
    /// Uniform directions added to the greedy direction pool [default: 256].
    #[arg(long)]
    extra_candidates: Option<usize>,
    /// Point-set file (CAPF binary or JSON).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Points inline: "x1,y1;x2,y2;...".
    #[arg(long, value_parser = inline_points)]
    inline_points: Option<PointList>,
    /// Report path [default: stdout].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format: json or csv [default: json].
    #[arg(long, value_parser = format)]
    format: Option<OutputFormat>,
    /// Write the point sets used as .capf files next to --out.
    #[arg(long)]
    artifacts: bool,
    /// Include wall-clock timings in the report.
    #[arg(long)]
    timing: bool,
}

fn build_config(task: Task, f: Flags) -> Result<ExperimentConfig, Error> {
    let mut c = match &f.config {
        Some(path) => ExperimentConfig::from_file_for(path, Some(task))?,
        None => ExperimentConfig::new(task),
    };
    macro_rules! take {
        ($($field:ident => $target:ident),* $(,)?) => {
            $(if let Some(v) = f.$field { c.$target = Some(v); })*
        };
    }
    take!(
        dim => dim, dims => dims, alpha => alpha, psi => psi, phi => phi, epsilon => epsilon,
        thetas => thetas, diameter => diameter, seeds => seeds, certify => certify,
        samples_per_ring => samples_per_ring, mc_samples => mc_samples, exact_limit => exact_limit,
        n_override => n_override, extra_candidates => extra_candidates, out => output_path,
    );
    if let Some(s) = f.seed {
        c.seed = s;
        // an explicit --seed replaces a sweep from the file
        if f.seeds.is_none() {
            c.seeds = None;
        }
    }
    if let Some(p) = f.points {
        c.points = Some(p);
        c.inline_points = None;
    }
    if let Some(p) = f.inline_points {
        c.inline_points = Some(p.0);
        c.points = None;
    }
    if let Some(fmt) = f.format {
        c.format = fmt;
    }
    c.artifacts |= f.artifacts;
    c.timing |= f.timing;
    Ok(c)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.max(1))
        .build_global()
    {
        eprintln!("error: cannot start worker pool: {e}");
        return ExitCode::from(1);
    }
    let (task, flags) = cli.command.split();
    let outcome = build_config(task, flags)
        .and_then(|config| experiment::run(&config))
        .and_then(|report| experiment::emit(&report));
    match outcome {
        Ok(Some(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiment::exit_code(&e) as u8)
        }
    }
}
