// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! `accred` command-line tool.

mod oracle;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use accred::circuit::{self, families};
use accred::mesothetic::{self, BobStrategy, SessionConfig};
use accred::noise::NoiseModel;
use accred::protocol::bounds::{self, OperationCounts};
use accred::protocol::{self, EpsilonMode, ProtocolConfig};
use accred::rng;
use accred::sim::SimLimits;
use accred::{Circuit, Error};
use clap::{Parser, Subcommand, ValueEnum};

/// Exit code for malformed input or invalid parameters.
pub const EXIT_INPUT: u8 = 2;
/// Exit code for simulator or enumeration limits.
pub const EXIT_LIMITS: u8 = 3;
/// Exit code when at least one check failed.
pub const EXIT_CHECK_FAILED: u8 = 4;

/// Environment variable that sets the number of worker threads.
pub const THREADS_ENV: &str = "ACCRED_THREADS";

#[derive(Parser, Debug)]
#[command(
    name = "accred",
    version,
    about = "Trap-based accreditation of noisy quantum circuit outputs",
    after_help = "Worker threads: set ACCRED_THREADS (default: all cores).\n\
                  Exit codes: 0 ok, 2 bad input, 3 simulator limits, 4 check failed."
)]
struct Cli {
    /// Master seed. Drawn from OS entropy and echoed on stderr when absent.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the protocol on a target circuit and bound its accepted outputs.
    Accredit(AccreditArgs),
    /// Emit the bounded-noise bound as a function of the base error rate.
    Bounds(BoundsArgs),
    /// Run brute-force checks; one JSON line per report.
    Oracle(oracle::OracleArgs),
    /// Run two-party sessions with an honest or deviating prover.
    Mesothetic(MesotheticArgs),
    /// Generate a circuit file.
    Gen(GenArgs),
}

#[derive(clap::Args, Debug)]
struct AccreditArgs {
    /// Target circuit (JSON).
    #[arg(long)]
    circuit: PathBuf,
    /// Number of trap circuits per run.
    #[arg(long)]
    v: usize,
    /// Number of runs.
    #[arg(long)]
    d: usize,
    /// Hoeffding slack.
    #[arg(long)]
    theta: f64,
    /// Noise model (JSON). Noiseless when absent.
    #[arg(long)]
    noise: Option<PathBuf>,
    /// Use the bounded gate-noise credibility bound.
    #[arg(long)]
    bounded_gates: bool,
    /// Largest register for the statevector backend.
    #[arg(long, default_value_t = SimLimits::default().max_statevector_qubits)]
    max_qubits: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CountRule {
    /// GHZ chain: n - 1 cZ gates.
    Ghz,
    /// A maximal cZ matching in every band but the last.
    Dense,
}

#[derive(clap::Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    v: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    /// Grid `start:stop:steps` with 0 <= start < stop < 1.
    #[arg(long)]
    r0_grid: String,
    /// Operation counts per circuit (JSON); overrides --rule.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Counting rule when --counts is absent.
    #[arg(long, value_enum, default_value_t = CountRule::Ghz)]
    rule: CountRule,
    /// Single-qubit gates fail with rate r0 / divisor.
    #[arg(long, default_value_t = 10.0)]
    divisor: f64,
}

#[derive(clap::Args, Debug)]
struct MesotheticArgs {
    /// Target circuit (JSON).
    #[arg(long)]
    circuit: PathBuf,
    #[arg(long)]
    v: usize,
    /// Prover strategy (JSON). Honest when absent.
    #[arg(long, conflicts_with = "bob_rate")]
    bob: Option<PathBuf>,
    /// Random Pauli deviations by the prover at this rate per location.
    #[arg(long)]
    bob_rate: Option<f64>,
    /// Gate error rate of the verifier's device.
    #[arg(long)]
    alice_rate: Option<f64>,
    /// One session prints its report; more print a soundness estimate.
    #[arg(long, default_value_t = 1)]
    sessions: u64,
    /// Include the message transcript (single session only).
    #[arg(long)]
    transcript: bool,
    /// Replace the soundness bound (testing hook).
    #[arg(long)]
    bound: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Ghz,
    RandomClifford,
    RandomGeneric,
}

#[derive(clap::Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long)]
    n: usize,
    /// Number of bands; defaults to n for GHZ.
    #[arg(long)]
    m: Option<usize>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::LimitExceeded { .. } | Error::TooLargeToEnumerate { .. } => EXIT_LIMITS,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn read_circuit(path: &Path) -> CliResult<Circuit> {
    let text = read(path)?;
    circuit::parse(&text).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

/// Output sink honouring `--out`.
pub struct Output {
    inner: Box<dyn Write>,
}

impl Output {
    fn open(path: Option<&Path>) -> CliResult<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(io::BufWriter::new(
                fs::File::create(p).map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
            )),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { inner })
    }

    pub fn write(&mut self, text: &str) -> CliResult<()> {
        self.inner
            .write_all(text.as_bytes())
            .map_err(|e| Failure::input(format!("write failed: {e}")))
    }

    pub fn line(&mut self, text: &str) -> CliResult<()> {
        self.write(text)?;
        self.write("\n")
    }

    fn finish(mut self) -> CliResult<()> {
        self.inner
            .flush()
            .map_err(|e| Failure::input(format!("write failed: {e}")))
    }
}

fn configure_threads() -> CliResult<()> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| Failure::input(format!("{THREADS_ENV}={v:?} is not a thread count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn seed(cli: &Cli) -> u64 {
    cli.seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn accredit(args: &AccreditArgs, seed: u64, format: Format, out: &mut Output) -> CliResult<()> {
    let target = read_circuit(&args.circuit)?;
    let noise = match &args.noise {
        Some(p) => NoiseModel::from_json(&read(p)?).map_err(|e| Failure {
            message: format!("{}: {e}", p.display()),
            ..Failure::from(e)
        })?,
        None => NoiseModel::noiseless(),
    };
    let mut config = ProtocolConfig::new(args.v, args.d, args.theta, seed, noise);
    if args.bounded_gates {
        config.epsilon_mode = EpsilonMode::BoundedGates;
    }
    config.limits = SimLimits::new(args.max_qubits, SimLimits::default().max_density_qubits)?;
    config.validate()?;
    let report = protocol::accredit(&config, &target)?;
    match format {
        Format::Json => out.write(&report.to_json()),
        Format::Csv => {
            out.line("master_seed,v,d,theta,n_acc,epsilon,confidence,bound,accepted_corrupted,status")?;
            let bound = report.bound.map_or("unavailable".to_string(), |b| b.to_string());
            out.line(&format!(
                "{},{},{},{},{},{},{},{},{},\"{}\"",
                report.master_seed,
                report.v,
                report.d,
                report.theta,
                report.n_acc,
                report.epsilon,
                report.confidence,
                bound,
                report.accepted_corrupted,
                report.status
            ))
        }
    }
}

fn bounds_cmd(args: &BoundsArgs, format: Format, out: &mut Output) -> CliResult<()> {
    let grid = bounds::parse_grid(&args.r0_grid)?;
    let counts = match &args.counts {
        Some(p) => serde_json::from_str::<OperationCounts>(&read(p)?)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        None => match args.rule {
            CountRule::Ghz => OperationCounts::ghz(args.n, args.m),
            CountRule::Dense => OperationCounts::dense(args.n, args.m),
        },
    };
    let points = bounds::bounded_noise_curve(args.v, &counts, &grid, args.divisor)?;
    if let Some(p) = points.iter().find(|p| p.vacuous) {
        eprintln!("warning: bound exceeds 1 (vacuous) from r0 = {}", p.r0);
    }
    match format {
        Format::Csv => out.write(&bounds::curve_csv(&points)),
        Format::Json => out.line(&serde_json::to_string_pretty(&points).expect("points serialise")),
    }
}

fn mesothetic_cmd(args: &MesotheticArgs, seed: u64, out: &mut Output) -> CliResult<bool> {
    let target = read_circuit(&args.circuit)?;
    let bob = match (&args.bob, args.bob_rate) {
        (Some(p), _) => serde_json::from_str::<BobStrategy>(&read(p)?)
            .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?,
        (None, Some(rate)) => BobStrategy::RandomPauli { rate },
        (None, None) => BobStrategy::Honest,
    };
    let mut config = SessionConfig::new(args.v, bob);
    if let Some(r) = args.alice_rate {
        config = config.with_alice_noise(NoiseModel::bounded_gate(r)?);
    }
    if args.sessions == 0 {
        return Err(Failure::input("--sessions must be positive"));
    }
    if args.sessions == 1 {
        if args.transcript {
            config = config.with_transcript();
        }
        let report = mesothetic::run_session(&target, &config, &mut rng::seeded(seed))?;
        out.line(&report.to_json())?;
        return Ok(true);
    }
    let est = mesothetic::soundness_estimate(&target, &config, args.sessions, seed)?;
    let instance = format!(
        "{} v={} sessions={} seed={seed}",
        args.circuit.display(),
        args.v,
        args.sessions
    );
    let report = est.report(&instance, args.bound);
    out.line(&report.to_json_line())?;
    Ok(report.passed)
}

fn gen(args: &GenArgs, seed: u64, out: &mut Output) -> CliResult<()> {
    let m = args.m.unwrap_or(args.n);
    let mut r = rng::seeded(seed);
    let c = match args.family {
        Family::Ghz => families::ghz(args.n, m)?,
        Family::RandomClifford => families::random_clifford(args.n, m, &mut r)?,
        Family::RandomGeneric => families::random_generic(args.n, m, &mut r)?,
    };
    out.write(&circuit::serialize(&c))
}

fn run(cli: Cli) -> CliResult<bool> {
    configure_threads()?;
    let mut out = Output::open(cli.out.as_deref())?;
    let passed = match &cli.command {
        Command::Accredit(a) => {
            let s = seed(&cli);
            accredit(a, s, cli.format.unwrap_or(Format::Json), &mut out).map(|_| true)
        }
        Command::Bounds(a) => bounds_cmd(a, cli.format.unwrap_or(Format::Csv), &mut out).map(|_| true),
        Command::Oracle(a) => {
            if cli.format == Some(Format::Csv) {
                return Err(Failure::input("oracle reports are JSON lines only"));
            }
            oracle::run(a, seed(&cli), &mut out)
        }
        Command::Mesothetic(a) => {
            if cli.format == Some(Format::Csv) {
                return Err(Failure::input("session reports are JSON only"));
            }
            mesothetic_cmd(a, seed(&cli), &mut out)
        }
        Command::Gen(a) => {
            if cli.format == Some(Format::Csv) {
                return Err(Failure::input("circuits are JSON only"));
            }
            let s = match a.family {
                Family::Ghz => 0,
                _ => seed(&cli),
            };
            gen(a, s, &mut out).map(|_| true)
        }
    }?;
    out.finish()?;
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
