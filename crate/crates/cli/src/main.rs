//! `ringhopf` command-line front end.
//!
//! Exit status: 0 when the requested object was found (a Hopf pair, a clean
//! perturbation, a limit cycle), 2 when the computation ran but found
//! nothing, 1 on any error.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use ringhopf::genericity::{self, RESONANCE_TOL};
use ringhopf::hopf::{self, PRODUCT_REL_TOL};
use ringhopf::phases::{self, OmegaSign};
use ringhopf::simulate::{self, CycleOptions};
use ringhopf::spectra::{self, AXIS_TOL};
use ringhopf::{io, AdjacencyMatrix, AdmissibleOdeFamily, Error, RingParams};

#[derive(Parser, Debug)]
#[command(
    name = "ringhopf",
    version,
    about = "Hopf bifurcation analysis of feed-forward ring networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectrum, Hopf conditions and phase shifts of a ring.
    Analyze(AnalyzeArgs),
    /// Quadrant tables for Cases A, B and C.
    Tables(TablesArgs),
    /// Phase shifts at an imaginary eigenvalue.
    Phases(PhasesArgs),
    /// Perturb the couplings to remove repeated eigenvalues and resonances.
    Perturb(PerturbArgs),
    /// Integrate the ODE family and measure the limit cycle.
    Simulate(SimulateArgs),
    /// Eigenvalues of a ring Jacobian or an integer adjacency matrix.
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Ring JSON file ({"n", "a", "b"}).
    ring: PathBuf,
    /// Distance from the imaginary axis accepted as on-axis.
    #[arg(long, default_value_t = AXIS_TOL, value_parser = positive)]
    axis_tol: f64,
    /// Relative tolerance of the three-node product identity.
    #[arg(long, default_value_t = PRODUCT_REL_TOL, value_parser = positive)]
    product_tol: f64,
    /// Absolute tolerance when matching k i omega against the spectrum.
    #[arg(long, default_value_t = RESONANCE_TOL, value_parser = positive)]
    resonance_tol: f64,
    /// Largest k checked for k:1 resonances.
    #[arg(long, default_value_t = genericity::DEFAULT_K_MAX, value_parser = clap::value_parser!(u32).range(2..))]
    kmax: u32,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OmegaChoice {
    Pos,
    Neg,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[arg(long, value_enum, default_value_t = OmegaChoice::Both)]
    omega: OmegaChoice,
    /// Add the published cells and flag rows that disagree with the lemma.
    #[arg(long)]
    discrepancies: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct PhasesArgs {
    ring: PathBuf,
    /// Use this frequency instead of the detected one (sign selects the eigenvalue).
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Skip the check that i omega is an eigenvalue.
    #[arg(long)]
    force: bool,
    #[arg(long, default_value_t = AXIS_TOL, value_parser = positive)]
    axis_tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PerturbMode {
    /// Repeated eigenvalues only.
    Multiple,
    /// Repeated eigenvalues and k:1 resonances.
    Resonance,
}

#[derive(Args, Debug)]
struct PerturbArgs {
    ring: PathBuf,
    /// Bound on max |b_j - b'_j|.
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    epsilon: f64,
    #[arg(long, value_enum, default_value_t = PerturbMode::Resonance)]
    mode: PerturbMode,
    #[arg(long, default_value_t = genericity::DEFAULT_K_MAX, value_parser = clap::value_parser!(u32).range(2..))]
    kmax: u32,
    /// Eigenvalues closer than this count as repeated; default 1e-7 (1 + spectral radius).
    #[arg(long, value_parser = positive)]
    gap_tol: Option<f64>,
    #[arg(long, default_value_t = RESONANCE_TOL, value_parser = positive)]
    resonance_tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Ring or family JSON file (family adds "cubic", "lambda", "action").
    family: PathBuf,
    /// Bifurcation parameter values; repeat the flag or separate with commas.
    #[arg(
        long,
        required = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    lambda: Vec<f64>,
    /// Integrator step; default predicted period / 4000.
    #[arg(long, value_parser = positive)]
    h: Option<f64>,
    /// Transient discarded before measuring; default 30 / |lambda|.
    #[arg(long, value_parser = positive)]
    settle: Option<f64>,
    /// Bound on period spread and amplitude drift.
    #[arg(long, default_value_t = 1e-3, value_parser = positive)]
    tol: f64,
    /// Periods integrated after the transient.
    #[arg(long, default_value_t = 40)]
    window: usize,
    /// Size of the seeded random offset added to the starting state.
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parallel integrations across lambda values.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Retry at -lambda when no stable cycle appears (subcritical branch).
    #[arg(long)]
    flip: bool,
    /// Output format; text prints the same CSV.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// Ring JSON file (omit with --adjacency).
    #[arg(required_unless_present = "adjacency", conflicts_with = "adjacency")]
    ring: Option<PathBuf>,
    /// Integer adjacency matrix JSON file ({"n", "rows"}).
    #[arg(long)]
    adjacency: Option<PathBuf>,
    #[arg(long, default_value_t = genericity::DEFAULT_K_MAX, value_parser = clap::value_parser!(u32).range(2..))]
    kmax: u32,
    #[arg(long, default_value_t = RESONANCE_TOL, value_parser = positive)]
    resonance_tol: f64,
    #[command(flatten)]
    out: Output,
}

fn positive(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {s}"))
    }
}

/// Computation finished; `found` picks exit status 0 or 2.
struct Outcome {
    found: bool,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("RINGHOPF_LOG")).init();
    // clap exits with 2 on usage errors, which here means "not found".
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(Outcome { found: true }) => ExitCode::SUCCESS,
        Ok(Outcome { found: false }) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Analyze(args) => analyze(args),
        Command::Tables(args) => tables(args),
        Command::Phases(args) => phase_cmd(args),
        Command::Perturb(args) => perturb(args),
        Command::Simulate(args) => simulate_cmd(args),
        Command::Spectrum(args) => spectrum(args),
    }
}

/// A ring file, or the base ring of a family file.
fn load_ring(path: &Path) -> Result<RingParams> {
    match io::load::<RingParams>(path) {
        Ok(ring) => Ok(ring),
        Err(Error::Parse(first)) => match io::load::<AdmissibleOdeFamily>(path) {
            Ok(family) => Ok(family.base),
            Err(_) => bail!("{first}"),
        },
        Err(e) => Err(e).with_context(|| format!("loading {}", path.display())),
    }
}

fn emit(out: &Output, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(out: &Output, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn analyze(args: AnalyzeArgs) -> Result<Outcome> {
    let ring = load_ring(&args.ring)?;
    let spectrum = spectra::eigenvalues(&ring)?;
    let pair = hopf::detect_imaginary_pair(&spectrum, args.axis_tol);
    let conditions = if ring.n() == 3 {
        Some(hopf::hopf_conditions_3(&ring, args.product_tol)?)
    } else {
        None
    };
    // The pair was located spectrally, so the closure check is redundant.
    let profile = match (pair.omega, ring.ensure_nonzero_couplings()) {
        (Some(omega), Ok(())) => Some(phases::phase_shifts(&ring, omega, true)?),
        _ => None,
    };
    let resonances = genericity::detect_resonance(&spectrum, args.kmax, args.resonance_tol);
    let found = pair.omega.is_some();
    log::info!(
        "{}: hopf pair {}",
        args.ring.display(),
        if found { "found" } else { "absent" }
    );
    emit_json(
        &args.out,
        &json!({
            "ring": ring,
            "spectrum": spectrum,
            "imaginary_pair": pair,
            "hopf_conditions": conditions,
            "phase_profile": profile,
            "resonances": resonances,
        }),
    )?;
    Ok(Outcome { found })
}

fn tables(args: TablesArgs) -> Result<Outcome> {
    let signs: &[OmegaSign] = match args.omega {
        OmegaChoice::Pos => &[OmegaSign::Pos],
        OmegaChoice::Neg => &[OmegaSign::Neg],
        OmegaChoice::Both => &[OmegaSign::Pos, OmegaSign::Neg],
    };
    let tables: Vec<_> = signs
        .iter()
        .flat_map(|&s| phases::quadrant_tables(s))
        .collect();
    let text = match args.format {
        Format::Text => render::tables_text(&tables, args.discrepancies),
        Format::Csv => render::tables_csv(&tables, args.discrepancies)?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&tables)?;
            s.push('\n');
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(Outcome { found: true })
}

fn phase_cmd(args: PhasesArgs) -> Result<Outcome> {
    let ring = load_ring(&args.ring)?;
    let omega = match args.omega {
        Some(w) => w,
        None => {
            let spectrum = spectra::eigenvalues(&ring)?;
            match hopf::detect_imaginary_pair(&spectrum, args.axis_tol).omega {
                Some(w) => w,
                None => {
                    eprintln!("no simple imaginary pair; pass --omega to choose one");
                    return Ok(Outcome { found: false });
                }
            }
        }
    };
    // A detected pair already passed the spectral test.
    let force = args.force || args.omega.is_none();
    let profile = phases::phase_shifts(&ring, omega, force)?;
    emit_json(&args.out, &profile)?;
    Ok(Outcome { found: true })
}

fn perturb(args: PerturbArgs) -> Result<Outcome> {
    let ring = load_ring(&args.ring)?;
    let result = match args.mode {
        PerturbMode::Multiple => {
            genericity::remove_multiple_with(&ring, args.epsilon, args.gap_tol)
        }
        PerturbMode::Resonance => {
            genericity::remove_resonances_with(&ring, args.kmax, args.epsilon, args.resonance_tol)
        }
    };
    match result {
        Ok(r) => {
            emit_json(&args.out, &r)?;
            Ok(Outcome { found: true })
        }
        Err(e @ Error::BudgetInsufficient { .. }) => {
            eprintln!("{e}");
            Ok(Outcome { found: false })
        }
        Err(e) => Err(e.into()),
    }
}

fn simulate_cmd(args: SimulateArgs) -> Result<Outcome> {
    let family: AdmissibleOdeFamily =
        io::load(&args.family).with_context(|| format!("loading {}", args.family.display()))?;
    if args.jitter < 0.0 || !args.jitter.is_finite() {
        bail!("--jitter must be a non-negative number");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let jitter = (args.jitter > 0.0).then(|| {
        (0..family.n())
            .map(|_| args.jitter * rng.gen_range(-1.0..1.0))
            .collect::<Vec<f64>>()
    });
    let opts = CycleOptions {
        settle_time: args.settle,
        tol: args.tol,
        h: args.h,
        window_periods: args.window,
        jitter,
        ..CycleOptions::default()
    };
    let rows: Vec<render::SimRow> = if args.flip {
        args.lambda
            .iter()
            .map(|&l| render::SimRow::from_branch(l, simulate::find_branch(&family, l, &opts)))
            .collect()
    } else {
        simulate::branch_sweep(&family, &args.lambda, &opts, args.jobs.max(1))
            .into_iter()
            .map(render::SimRow::from_sweep)
            .collect()
    };
    let found = rows.iter().all(|r| r.measurement.is_ok());
    let text = match args.format {
        Format::Csv | Format::Text => render::simulate_csv(&rows)?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows)?;
            s.push('\n');
            s
        }
    };
    emit(&args.out, &text)?;
    Ok(Outcome { found })
}

fn spectrum(args: SpectrumArgs) -> Result<Outcome> {
    let (source, spectrum) = match (&args.adjacency, &args.ring) {
        (Some(path), _) => {
            let adj: AdjacencyMatrix =
                io::load(path).with_context(|| format!("loading {}", path.display()))?;
            (
                json!({ "adjacency": adj }),
                spectra::adjacency_spectrum(&adj)?,
            )
        }
        (None, Some(path)) => {
            let ring = load_ring(path)?;
            let s = spectra::eigenvalues(&ring)?;
            (json!({ "ring": ring }), s)
        }
        (None, None) => bail!("give a ring file or --adjacency"),
    };
    let resonances = genericity::detect_resonance(&spectrum, args.kmax, args.resonance_tol);
    let mut doc = source;
    doc["spectrum"] = serde_json::to_value(&spectrum)?;
    doc["resonances"] = serde_json::to_value(&resonances)?;
    emit_json(&args.out, &doc)?;
    Ok(Outcome { found: true })
}
