use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qcoherent_cli::query::{parse_complex, run_query, Label, QueryRequest};
use qcoherent_cli::sweep::{write_json, Observable, OscillatorParams, ZConvention};
use qcoherent_cli::verify::{all_passed, format_plain};
use qcoherent_cli::{
    run_sweep, run_verify, svg, write_csv, CliError, CliResult, Suite, SweepSpec,
    EXIT_VERIFY_FAILED,
};

#[derive(Parser)]
#[command(name = "qcoh", version)]
#[command(about = "Maths-type q-deformed coherent states (q > 1): sweeps, queries and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an observable on a (q, t) grid and print CSV or JSON
    Sweep(SweepArgs),
    /// Run the verification suite
    Verify(VerifyArgs),
    /// Evaluate one observable at one point
    Query(QueryArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Plain,
    Json,
}

#[derive(Args)]
struct OscillatorArgs {
    /// Reduced Planck constant
    #[arg(long, default_value_t = 1.0)]
    hbar: f64,
    /// Oscillator mass
    #[arg(long, default_value_t = 1.0)]
    mass: f64,
    /// Oscillator frequency
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
}

impl OscillatorArgs {
    fn params(&self) -> OscillatorParams {
        OscillatorParams {
            hbar: self.hbar,
            mass: self.mass,
            omega: self.omega,
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    observable: Observable,
    /// Comma-separated q values [default: the figure grid for the observable]
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    #[arg(long)]
    t_min: Option<f64>,
    #[arg(long)]
    t_max: Option<f64>,
    /// Grid size; ignored by the spectrum, which lists every level in [t-min, t-max]
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, value_enum, default_value = "real-sqrt-t")]
    z_convention: ZConvention,
    #[arg(long, value_enum, default_value = "csv")]
    format: SweepFormat,
    /// Also write an SVG plot of the curves
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Add the Fock-matrix cross-check columns
    #[arg(long)]
    oracle: bool,
    /// Fock truncation for --oracle
    #[arg(long, default_value_t = 80)]
    dim: usize,
    #[command(flatten)]
    oscillator: OscillatorArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    suite: Suite,
    #[arg(long, value_enum, default_value = "plain")]
    format: ReportFormat,
}

#[derive(Args)]
struct QueryArgs {
    /// weight, weight-full, mean-photon, mandel, squeeze, snr, metric, spectrum or gur
    #[arg(long)]
    observable: String,
    #[arg(long)]
    q: Option<f64>,
    /// |z|², with the label taken as z = sqrt(t)
    #[arg(long, conflicts_with = "z")]
    t: Option<f64>,
    /// Complex label as re or re,im
    #[arg(long, allow_hyphen_values = true)]
    z: Option<String>,
    /// Level index for the spectrum
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    oracle: bool,
    #[arg(long, default_value_t = 80)]
    dim: usize,
    #[arg(long, value_enum, default_value = "plain")]
    format: ReportFormat,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[command(flatten)]
    oscillator: OscillatorArgs,
}

fn y_label(o: Observable) -> &'static str {
    match o {
        Observable::Weight => "weight W(t)",
        Observable::Mandel => "Mandel Q(t)",
        Observable::Squeeze => "variance ratio R(t)",
        Observable::Snr => "signal-to-noise ratio",
        Observable::Metric => "metric factor",
        Observable::Spectrum => "energy",
    }
}

fn sweep(args: SweepArgs) -> CliResult<i32> {
    let defaults = SweepSpec::figure_defaults(args.observable);
    let spec = SweepSpec {
        observable: args.observable,
        q_list: args.q.unwrap_or(defaults.q_list),
        t_min: args.t_min.unwrap_or(defaults.t_min),
        t_max: args.t_max.unwrap_or(defaults.t_max),
        points: args.points.unwrap_or(defaults.points),
        z_convention: args.z_convention,
        oracle_dim: args.oracle.then_some(args.dim),
        oscillator: args.oscillator.params(),
    };
    let rows = run_sweep(&spec)?;
    let stdout = io::stdout().lock();
    match args.format {
        SweepFormat::Csv => write_csv(&rows, args.oracle, stdout)?,
        SweepFormat::Json => write_json(&rows, stdout)?,
    }
    if let Some(path) = args.svg {
        let x = if args.observable == Observable::Spectrum {
            "level n"
        } else {
            "t = |z|^2"
        };
        std::fs::write(path, svg::render(&rows, x, y_label(args.observable)))?;
    }
    Ok(0)
}

fn verify(args: VerifyArgs) -> CliResult<i32> {
    let reports = run_verify(args.suite);
    let mut out = io::stdout().lock();
    match args.format {
        ReportFormat::Plain => out.write_all(format_plain(&reports).as_bytes())?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &reports)?;
            writeln!(out)?;
        }
    }
    Ok(if all_passed(&reports) {
        0
    } else {
        EXIT_VERIFY_FAILED
    })
}

fn query(args: QueryArgs) -> CliResult<i32> {
    let label = match (args.t, args.z.as_deref()) {
        (Some(t), _) => Some(Label::T(t)),
        (None, Some(z)) => Some(Label::Z(parse_complex(z)?)),
        (None, None) => None,
    };
    let req = QueryRequest {
        observable: args.observable.parse()?,
        q: args.q,
        label,
        level: args.n,
        oracle_dim: args.oracle.then_some(args.dim),
        oscillator: args.oscillator.params(),
        alpha: args.alpha,
        beta: args.beta,
    };
    let report = run_query(&req)?;
    let mut out = io::stdout().lock();
    match args.format {
        ReportFormat::Plain => out.write_all(report.to_plain().as_bytes())?,
        ReportFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Verify(a) => verify(a),
        Command::Query(a) => query(a),
    };
    let code = result.unwrap_or_else(|e: CliError| {
        eprintln!("qcoh: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
