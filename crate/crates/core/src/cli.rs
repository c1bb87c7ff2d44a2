//! `hpfilt` command line: `filter`, `si` and `bench`.
//!
//! Exit codes: 0 on success, 1 for data or runtime errors, 2 for usage
//! errors. Commands write to the supplied streams so they can be driven
//! in-process.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::bench::{self, BenchConfig, DEFAULT_REPEATS, DEFAULT_SEED};
use crate::filters::{
    bhp, hp_direct, ohp, sohp_with_cache, Decomposition, FilterConfig, TraceCache,
    MONTHLY_SMOOTHING,
};
use crate::io::{self, OutputFormat, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable overriding the benchmark seed.
pub const SEED_ENV: &str = "HPFILT_SEED";

#[derive(Debug, Parser)]
#[command(name = "hpfilt", version, about = "Hodrick-Prescott trend filters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decompose a series into trend and cycle.
    Filter(FilterArgs),
    /// Print the SOHP stopping index for each stage count.
    Si(SiArgs),
    /// Time the dense direct solve against the incremental recursion.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Hp,
    Bhp,
    Ohp,
    Sohp,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Hp => "hp",
            Method::Bhp => "bhp",
            Method::Ohp => "ohp",
            Method::Sohp => "sohp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file with a header row.
    input: PathBuf,
    /// Smoothing parameter.
    #[arg(long, default_value_t = MONTHLY_SMOOTHING)]
    lambda: f64,
    /// Take natural logs of the values before filtering.
    #[arg(long)]
    log: bool,
    #[arg(long, default_value = "Close")]
    value_column: String,
    #[arg(long, default_value = "Date")]
    date_column: String,
    /// Input has no date column.
    #[arg(long)]
    no_date: bool,
}

#[derive(Debug, Args)]
struct FilterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    method: Method,
    /// Boosting rounds (bhp only).
    #[arg(long)]
    n: Option<usize>,
    /// Stages probed by the stopping index (sohp).
    #[arg(long = "max-iter", default_value_t = 20)]
    max_iter: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct SiArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long = "max-iter", default_value_t = 20)]
    max_iter: usize,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Comma-separated series lengths.
    #[arg(long, value_delimiter = ',', default_values_t = bench::DEFAULT_LENGTHS)]
    lengths: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
    /// Report file; JSON on standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return report_clap(e, stdout, stderr),
    };
    let outcome = match cli.command {
        Command::Filter(a) => cmd_filter(a, stdout, stderr),
        Command::Si(a) => cmd_si(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => report_clap(e, stdout, stderr),
        Err(Failure::Data(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_DATA
        }
    }
}

fn report_clap(e: clap::Error, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = e.render().to_string();
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(stdout, "{text}");
            EXIT_OK
        }
        _ => {
            let _ = write!(stderr, "{text}");
            EXIT_USAGE
        }
    }
}

enum Failure {
    Usage(clap::Error),
    Data(String),
}

fn usage(kind: ErrorKind, msg: impl std::fmt::Display) -> Failure {
    Failure::Usage(Cli::command().error(kind, msg))
}

fn data(e: impl std::fmt::Display) -> Failure {
    Failure::Data(e.to_string())
}

struct Series {
    values: Vec<f64>,
    dates: Option<Vec<chrono::NaiveDate>>,
}

fn load(args: &InputArgs) -> Result<Series, Failure> {
    let date_column = (!args.no_date).then_some(args.date_column.as_str());
    let records = io::read_csv_path(&args.input, &args.value_column, date_column)
        .map_err(|e| data(format!("{}: {e}", args.input.display())))?;
    let values = if args.log {
        io::log_transform(&records).map_err(data)?
    } else {
        io::values(&records)
    };
    Ok(Series {
        values,
        dates: io::dates(&records),
    })
}

fn check_lambda(lambda: f64) -> Result<(), Failure> {
    if lambda.is_finite() && lambda >= 0.0 {
        Ok(())
    } else {
        Err(usage(
            ErrorKind::ValueValidation,
            format!("--lambda must be finite and non-negative, got {lambda}"),
        ))
    }
}

fn check_max_iter(max_iter: usize) -> Result<(), Failure> {
    if max_iter == 0 {
        Err(usage(
            ErrorKind::ValueValidation,
            "--max-iter must be at least 1",
        ))
    } else {
        Ok(())
    }
}

fn cmd_filter(
    a: FilterArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    check_lambda(a.input.lambda)?;
    check_max_iter(a.max_iter)?;
    let rounds = match (a.method, a.n) {
        (Method::Bhp, Some(0)) => {
            return Err(usage(ErrorKind::ValueValidation, "--n must be at least 1"))
        }
        (Method::Bhp, Some(n)) => n,
        (Method::Bhp, None) => {
            return Err(usage(
                ErrorKind::MissingRequiredArgument,
                "--method bhp requires --n",
            ))
        }
        (_, Some(_)) => {
            return Err(usage(
                ErrorKind::ArgumentConflict,
                "--n is only valid with --method bhp",
            ))
        }
        (_, None) => 0,
    };

    let series = load(&a.input)?;
    let y = &series.values;
    let lambda = a.input.lambda;
    let l = y.len();
    let mut summary = format!("l={l} method={} lambda={lambda}", a.method.name());

    let plain: Decomposition;
    let sohp_result;
    let report = match a.method {
        Method::Hp => {
            plain = hp_direct(y, lambda).map_err(data)?;
            Report::from(&plain)
        }
        Method::Bhp => {
            plain = bhp(y, lambda, rounds).map_err(data)?;
            summary.push_str(&format!(" n={rounds}"));
            Report::from(&plain)
        }
        Method::Ohp => {
            plain = Decomposition::from_trend(y.clone(), ohp(y, lambda).map_err(data)?);
            Report::from(&plain)
        }
        Method::Sohp => {
            let cfg = FilterConfig::new(lambda, a.max_iter).map_err(data)?;
            let cache = TraceCache::build(l.max(3), lambda).map_err(data)?;
            sohp_result = sohp_with_cache(y, &cfg, &cache).map_err(data)?;
            summary.push_str(&format!(" n={}", sohp_result.chosen_n));
            match sohp_result.chosen_si() {
                Some(si) => summary.push_str(&format!(" si={si:.6}")),
                None => summary.push_str(" si=undefined"),
            }
            Report::from(&sohp_result)
        }
    };

    let format = a.format.into();
    let dates = series.dates.as_deref();
    match &a.out {
        Some(path) => {
            io::write_decomposition_path(report, dates, format, path)
                .map_err(|e| data(format!("{}: {e}", path.display())))?;
            writeln!(stdout, "{summary}").map_err(data)?;
        }
        None => {
            io::write_decomposition(report, dates, format, &mut *stdout).map_err(data)?;
            writeln!(stderr, "{summary}").map_err(data)?;
        }
    }
    Ok(())
}

fn mean_and_variances(v: &[f64]) -> (f64, f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
    let sample = if v.len() > 1 { ss / (n - 1.0) } else { 0.0 };
    (mean, ss / n, sample)
}

fn cmd_si(a: SiArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    check_lambda(a.input.lambda)?;
    check_max_iter(a.max_iter)?;
    let series = load(&a.input)?;
    let y = &series.values;
    if y.len() < 3 {
        return Err(data(format!(
            "need at least 3 observations, got {}",
            y.len()
        )));
    }
    let cfg = FilterConfig::new(a.input.lambda, a.max_iter).map_err(data)?;
    let cache = TraceCache::build(y.len(), cfg.smoothing).map_err(data)?;
    let result = sohp_with_cache(y, &cfg, &cache).map_err(data)?;

    let mut w = |s: String| writeln!(stdout, "{s}").map_err(data);
    w(format!("l={} lambda={}", y.len(), cfg.smoothing))?;
    if result.degenerate {
        w("degenerate: first-stage cycle has zero l1 norm; stopping at n=1".into())?;
    } else {
        w("n\tSI".into())?;
        for (i, si) in result.si_values.iter().enumerate() {
            let mark = if i + 1 == result.chosen_n { "\t*" } else { "" };
            w(format!("{}\t{si}{mark}", i + 1))?;
        }
    }
    let (mean, pop, sample) = mean_and_variances(&result.final_cycle);
    let si = result
        .chosen_si()
        .map(|v| format!("{v:.4}"))
        .unwrap_or_else(|| "undefined".into());
    w(format!(
        "argmin n={} SI={si} cycle_mean={mean:.3e} cycle_variance={pop:.3e} cycle_sample_variance={sample:.3e}",
        result.chosen_n
    ))?;
    Ok(())
}

fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let seed = match std::env::var(SEED_ENV) {
        Ok(raw) => raw.trim().parse::<u64>().map_err(|_| {
            usage(
                ErrorKind::InvalidValue,
                format!("{SEED_ENV} must be a decimal integer, got {raw:?}"),
            )
        })?,
        Err(_) => DEFAULT_SEED,
    };
    let cfg = BenchConfig {
        lengths: a.lengths,
        repeats: a.repeats,
        seed,
        ..BenchConfig::default()
    };
    cfg.validate()
        .map_err(|e| usage(ErrorKind::ValueValidation, e))?;
    let report = bench::run(&cfg).map_err(data)?;

    match &a.out {
        None => report.write_json(&mut *stdout).map_err(data)?,
        Some(path) => {
            let mut file = BufWriter::new(
                File::create(path).map_err(|e| data(format!("{}: {e}", path.display())))?,
            );
            match a.format {
                Format::Json => report.write_json(&mut file).map_err(data)?,
                Format::Csv => report.write_csv(&mut file).map_err(data)?,
            }
            file.flush().map_err(data)?;
            writeln!(stdout, "length\tdirect_s\tincremental_s").map_err(data)?;
            for i in 0..report.lengths.len() {
                writeln!(
                    stdout,
                    "{}\t{:.3e}\t{:.3e}",
                    report.lengths[i], report.direct_seconds[i], report.incremental_seconds[i]
                )
                .map_err(data)?;
            }
            let fmt = |s: Option<f64>| s.map(|v| format!("{v:.2}")).unwrap_or_else(|| "n/a".into());
            writeln!(
                stdout,
                "slope direct={} incremental={}",
                fmt(report.direct_slope),
                fmt(report.incremental_slope)
            )
            .map_err(data)?;
        }
    }
    Ok(())
}
