mod reference;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qamean::corpus::CorpusSelector;
use qamean::verify::{run_all, SuiteResult, VerifyOptions};
use qamean::{estimate_rho, from_spec, full_report, qa_mean, Interval, OptimizerConfig, QamError, WeightedSample};

use render::{
    csv, fmt17, fmt_short, report_csv, report_json, report_table, table, to_json, IntervalJson, RhoJson, F17,
};

/// Quasi-arithmetic means and the distance between them.
///
/// Generators are given as `exp:s`, `pow:s`, `id`, `log` or `expr:<expression>`.
/// Intervals are `lo,hi` (open) or bracketed such as `[1,2]` or `(0,1]`.
/// Set QAM_THREADS to cap worker threads (0 = one per core).
#[derive(Parser)]
#[command(name = "qam", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum Corpus {
    Default,
    Exp,
    Power,
    All,
}

impl From<Corpus> for CorpusSelector {
    fn from(c: Corpus) -> Self {
        match c {
            Corpus::Default => CorpusSelector::Default,
            Corpus::Exp => CorpusSelector::Exp,
            Corpus::Power => CorpusSelector::Power,
            Corpus::All => CorpusSelector::All,
        }
    }
}

#[derive(Args)]
struct OptimizerArgs {
    /// Grid points per spatial axis.
    #[arg(long, default_value_t = 64)]
    grid_n: usize,
    /// Grid points on the weight axis.
    #[arg(long, default_value_t = 64)]
    grid_m: usize,
    /// Refinement tolerance in x (default 1e-9 times the interval length).
    #[arg(long)]
    tol: Option<f64>,
}

impl OptimizerArgs {
    fn config(&self) -> Result<OptimizerConfig, CliError> {
        if self.grid_n < 2 || self.grid_m < 2 {
            return Err(CliError::Input("--grid-n and --grid-m must be at least 2".into()));
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return Err(CliError::Input(format!("--tol must be positive, got {t}")));
            }
        }
        Ok(OptimizerConfig { grid_n: self.grid_n, grid_m: self.grid_m, tol: self.tol, ..Default::default() })
    }
}

#[derive(Args)]
struct PairArgs {
    /// First generator.
    #[arg(long)]
    f: String,
    /// Second generator.
    #[arg(long)]
    g: String,
    /// Common interval U.
    #[arg(long, allow_hyphen_values = true)]
    interval: Interval,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a weighted quasi-arithmetic mean.
    Mean {
        /// Generator.
        #[arg(long)]
        gen: String,
        /// Entries, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<f64>,
        /// Weights, comma separated; uniform if omitted.
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Generator domain (default: the closed hull of the values).
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<Interval>,
    },
    /// Measure the distance between two means on an interval.
    Rho {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Every bound together with the measured distance; exits 1 if the
    /// bounds do not bracket the measurement.
    Bounds {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Reproduce the reference comparison for exp:15 against exp:20 on (0,1).
    Table {
        #[command(flatten)]
        opt: OptimizerArgs,
    },
    /// Run the property suites over the built-in corpus.
    Verify {
        #[arg(long, value_enum, default_value_t = Corpus::Default)]
        corpus: Corpus,
        /// Random trials per randomized suite.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        opt: OptimizerArgs,
    },
}

enum CliError {
    /// Bad arguments or inputs; exit code 2.
    Input(String),
    /// A checked property failed; exit code 1. Output has been printed.
    Property,
}

impl From<QamError> for CliError {
    fn from(e: QamError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("QAM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("QAM_THREADS must be a non-negative integer, got '{raw}'")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot configure {n} threads: {e}")))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct MeanJson<'a> {
    generator: &'a str,
    values: Vec<F17>,
    weights: Vec<F17>,
    mean: F17,
}

fn cmd_mean(
    format: Format,
    gen: &str,
    values: Vec<f64>,
    weights: Option<Vec<f64>>,
    interval: Option<Interval>,
) -> Result<String, CliError> {
    let sample = match weights {
        Some(w) => WeightedSample::new(values, w)?,
        None => WeightedSample::uniform(values)?,
    };
    let domain = match interval {
        Some(u) => u,
        None => {
            let lo = sample.values().iter().copied().fold(f64::INFINITY, f64::min);
            let hi = sample.values().iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let hi = if hi > lo { hi } else { lo + lo.abs().max(1.0) };
            Interval::closed(lo, hi)?
        }
    };
    let g = from_spec(gen, domain)?;
    let m = qa_mean(&g, &sample)?;
    Ok(match format {
        Format::Json => to_json(&MeanJson {
            generator: g.label(),
            values: sample.values().iter().map(|&v| F17(v)).collect(),
            weights: sample.weights().iter().map(|&v| F17(v)).collect(),
            mean: F17(m),
        }),
        Format::Csv => csv(&["name", "value", "applicable"], &[vec!["mean".into(), fmt17(m), "true".into()]]),
        Format::Table => format!("{}\n", fmt17(m)),
    })
}

fn pair(p: &PairArgs) -> Result<(qamean::Generator, qamean::Generator), CliError> {
    Ok((from_spec(&p.f, p.interval)?, from_spec(&p.g, p.interval)?))
}

#[derive(Serialize)]
struct RhoOutput<'a> {
    pair: [&'a str; 2],
    interval: IntervalJson,
    rho: RhoJson,
}

fn cmd_rho(format: Format, p: &PairArgs, cfg: &OptimizerConfig) -> Result<String, CliError> {
    let (f, g) = pair(p)?;
    let r = estimate_rho(&f, &g, &p.interval, cfg)?;
    Ok(match format {
        Format::Json => {
            to_json(&RhoOutput { pair: [f.label(), g.label()], interval: (&p.interval).into(), rho: (&r).into() })
        }
        Format::Csv => csv(&["name", "value", "applicable"], &[vec!["rho".into(), fmt17(r.value), "true".into()]]),
        Format::Table => format!(
            "rho = {}\n  at x = {}, z = {}, theta = {}\n  refinement gap {}, {} evaluations{}\n",
            fmt17(r.value),
            fmt17(r.arg.x),
            fmt17(r.arg.z),
            fmt17(r.arg.theta),
            fmt_short(r.refinement_gap),
            r.evaluations,
            if r.on_boundary { ", attained on an open endpoint (supremum, not maximum)" } else { "" }
        ),
    })
}

fn cmd_bounds(format: Format, p: &PairArgs, cfg: &OptimizerConfig) -> Result<(String, bool), CliError> {
    let (f, g) = pair(p)?;
    let r = full_report(&f, &g, &p.interval, cfg)?;
    let out = match format {
        Format::Json => report_json(&r),
        Format::Csv => report_csv(&r),
        Format::Table => report_table(&r),
    };
    Ok((out, r.sandwich.holds))
}

#[derive(Serialize)]
struct RowJson<'a> {
    name: &'a str,
    value: F17,
    reference: &'a str,
    lo: F17,
    hi: F17,
    pass: bool,
}

#[derive(Serialize)]
struct TableJson<'a> {
    rows: Vec<RowJson<'a>>,
    pass: bool,
}

fn cmd_table(format: Format, cfg: &OptimizerConfig) -> Result<(String, bool), CliError> {
    let report = reference::reference_report(cfg)?;
    let rows = reference::rows(&report);
    let pass = rows.iter().all(|r| r.pass());
    let out = match format {
        Format::Json => to_json(&TableJson {
            rows: rows
                .iter()
                .map(|r| RowJson {
                    name: r.name,
                    value: F17(r.value),
                    reference: r.reference,
                    lo: F17(r.band.0),
                    hi: F17(r.band.1),
                    pass: r.pass(),
                })
                .collect(),
            pass,
        }),
        Format::Csv => csv(
            &["name", "value", "reference", "pass"],
            &rows
                .iter()
                .map(|r| vec![r.name.into(), fmt17(r.value), r.reference.into(), r.pass().to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.name.into(),
                        fmt_short(r.value),
                        r.reference.into(),
                        format!("[{}, {}]", fmt_short(r.band.0), fmt_short(r.band.1)),
                        if r.pass() { "ok" } else { "OUT OF RANGE" }.into(),
                    ]
                })
                .collect();
            format!(
                "exp:15 vs exp:20 on {}\n\n{}",
                report.interval,
                table(&["quantity", "value", "reference", "accepted", "status"], &body)
            )
        }
    };
    Ok((out, pass))
}

#[derive(Serialize)]
struct SuiteJson<'a> {
    name: &'a str,
    trials: usize,
    failures: usize,
    worst: F17,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    example: Option<&'a str>,
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    suites: Vec<SuiteJson<'a>>,
    passed: bool,
}

fn cmd_verify(
    format: Format,
    corpus: Corpus,
    trials: usize,
    cfg: &OptimizerConfig,
) -> Result<(String, bool), CliError> {
    let opts = VerifyOptions { corpus: corpus.into(), trials, optimizer: *cfg, ..Default::default() };
    let suites: Vec<SuiteResult> = run_all(&opts)?;
    let pass = suites.iter().all(SuiteResult::passed);
    let out = match format {
        Format::Json => to_json(&VerifyJson {
            suites: suites
                .iter()
                .map(|s| SuiteJson {
                    name: s.name,
                    trials: s.trials,
                    failures: s.failures,
                    worst: F17(s.worst),
                    passed: s.passed(),
                    example: s.example.as_deref(),
                })
                .collect(),
            passed: pass,
        }),
        Format::Csv => csv(
            &["name", "trials", "failures", "passed"],
            &suites
                .iter()
                .map(|s| vec![s.name.into(), s.trials.to_string(), s.failures.to_string(), s.passed().to_string()])
                .collect::<Vec<_>>(),
        ),
        Format::Table => {
            let rows: Vec<Vec<String>> = suites
                .iter()
                .map(|s| {
                    vec![
                        s.name.into(),
                        s.trials.to_string(),
                        s.failures.to_string(),
                        if s.passed() {
                            "pass".into()
                        } else {
                            format!("FAIL: {}", s.example.as_deref().unwrap_or(""))
                        },
                    ]
                })
                .collect();
            table(&["suite", "trials", "failures", "status"], &rows)
        }
    };
    Ok((out, pass))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let format = cli.format;
    let (out, ok) = match cli.command {
        Command::Mean { gen, values, weights, interval } => (cmd_mean(format, &gen, values, weights, interval)?, true),
        Command::Rho { pair, opt } => (cmd_rho(format, &pair, &opt.config()?)?, true),
        Command::Bounds { pair, opt } => cmd_bounds(format, &pair, &opt.config()?)?,
        Command::Table { opt } => cmd_table(format, &opt.config()?)?,
        Command::Verify { corpus, trials, opt } => cmd_verify(format, corpus, trials, &opt.config()?)?,
    };
    print!("{out}");
    if !out.ends_with('\n') {
        println!();
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Property)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Property) => ExitCode::from(1),
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
