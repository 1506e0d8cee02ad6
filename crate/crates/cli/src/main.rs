// Copyright 2026 The hanoi-walk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line driver.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime failure, 3 no peak found.

mod config;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use hanoi_walk::io;
use hanoi_walk::oracle::{run_suite, SparseEngine, SuiteConfig};
use hanoi_walk::search::{run_search_with, CostModel, PeakDetectorConfig, SearchOutcome};
use hanoi_walk::sweep::{find_optimal_epsilon, fit_cost_exponent, fit_success_decay, sweep_epsilon, sweep_size};
use hanoi_walk::{CoinSpec, Error, NetworkSize, ShiftPermutation, StepOperator};

use config::{parse_epsilon_grid, parse_exponents, ConfigFile};

const EXIT_USAGE: u8 = 1;
const EXIT_RUNTIME: u8 = 2;
const EXIT_NO_PEAK: u8 = 3;

/// Invalid arguments or configuration.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
    NoPeak,
    Threshold(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e.0)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSize(_)
            | Error::VertexOutOfRange { .. }
            | Error::EpsilonOutOfRange(_)
            | Error::MissingMark
            | Error::InvalidDetector(_)
            | Error::OracleTooLarge(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.into()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "hanoi-walk", version, about = "Quantum-walk search on the degree-3 Hanoi network")]
struct Cli {
    /// File of `key = value` defaults; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one search and write its trace and result.
    Search(SearchArgs),
    /// Sweep epsilon at fixed network size.
    SweepEps(SweepEpsArgs),
    /// Sweep network size at fixed epsilon.
    SweepN(SweepNArgs),
    /// Fit a scaling law to a sweep CSV.
    Fit(FitArgs),
    /// Compare the sparse engine with the dense reference.
    OracleCheck(OracleArgs),
    /// Write the network's edge list.
    ExportGraph(GraphArgs),
}

#[derive(Args, Debug, Clone)]
struct DetectorArgs {
    /// Moving-average window (odd).
    #[arg(long)]
    window: Option<usize>,
    /// Hump threshold as a fraction of the global maximum.
    #[arg(long)]
    prominence: Option<f64>,
    /// Initial horizon in units of ceil(sqrt(N) ln N) steps.
    #[arg(long)]
    horizon_factor: Option<f64>,
    #[arg(long, value_enum)]
    cost_model: Option<ModelArg>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModelArg {
    Repetition,
    Amplification,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    #[arg(long)]
    marked: Option<usize>,
    #[command(flatten)]
    detector: DetectorArgs,
    /// Output prefix: writes PREFIX.trace.csv and PREFIX.result.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump the full state at these steps (comma-separated) to
    /// PREFIX.state.T.csv.
    #[arg(long, value_delimiter = ',')]
    snapshot_at: Vec<usize>,
}

#[derive(Args, Debug)]
struct SweepEpsArgs {
    #[arg(long)]
    n: Option<u32>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    marked: Option<usize>,
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also locate the cost minimum and write it as a fit result.
    #[arg(long, value_enum)]
    fit: Option<EpsFit>,
    /// Where to write the fit JSON (default: OUT with extension .fit.json).
    #[arg(long)]
    fit_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum EpsFit {
    Optimal,
}

#[derive(Args, Debug)]
struct SweepNArgs {
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// `lo:hi` or a comma-separated list of exponents.
    #[arg(long)]
    n_range: Option<String>,
    #[arg(long)]
    marked: Option<usize>,
    #[command(flatten)]
    detector: DetectorArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, value_enum)]
    fit: Option<SizeFit>,
    #[arg(long)]
    fit_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum, PartialEq, Eq)]
enum SizeFit {
    Cost,
    Success,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// Sweep CSV as written by sweep-eps or sweep-n.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    model: FitModel,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FitModel {
    Cost,
    Success,
    Optimal,
}

#[derive(Args, Debug)]
struct OracleArgs {
    /// Exponents to check (comma-separated or lo:hi); at most 7.
    #[arg(long)]
    n: Option<String>,
    /// Epsilon values (comma-separated or start:stop:step).
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    marked: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    /// Maximum allowed amplitude deviation.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct GraphArgs {
    #[arg(long)]
    n: Option<u32>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Resolver<'a> {
    cfg: &'a ConfigFile,
}

impl Resolver<'_> {
    fn pick<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, UsageError> {
        Ok(match flag {
            Some(v) => v,
            None => self.cfg.get(key)?.unwrap_or(default),
        })
    }

    fn pick_str(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.or_else(|| self.cfg.raw(key).map(str::to_owned)).unwrap_or_else(|| default.to_owned())
    }

    fn detector(&self, d: &DetectorArgs) -> Result<(PeakDetectorConfig, CostModel), Failure> {
        let base = PeakDetectorConfig::default();
        let det = PeakDetectorConfig {
            window: self.pick(d.window, "window", base.window)?,
            prominence: self.pick(d.prominence, "prominence", base.prominence)?,
            horizon_factor: self.pick(d.horizon_factor, "horizon-factor", base.horizon_factor)?,
        };
        det.validate()?;
        let model = match d.cost_model {
            Some(ModelArg::Repetition) => CostModel::Repetition,
            Some(ModelArg::Amplification) => CostModel::Amplification,
            None => match self.cfg.raw("cost-model") {
                Some(s) => s.parse::<CostModel>().map_err(|e| Failure::Usage(e.to_string()))?,
                None => CostModel::default(),
            },
        };
        Ok((det, model))
    }

    fn format(&self, flag: Option<Format>) -> Result<Format, UsageError> {
        match flag {
            Some(f) => Ok(f),
            None => match self.cfg.raw("format") {
                None | Some("csv") => Ok(Format::Csv),
                Some("json") => Ok(Format::Json),
                Some(other) => Err(UsageError(format!("unknown format '{other}'"))),
            },
        }
    }

    fn out(&self, flag: Option<PathBuf>, default: &str) -> PathBuf {
        flag.or_else(|| self.cfg.raw("out").map(PathBuf::from)).unwrap_or_else(|| PathBuf::from(default))
    }
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut s = base.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json_to(path: Option<&Path>, value: &io::JsonValue) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            io::write_json(&mut w, value)?;
            w.flush()?;
        }
        None => io::write_json(std::io::stdout().lock(), value)?,
    }
    Ok(())
}

fn cmd_search(r: &Resolver, a: SearchArgs) -> Result<(), Failure> {
    let size = NetworkSize::new(r.pick(a.n, "n", 8)?)?;
    let spec = CoinSpec::marked(r.pick(a.epsilon, "epsilon", 1.0)?, r.pick(a.marked, "marked", 0)?)?;
    spec.check(size)?;
    let (det, model) = r.detector(&a.detector)?;
    let prefix = r.out(a.out, "search");

    let shift = std::sync::Arc::new(ShiftPermutation::build(size));
    if !a.snapshot_at.is_empty() {
        let op = StepOperator::for_spec(shift.clone(), &spec)?;
        let mut st = hanoi_walk::initial_state(&spec, size);
        let mut steps: Vec<usize> = a.snapshot_at.clone();
        steps.sort_unstable();
        steps.dedup();
        let mut t = 0;
        for target in steps {
            op.evolve(&mut st, target - t)?;
            t = target;
            let path = with_suffix(&prefix, &format!(".state.{target}.csv"));
            let mut w = create(&path)?;
            io::write_snapshot_csv(&mut w, &st)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
    }

    let outcome = run_search_with(shift, &spec, &det, model)?;
    let mut w = create(&with_suffix(&prefix, ".trace.csv"))?;
    io::write_trace_csv(&mut w, outcome.trace())?;
    w.flush().map_err(anyhow::Error::from)?;
    write_json_to(Some(&with_suffix(&prefix, ".result.json")), &io::search_json(&outcome))?;

    match &outcome {
        SearchOutcome::Found(res) => {
            println!(
                "search n={} epsilon={} marked={} t_f={} p_max={} cost={} model={}",
                size.exponent(),
                spec.epsilon(),
                spec.mark().unwrap_or(0),
                res.t_f,
                io::format_float(res.p_max),
                io::format_float(res.cost),
                model.as_str()
            );
            Ok(())
        }
        SearchOutcome::NoPeak { trace, .. } => {
            println!(
                "search n={} epsilon={} marked={} no peak within {} steps",
                size.exponent(),
                spec.epsilon(),
                spec.mark().unwrap_or(0),
                trace.len() - 1
            );
            Err(Failure::NoPeak)
        }
    }
}

fn write_records(path: &Path, format: Format, records: &[hanoi_walk::SweepRecord]) -> anyhow::Result<()> {
    match format {
        Format::Csv => {
            let mut w = create(path)?;
            io::write_sweep_csv(&mut w, records)?;
            w.flush()?;
        }
        Format::Json => write_json_to(Some(path), &io::sweep_json(records))?,
    }
    Ok(())
}

fn default_fit_path(out: &Path) -> PathBuf {
    out.with_extension("fit.json")
}

fn cmd_sweep_eps(r: &Resolver, a: SweepEpsArgs) -> Result<(), Failure> {
    let size = NetworkSize::new(r.pick(a.n, "n", 8)?)?;
    let grid = parse_epsilon_grid(&r.pick_str(a.grid, "grid", "0.2:2.8:0.2"))?;
    let k0 = r.pick(a.marked, "marked", 0)?;
    let (det, model) = r.detector(&a.detector)?;
    let format = r.format(a.format)?;
    let out = r.out(a.out, if format == Format::Csv { "sweep_eps.csv" } else { "sweep_eps.json" });

    let records = sweep_epsilon(size, &grid, k0, &det, model)?;
    write_records(&out, format, &records)?;
    println!("sweep-eps n={} records={} out={}", size.exponent(), records.len(), out.display());
    if a.fit.is_some() {
        let opt = find_optimal_epsilon(&records, true).map_err(|e| Failure::Runtime(e.into()))?;
        let path = a.fit_out.unwrap_or_else(|| default_fit_path(&out));
        write_json_to(Some(&path), &io::optimum_json(&opt))?;
        println!("optimal epsilon={} cost={}", opt.epsilon, io::format_float(opt.cost));
    }
    Ok(())
}

fn cmd_sweep_n(r: &Resolver, a: SweepNArgs) -> Result<(), Failure> {
    let spec = CoinSpec::marked(r.pick(a.epsilon, "epsilon", 1.7)?, r.pick(a.marked, "marked", 0)?)?;
    let exponents = parse_exponents(&r.pick_str(a.n_range, "n-range", "6:12"))?;
    for &n in &exponents {
        spec.check(NetworkSize::new(n)?)?;
    }
    let (det, model) = r.detector(&a.detector)?;
    let format = r.format(a.format)?;
    let out = r.out(a.out, if format == Format::Csv { "sweep_n.csv" } else { "sweep_n.json" });

    let records = sweep_size(&spec, &exponents, &det, model)?;
    write_records(&out, format, &records)?;
    println!("sweep-n epsilon={} records={} out={}", spec.epsilon(), records.len(), out.display());
    if let Some(kind) = a.fit {
        let fit = match kind {
            SizeFit::Cost => fit_cost_exponent(&records),
            SizeFit::Success => fit_success_decay(&records),
        }
        .map_err(|e| Failure::Runtime(e.into()))?;
        let path = a.fit_out.unwrap_or_else(|| default_fit_path(&out));
        write_json_to(Some(&path), &io::fit_json(&fit))?;
        let params: Vec<String> = fit.parameters.iter().map(|(k, v)| format!("{k}={}", io::format_float(*v))).collect();
        println!("fit {} {} r2={}", fit.model, params.join(" "), io::format_float(fit.r2));
    }
    Ok(())
}

fn cmd_fit(a: FitArgs) -> Result<(), Failure> {
    let file = File::open(&a.input).map_err(|e| Failure::Usage(format!("cannot open {}: {e}", a.input.display())))?;
    let records = io::read_sweep_csv(std::io::BufReader::new(file)).map_err(|e| Failure::Usage(e.to_string()))?;
    let value = match a.model {
        FitModel::Cost => io::fit_json(&fit_cost_exponent(&records).map_err(|e| Failure::Runtime(e.into()))?),
        FitModel::Success => io::fit_json(&fit_success_decay(&records).map_err(|e| Failure::Runtime(e.into()))?),
        FitModel::Optimal => io::optimum_json(&find_optimal_epsilon(&records, true).map_err(|e| Failure::Runtime(e.into()))?),
    };
    write_json_to(a.out.as_deref(), &value)?;
    Ok(())
}

fn cmd_oracle(r: &Resolver, a: OracleArgs) -> Result<(), Failure> {
    let base = SuiteConfig::default();
    let exponents = match a.n.or_else(|| r.cfg.raw("n").map(str::to_owned)) {
        Some(s) => parse_exponents(&s)?,
        None => base.exponents.clone(),
    };
    for &n in &exponents {
        if n > hanoi_walk::oracle::MAX_DENSE_EXPONENT {
            return Err(Error::OracleTooLarge(n).into());
        }
    }
    let epsilons = match a.epsilon.or_else(|| r.cfg.raw("epsilon").map(str::to_owned)) {
        Some(s) => parse_epsilon_grid(&s)?,
        None => base.epsilons.clone(),
    };
    let cfg = SuiteConfig {
        exponents,
        epsilons,
        marked: Some(r.pick(a.marked, "marked", 0)?),
        steps: r.pick(a.steps, "steps", base.steps)?,
        deviation_threshold: r.pick(a.threshold, "threshold", base.deviation_threshold)?,
        ..base
    };
    let checks = run_suite(&cfg, &SparseEngine)?;
    let mut failed = Vec::new();
    for c in &checks {
        println!(
            "oracle n={} epsilon={} marked={} steps={} deviation={} unitarity={} status={}",
            c.n,
            c.epsilon,
            c.marked.map_or("none".to_string(), |k| k.to_string()),
            c.steps,
            io::format_float(c.deviation),
            io::format_float(c.unitarity),
            if c.passed() { "pass" } else { "fail" }
        );
        if !c.passed() {
            failed.push(format!("(n={}, epsilon={}, t={})", c.n, c.epsilon, c.steps));
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Threshold(format!("oracle threshold breached at {}", failed.join(", "))))
    }
}

fn cmd_export(r: &Resolver, a: GraphArgs) -> Result<(), Failure> {
    let size = NetworkSize::new(r.pick(a.n, "n", 4)?)?;
    match a.out {
        Some(p) => {
            let mut w = create(&p)?;
            io::write_edges_csv(&mut w, size)?;
            w.flush().map_err(anyhow::Error::from)?;
        }
        None => io::write_edges_csv(std::io::stdout().lock(), size)?,
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let r = Resolver { cfg: &cfg };
    match cli.command {
        Command::Search(a) => cmd_search(&r, a),
        Command::SweepEps(a) => cmd_sweep_eps(&r, a),
        Command::SweepN(a) => cmd_sweep_n(&r, a),
        Command::Fit(a) => cmd_fit(a),
        Command::OracleCheck(a) => cmd_oracle(&r, a),
        Command::ExportGraph(a) => cmd_export(&r, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::Threshold(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_RUNTIME)
        }
        Err(Failure::NoPeak) => ExitCode::from(EXIT_NO_PEAK),
    }
}
