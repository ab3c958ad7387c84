//! Command-line front end for the experiment drivers.
//!
//! Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 usage or
//! configuration error, 3 blow-up.

use clap::{Args, Parser, Subcommand, ValueEnum};
use gch2::ansatz::{
    initial_data, interpolation_bound, leading_error_expansion, residual, ApproxConfig,
};
use gch2::experiments::{
    self, difference_growth, fit_slope, nonuniform_dependence, residual_decay_scan,
    ExperimentError, ExperimentPlan,
};
use gch2::integrator::{integrate, size_check, suggested_dt, IntegratorConfig};
use gch2::model::SystemParams;
use gch2::spectral::{PeriodicGrid, SobolevIndex, SpectralField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gch2",
    version,
    about = "Pseudospectral experiments for a generalized two-component Camassa-Holm system"
)]
struct Cli {
    /// Flat JSON config file mirroring the flag names; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Cap on concurrent per-n runs (falls back to GCH2_JOBS).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Measure residual norms at t = 0 over a frequency list and fit slopes.
    ResidualScan(PlanArgs),
    /// Track the approximate-vs-actual difference norms over time.
    DiffGrowth {
        #[command(flatten)]
        plan: PlanArgs,
        /// Carrier sign of the family member (default 1).
        #[arg(long, allow_hyphen_values = true)]
        omega: Option<i32>,
    },
    /// Shrinking data differences vs separated solutions.
    Nud(PlanArgs),
    /// Integrate one run from the family's initial data and report norms.
    Solve(SolveArgs),
    /// Verify the Sobolev interpolation inequality on random trig polynomials.
    CheckInterp(InterpArgs),
    /// Run the standing verification grid and write all reports.
    MakeAcceptance {
        /// Directory for the CSV tables and JSON summaries.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Default)]
struct PlanArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    /// Data regularity s (> 5/2).
    #[arg(long)]
    s: Option<f64>,
    /// Measurement regularity sigma (default 1.75).
    #[arg(long)]
    sigma: Option<f64>,
    /// Comma-separated frequency list, e.g. 64,128,256,512.
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u32>>,
    /// Time horizon (default 0.95).
    #[arg(long = "T")]
    t_end: Option<f64>,
    /// Step-rule constant (default 0.5).
    #[arg(long)]
    cfl: Option<f64>,
    /// Output path; .csv writes the table plus a .json summary sibling,
    /// anything else writes the JSON summary only.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Stdout payload when --out is absent (default json).
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args, Clone, Default)]
struct SolveArgs {
    #[arg(long)]
    p: Option<u32>,
    #[arg(long)]
    q: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Single frequency.
    #[arg(long)]
    n: Option<u32>,
    /// Carrier sign (default 1).
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<i32>,
    #[arg(long = "T")]
    t_end: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Explicit step cap overriding the step rule.
    #[arg(long)]
    dt: Option<f64>,
    /// Sup-norm guard; larger collocation values abort the run (default 1e6).
    #[arg(long)]
    blowup: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(Args, Clone, Default)]
struct InterpArgs {
    #[arg(long)]
    s1: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    s2: Option<f64>,
    /// Number of random fields (default 1000).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum OutputFormat {
    Csv,
    Json,
}

// ---------------------------------------------------------------------------
// Error handling and exit codes
// ---------------------------------------------------------------------------

#[derive(Debug)]
enum CliError {
    Config(String),
    Experiment(ExperimentError),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Experiment(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Experiment(ExperimentError::BlowUp { .. }) => 3,
            _ => 2,
        }
    }
}

impl From<ExperimentError> for CliError {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Io(io) => CliError::Io(io),
            other => CliError::Experiment(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(format!("serialization failed: {e}"))
    }
}

impl From<gch2::spectral::SpectralError> for CliError {
    fn from(e: gch2::spectral::SpectralError) -> Self {
        CliError::Config(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

// ---------------------------------------------------------------------------
// Config file merging
// ---------------------------------------------------------------------------

/// Flat JSON object mirroring the flag names; flags win over file values.
struct ConfigFile(serde_json::Map<String, Value>);

impl ConfigFile {
    fn empty() -> Self {
        Self(serde_json::Map::new())
    }

    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::empty());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        match serde_json::from_str::<Value>(&text) {
            Ok(Value::Object(map)) => Ok(Self(map)),
            Ok(_) => Err(CliError::Config(format!(
                "config {} must hold a flat JSON object",
                path.display()
            ))),
            Err(e) => Err(CliError::Config(format!(
                "config {} is not valid JSON: {e}",
                path.display()
            ))),
        }
    }

    fn f64(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_f64().map(Some).ok_or_else(|| bad_key(key, v)),
        }
    }

    fn u32(&self, key: &str) -> Result<Option<u32>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .map(Some)
                .ok_or_else(|| bad_key(key, v)),
        }
    }

    fn i32(&self, key: &str) -> Result<Option<i32>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v
                .as_i64()
                .and_then(|x| i32::try_from(x).ok())
                .map(Some)
                .ok_or_else(|| bad_key(key, v)),
        }
    }

    fn u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| bad_key(key, v)),
        }
    }

    fn usize(&self, key: &str) -> Result<Option<usize>, CliError> {
        Ok(self.u64(key)?.map(|x| x as usize))
    }

    fn path(&self, key: &str) -> Result<Option<PathBuf>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(PathBuf::from(s))),
            Some(v) => Err(bad_key(key, v)),
        }
    }

    /// Frequency lists may be a JSON array or a comma-separated string.
    fn n_list(&self, key: &str) -> Result<Option<Vec<u32>>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| bad_key(key, v))
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(Value::String(s)) => s
                .split(',')
                .map(|part| {
                    part.trim().parse::<u32>().map_err(|_| {
                        CliError::Config(format!("config key {key}: bad entry {part}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
            Some(v) => Err(bad_key(key, v)),
        }
    }

    fn format(&self, key: &str) -> Result<Option<OutputFormat>, CliError> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) if s == "csv" => Ok(Some(OutputFormat::Csv)),
            Some(Value::String(s)) if s == "json" => Ok(Some(OutputFormat::Json)),
            Some(v) => Err(bad_key(key, v)),
        }
    }
}

fn bad_key(key: &str, value: &Value) -> CliError {
    CliError::Config(format!("config key {key} has unusable value {value}"))
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| {
        CliError::Config(format!(
            "missing required flag --{flag} (or config key \"{flag}\")"
        ))
    })
}

/// Effective plan assembled from flags, config file and defaults.
struct EffectivePlan {
    plan: ExperimentPlan,
    out: Option<PathBuf>,
    format: OutputFormat,
}

impl EffectivePlan {
    fn assemble(args: &PlanArgs, file: &ConfigFile) -> Result<Self, CliError> {
        let p = require(args.p.or(file.u32("p")?), "p")?;
        let q = require(args.q.or(file.u32("q")?), "q")?;
        let a = require(args.a.or(file.f64("a")?), "a")?;
        let b = require(args.b.or(file.f64("b")?), "b")?;
        let s = require(args.s.or(file.f64("s")?), "s")?;
        let sigma = args.sigma.or(file.f64("sigma")?).unwrap_or(1.75);
        let n_list = require(args.n.clone().or(file.n_list("n")?), "n")?;
        let t_end = args.t_end.or(file.f64("T")?).unwrap_or(0.95);
        let cfl = args.cfl.or(file.f64("cfl")?).unwrap_or(0.5);

        let params = SystemParams::new(p, q, a, b).map_err(|e| CliError::Config(e.to_string()))?;
        let plan = ExperimentPlan::new(params, s, sigma, n_list, t_end, cfl)
            .map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            plan,
            out: args.out.clone().or(file.path("out")?),
            format: args
                .format
                .or(file.format("format")?)
                .unwrap_or(OutputFormat::Json),
        })
    }
}

// ---------------------------------------------------------------------------
// Output plumbing
// ---------------------------------------------------------------------------

/// Wraps a report with the effective configuration for the JSON summary.
fn summary_json(command: &str, config: Value, report: &impl Serialize) -> Value {
    json!({
        "tool": "gch2",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "report": report,
    })
}

/// Write CSV and/or JSON per the --out convention; dump to stdout otherwise.
fn emit(
    out: Option<&Path>,
    format: OutputFormat,
    summary: &Value,
    write_csv: impl Fn(&mut dyn Write) -> std::io::Result<()>,
) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let is_csv = path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
            if is_csv {
                let mut file = fs::File::create(path)?;
                write_csv(&mut file)?;
                let json_path = path.with_extension("json");
                fs::write(
                    &json_path,
                    serde_json::to_string_pretty(summary)?.as_bytes(),
                )?;
                eprintln!("wrote {} and {}", path.display(), json_path.display());
            } else {
                fs::write(path, serde_json::to_string_pretty(summary)?.as_bytes())?;
                eprintln!("wrote {}", path.display());
            }
        }
        None => match format {
            OutputFormat::Csv => {
                let mut stdout = std::io::stdout().lock();
                write_csv(&mut stdout)?;
            }
            OutputFormat::Json => {
                println!("{}", serde_json::to_string_pretty(summary)?);
            }
        },
    }
    Ok(())
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn init_pool(jobs: Option<usize>, file: &ConfigFile) -> Result<(), CliError> {
    let jobs = match jobs.or(file.usize("jobs")?) {
        Some(j) => Some(j),
        None => std::env::var("GCH2_JOBS")
            .ok()
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("GCH2_JOBS={v} is not a number")))
            })
            .transpose()?,
    };
    if let Some(jobs) = jobs {
        if jobs == 0 {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot size worker pool: {e}")))?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<bool, CliError> {
    let file = ConfigFile::load(cli.config.as_deref())?;
    init_pool(cli.jobs, &file)?;

    match &cli.command {
        Command::ResidualScan(args) => cmd_residual_scan(args, &file),
        Command::DiffGrowth { plan, omega } => cmd_diff_growth(plan, *omega, &file),
        Command::Nud(args) => cmd_nud(args, &file),
        Command::Solve(args) => cmd_solve(args, &file),
        Command::CheckInterp(args) => cmd_check_interp(args, &file),
        Command::MakeAcceptance { out_dir } => cmd_make_acceptance(out_dir.as_deref(), &file),
    }
}

fn plan_config_json(plan: &ExperimentPlan) -> Value {
    json!({
        "p": plan.params.p, "q": plan.params.q,
        "a": plan.params.a, "b": plan.params.b,
        "s": plan.s, "sigma": plan.sigma,
        "n": plan.n_list, "T": plan.t_end, "cfl": plan.cfl,
    })
}

fn cmd_residual_scan(args: &PlanArgs, file: &ConfigFile) -> Result<bool, CliError> {
    let eff = EffectivePlan::assemble(args, file)?;
    let report = residual_decay_scan(&eff.plan)?;

    eprintln!(
        "residual-scan {} s={} sigma={} n={:?}",
        eff.plan.params, eff.plan.s, eff.plan.sigma, eff.plan.n_list
    );
    eprintln!(
        "  fitted r = {:+.4} (predicted {:+.4}, {})  {}",
        report.fitted_r,
        report.predicted.r,
        report.predicted.r_branch,
        pass_str(report.r_within_tolerance)
    );
    eprintln!(
        "  fitted j = {:+.4} (predicted {:+.4}, {})  {}",
        report.fitted_j,
        report.predicted.j,
        report.predicted.j_branch,
        pass_str(report.j_within_tolerance)
    );

    let summary = summary_json("residual-scan", plan_config_json(&eff.plan), &report);
    emit(eff.out.as_deref(), eff.format, &summary, |w| {
        report.write_csv(w)
    })?;
    Ok(report.passed)
}

fn cmd_diff_growth(
    args: &PlanArgs,
    omega: Option<i32>,
    file: &ConfigFile,
) -> Result<bool, CliError> {
    let eff = EffectivePlan::assemble(args, file)?;
    let omega = omega.or(file.i32("omega")?).unwrap_or(1);
    if !(-1..=1).contains(&omega) {
        return Err(CliError::Config(format!(
            "omega must be -1, 0 or 1 (got {omega})"
        )));
    }
    let report = difference_growth(&eff.plan, omega)?;

    eprintln!(
        "diff-growth {} s={} sigma={} omega={omega} beta={:+.3} (window ok: {})",
        eff.plan.params, eff.plan.s, eff.plan.sigma, report.beta, report.beta_window_ok
    );
    for run in &report.runs {
        eprintln!(
            "  n={:4}: sup |(w,y)|_sigma = {:.6e}, sup/n^beta = {:.4e}, H^k guard = {:.4e}, size {}",
            run.n,
            run.sup_diff_sigma,
            run.sup_ratio,
            run.k_guard_ratio,
            pass_str(run.size.passed)
        );
    }
    eprintln!(
        "  sup/n^beta non-increasing: {}",
        pass_str(report.ratios_non_increasing)
    );

    let mut config = plan_config_json(&eff.plan);
    config["omega"] = json!(omega);
    let summary = summary_json("diff-growth", config, &report);
    emit(eff.out.as_deref(), eff.format, &summary, |w| {
        report.write_csv(w)
    })?;
    let sizes_ok = report.runs.iter().all(|r| r.size.passed);
    Ok(report.ratios_non_increasing && sizes_ok)
}

fn cmd_nud(args: &PlanArgs, file: &ConfigFile) -> Result<bool, CliError> {
    let eff = EffectivePlan::assemble(args, file)?;
    let report = nonuniform_dependence(&eff.plan)?;

    eprintln!(
        "nud {} s={} branch={:?} omegas={:?}",
        eff.plan.params, eff.plan.s, report.branch, report.omegas
    );
    eprintln!(
        "  data-difference slope = {:+.4} (expected {:+.4})  {}",
        report.fitted_data_slope,
        report.expected_data_slope,
        pass_str(report.verdict.data_slope_ok)
    );
    for row in report
        .samples
        .iter()
        .filter(|r| (r.t - report.verdict_time).abs() < 1e-9)
    {
        eprintln!(
            "  n={:4}: solution diff at t={} is {:.6} (threshold {:.6}, approx diff {:.6})",
            row.n, row.t, row.solution_diff, report.lower_threshold, row.approx_diff
        );
    }
    eprintln!(
        "  lower bound {}  stability {}",
        pass_str(report.verdict.lower_bound_ok),
        pass_str(report.verdict.stability_ok)
    );

    let summary = summary_json("nud", plan_config_json(&eff.plan), &report);
    emit(eff.out.as_deref(), eff.format, &summary, |w| {
        report.write_csv(w)
    })?;
    Ok(report.verdict.passed)
}

#[derive(Serialize)]
struct SolveReport {
    params: SystemParams,
    omega: i32,
    n: u32,
    s: f64,
    t_end: f64,
    grid_size: usize,
    dt: f64,
    times: Vec<f64>,
    norm_u: Vec<f64>,
    norm_v: Vec<f64>,
    pair: Vec<f64>,
    size: gch2::integrator::SizeCheck,
}

fn cmd_solve(args: &SolveArgs, file: &ConfigFile) -> Result<bool, CliError> {
    let p = require(args.p.or(file.u32("p")?), "p")?;
    let q = require(args.q.or(file.u32("q")?), "q")?;
    let a = require(args.a.or(file.f64("a")?), "a")?;
    let b = require(args.b.or(file.f64("b")?), "b")?;
    let s = require(args.s.or(file.f64("s")?), "s")?;
    let n = require(args.n.or(file.u32("n")?), "n")?;
    let omega = args.omega.or(file.i32("omega")?).unwrap_or(1);
    let t_end = args.t_end.or(file.f64("T")?).unwrap_or(0.95);
    let cfl = args.cfl.or(file.f64("cfl")?).unwrap_or(0.5);
    let dt_override = args.dt.or(file.f64("dt")?);
    let blowup = args.blowup.or(file.f64("blowup")?).unwrap_or(1e6);
    let out = args.out.clone().or(file.path("out")?);
    let format = args
        .format
        .or(file.format("format")?)
        .unwrap_or(OutputFormat::Json);

    if !(blowup > 0.0) {
        return Err(CliError::Config(format!(
            "blowup threshold must be positive (got {blowup})"
        )));
    }
    let params = SystemParams::new(p, q, a, b).map_err(|e| CliError::Config(e.to_string()))?;
    let plan = ExperimentPlan::new(params, s, 1.75, vec![n], t_end, cfl)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = ApproxConfig::new(omega, n, s).map_err(|e| CliError::Config(e.to_string()))?;
    let grid = plan
        .grid_for(n)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let data = initial_data(&cfg, &params, &grid).map_err(|e| CliError::Config(e.to_string()))?;

    let dt = dt_override.unwrap_or_else(|| suggested_dt(n, &data.u, &data.v, &params, cfl));
    if !(dt > 0.0) {
        return Err(CliError::Config(format!("dt must be positive (got {dt})")));
    }
    let steps = (t_end / dt).ceil().max(1.0) as usize;
    let icfg = IntegratorConfig::new(dt, t_end)
        .with_record_every(steps.div_ceil(128))
        .with_blowup_threshold(blowup);
    let traj = integrate(&data.u, &data.v, &params, &icfg)
        .map_err(|source| CliError::Experiment(ExperimentError::BlowUp { n, omega, source }))?;

    let s_idx = SobolevIndex(s);
    let mut report = SolveReport {
        params,
        omega,
        n,
        s,
        t_end,
        grid_size: grid.len(),
        dt: t_end / steps as f64,
        times: Vec::new(),
        norm_u: Vec::new(),
        norm_v: Vec::new(),
        pair: Vec::new(),
        size: size_check(&traj, s_idx),
    };
    for (t, state) in traj.iter() {
        let nu = state.u.sobolev_norm(s_idx);
        let nv = state.v.sobolev_norm(s_idx);
        report.times.push(t);
        report.norm_u.push(nu);
        report.norm_v.push(nv);
        report.pair.push(nu + nv);
    }

    eprintln!(
        "solve {} omega={omega} n={n} s={s}: {steps} steps on N={}, size estimate {}",
        params,
        grid.len(),
        pass_str(report.size.passed)
    );

    let config = json!({
        "p": p, "q": q, "a": a, "b": b, "s": s, "n": n,
        "omega": omega, "T": t_end, "cfl": cfl, "dt": dt_override,
    });
    let summary = summary_json("solve", config, &report);
    emit(out.as_deref(), format, &summary, |w| {
        writeln!(w, "t,norm_u_s,norm_v_s,pair_s")?;
        for i in 0..report.times.len() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                report.times[i], report.norm_u[i], report.norm_v[i], report.pair[i]
            )?;
        }
        Ok(())
    })?;
    Ok(report.size.passed)
}

#[derive(Serialize)]
struct InterpReport {
    s1: f64,
    s: f64,
    s2: f64,
    count: usize,
    seed: u64,
    grid_size: usize,
    max_mode: i64,
    violations: usize,
    /// Largest observed lhs / rhs (must not exceed 1 + 1e-12).
    max_ratio: f64,
    /// Worst single-mode equality defect.
    single_mode_defect: f64,
    passed: bool,
}

fn cmd_check_interp(args: &InterpArgs, file: &ConfigFile) -> Result<bool, CliError> {
    let s1 = args.s1.or(file.f64("s1")?).unwrap_or(0.5);
    let s = args.s.or(file.f64("s")?).unwrap_or(1.75);
    let s2 = args.s2.or(file.f64("s2")?).unwrap_or(5.0);
    let count = args.count.or(file.usize("count")?).unwrap_or(1000);
    let seed = args.seed.or(file.u64("seed")?).unwrap_or(7);
    let out = args.out.clone().or(file.path("out")?);
    let format = args
        .format
        .or(file.format("format")?)
        .unwrap_or(OutputFormat::Json);

    if !(s1 < s && s < s2) {
        return Err(CliError::Config(format!(
            "need s1 < s < s2 (got {s1}, {s}, {s2})"
        )));
    }

    let grid = PeriodicGrid::new(256).expect("fixed grid");
    let max_mode = 32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut max_ratio: f64 = 0.0;
    for _ in 0..count {
        let f = SpectralField::random_trig(&grid, max_mode, &mut rng);
        let (lhs, rhs) = interpolation_bound(&f, s1, s, s2);
        if rhs == 0.0 {
            continue;
        }
        let ratio = lhs / rhs;
        max_ratio = max_ratio.max(ratio);
        if lhs > rhs * (1.0 + 1e-12) {
            violations += 1;
        }
    }

    let mut single_mode_defect: f64 = 0.0;
    for k in [1i64, 5, 17, 31] {
        let f = SpectralField::harmonic(&grid, k, 0.3).expect("mode fits");
        let (lhs, rhs) = interpolation_bound(&f, s1, s, s2);
        single_mode_defect = single_mode_defect.max((lhs - rhs).abs() / rhs);
    }

    let report = InterpReport {
        s1,
        s,
        s2,
        count,
        seed,
        grid_size: grid.len(),
        max_mode,
        violations,
        max_ratio,
        single_mode_defect,
        passed: violations == 0 && single_mode_defect < 1e-12,
    };

    eprintln!(
        "check-interp (s1={s1}, s={s}, s2={s2}): {count} fields, {} violations, max lhs/rhs = {:.15}, single-mode defect {:.3e}  {}",
        report.violations,
        report.max_ratio,
        report.single_mode_defect,
        pass_str(report.passed)
    );

    let config = json!({ "s1": s1, "s": s, "s2": s2, "count": count, "seed": seed });
    let summary = summary_json("check-interp", config, &report);
    emit(out.as_deref(), format, &summary, |w| {
        writeln!(w, "s1,s,s2,count,violations,max_ratio,single_mode_defect")?;
        writeln!(
            w,
            "{s1},{s},{s2},{count},{},{:.16e},{:.16e}",
            report.violations, report.max_ratio, report.single_mode_defect
        )?;
        Ok(())
    })?;
    Ok(report.passed)
}

// ---------------------------------------------------------------------------
// make-acceptance: the standing verification grid
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AcceptanceSummary {
    closed_form_norms_ok: bool,
    residual_rows: Vec<Value>,
    residual_all_within_tolerance: bool,
    leading_gap_rows: Vec<Value>,
    leading_gap_ok: bool,
    size_estimates_ok: bool,
    difference_ratios_non_increasing: bool,
    nud_odd_passed: bool,
    nud_even_passed: bool,
    interpolation_ok: bool,
}

fn cmd_make_acceptance(out_dir: Option<&Path>, file: &ConfigFile) -> Result<bool, CliError> {
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => file
            .path("out_dir")?
            .unwrap_or_else(|| PathBuf::from("acceptance-out")),
    };
    fs::create_dir_all(&dir)?;

    // Closed-form Sobolev norms of cos(nx - alpha).
    let mut closed_form_ok = true;
    {
        let grid = PeriodicGrid::new(2048).expect("fixed grid");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        use rand::Rng;
        for n in (1i64..=512).step_by(31) {
            for sigma in [0.0, 0.5, 1.75, 3.0] {
                for _ in 0..2 {
                    let alpha: f64 = rng.gen_range(0.0..2.0 * PI);
                    let f = SpectralField::from_fn(&grid, |x| (n as f64 * x - alpha).cos());
                    let expected = PI.sqrt() * (1.0 + (n * n) as f64).powf(sigma / 2.0);
                    let measured = f.sobolev_norm(SobolevIndex(sigma));
                    if ((measured - expected) / expected).abs() > 1e-12 {
                        closed_form_ok = false;
                    }
                }
            }
        }
    }

    // Residual decay over the standard grid.
    let mut residual_rows = Vec::new();
    let mut residual_all_ok = true;
    for plan in experiments::standard::residual_plans() {
        let report = residual_decay_scan(&plan)?;
        let name = format!(
            "residual_p{}q{}_s{}_sigma{}",
            plan.params.p, plan.params.q, plan.s, plan.sigma
        );
        let mut csv = fs::File::create(dir.join(format!("{name}.csv")))?;
        report.write_csv(&mut csv)?;
        fs::write(
            dir.join(format!("{name}.json")),
            serde_json::to_string_pretty(&report)?,
        )?;
        eprintln!(
            "{name}: fitted r={:+.3} j={:+.3} vs predicted r={:+.3} j={:+.3}  {}",
            report.fitted_r,
            report.fitted_j,
            report.predicted.r,
            report.predicted.j,
            pass_str(report.passed)
        );
        residual_all_ok &= report.passed;
        residual_rows.push(json!({
            "params": plan.params, "s": plan.s, "sigma": plan.sigma,
            "fitted_r": report.fitted_r, "fitted_j": report.fitted_j,
            "predicted_r": report.predicted.r, "predicted_j": report.predicted.j,
            "passed": report.passed,
        }));
    }

    // Leading-term fidelity at the standard frequencies.
    let mut gap_rows = Vec::new();
    let mut gap_ok = true;
    for cfg_tuple in experiments::standard::CONFIGS {
        let params = experiments::standard::params(cfg_tuple);
        for sigma in experiments::standard::SIGMA_VALUES {
            let s = 3.0;
            let plan = ExperimentPlan::new(
                params,
                s,
                sigma,
                experiments::standard::RESIDUAL_NS.to_vec(),
                experiments::standard::T_END,
                experiments::standard::CFL,
            )?;
            let mut gaps = Vec::new();
            let mut residuals = Vec::new();
            for &n in &plan.n_list {
                let grid = plan.grid_for(n)?;
                let acfg = ApproxConfig::new(1, n, s).expect("validated");
                let full = residual(&acfg, &params, 0.0, &grid)?;
                let lead = leading_error_expansion(&acfg, &params, 0.0, &grid)?;
                let idx = SobolevIndex(sigma);
                gaps.push((n as f64, (&full.u - &lead.u).sobolev_norm(idx)));
                residuals.push((n as f64, full.u.sobolev_norm(idx)));
            }
            let final_ratio = gaps.last().unwrap().1 / residuals.last().unwrap().1;
            let exact = gaps.iter().zip(&residuals).all(|(g, r)| g.1 / r.1 < 1e-8);
            let row_ok = final_ratio < 0.05 && (exact || fit_slope(&gaps) < fit_slope(&residuals));
            gap_ok &= row_ok;
            gap_rows.push(json!({
                "params": params, "s": s, "sigma": sigma,
                "gap_ratio_at_max_n": final_ratio,
                "gap_is_roundoff": exact,
                "passed": row_ok,
            }));
        }
    }

    // Difference growth, separation experiments, interpolation.
    let diff = difference_growth(&experiments::standard::difference_plan(), 1)?;
    fs::write(
        dir.join("diff_growth.json"),
        serde_json::to_string_pretty(&diff)?,
    )?;
    let mut csv = fs::File::create(dir.join("diff_growth.csv"))?;
    diff.write_csv(&mut csv)?;

    let nud_plans = experiments::standard::nud_plans();
    let nud_odd = nonuniform_dependence(&nud_plans[0])?;
    fs::write(
        dir.join("nud_odd.json"),
        serde_json::to_string_pretty(&nud_odd)?,
    )?;
    let mut csv = fs::File::create(dir.join("nud_odd.csv"))?;
    nud_odd.write_csv(&mut csv)?;
    let nud_even = nonuniform_dependence(&nud_plans[1])?;
    fs::write(
        dir.join("nud_even.json"),
        serde_json::to_string_pretty(&nud_even)?,
    )?;
    let mut csv = fs::File::create(dir.join("nud_even.csv"))?;
    nud_even.write_csv(&mut csv)?;

    let sizes_ok = diff.runs.iter().all(|r| r.size.passed)
        && nud_odd.sizes.iter().all(|s| s.passed)
        && nud_even.sizes.iter().all(|s| s.passed);

    let interp = cmd_check_interp(
        &InterpArgs {
            out: Some(dir.join("interp.json")),
            ..Default::default()
        },
        &ConfigFile::empty(),
    )?;

    let summary = AcceptanceSummary {
        closed_form_norms_ok: closed_form_ok,
        residual_rows,
        residual_all_within_tolerance: residual_all_ok,
        leading_gap_rows: gap_rows,
        leading_gap_ok: gap_ok,
        size_estimates_ok: sizes_ok,
        difference_ratios_non_increasing: diff.ratios_non_increasing,
        nud_odd_passed: nud_odd.verdict.passed,
        nud_even_passed: nud_even.verdict.passed,
        interpolation_ok: interp,
    };
    fs::write(
        dir.join("summary.json"),
        serde_json::to_string_pretty(&summary)?,
    )?;

    let all = closed_form_ok
        && residual_all_ok
        && gap_ok
        && sizes_ok
        && diff.ratios_non_increasing
        && nud_odd.verdict.passed
        && nud_even.verdict.passed
        && interp;
    eprintln!(
        "acceptance grid written to {}: closed-forms {}, residual slopes {}, leading gaps {}, sizes {}, diff ratios {}, separation odd {}, even {}, interpolation {}",
        dir.display(),
        pass_str(closed_form_ok),
        pass_str(residual_all_ok),
        pass_str(gap_ok),
        pass_str(sizes_ok),
        pass_str(diff.ratios_non_increasing),
        pass_str(nud_odd.verdict.passed),
        pass_str(nud_even.verdict.passed),
        pass_str(interp),
    );
    Ok(all)
}
