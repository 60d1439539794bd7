//! Command-line front end for [`crate::scenario`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::catalog::ModelKind;
use crate::scenario::{run_scenario, write_report, OutputFormat, ScenarioConfig, ScenarioError, ScenarioName};

#[derive(Debug, Parser)]
#[command(name = "framekin", version, about = "Reference-frame kinematics on Lorentzian spacetimes")]
struct Cli {
    /// JSON file with settings; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Kinematic decomposition of a frame at a point.
    Decompose(Params),
    /// Synchronizability class of a frame on a sample grid.
    Classify(Params),
    /// Free fall and twist test on a sample grid.
    PirfCheck(Params),
    /// Integrate a geodesic and emit its trajectory.
    Geodesic(Params),
    /// Launch two free particles in the chart adapted to Z.
    Experiment(Params),
    /// Build a normal chart and check it at its origin.
    NormalChart(Params),
    /// Expansions of two crossing tube frames.
    Plli(Params),
    /// Compare the kinematics of two frames.
    Equivalence(Params),
}

#[derive(Debug, Args, Default)]
struct Params {
    #[arg(long, value_parser = parse_model)]
    model: Option<ModelKind>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    u: Option<f64>,
    #[arg(long)]
    v: Option<f64>,
    #[arg(long)]
    frame: Option<String>,
    #[arg(long)]
    frame_b: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long)]
    radius_cap: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    boost: Option<f64>,
    /// `t,x,y,z`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    point: Option<Vec<f64>>,
    #[arg(long)]
    v_probe: Option<f64>,
    /// `dx/dt,dy/dt,dz/dt`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    speeds: Option<Vec<f64>>,
    #[arg(long, allow_negative_numbers = true)]
    smin: Option<f64>,
    #[arg(long)]
    smax: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long)]
    adaptive: bool,
    #[arg(long)]
    half_width: Option<f64>,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    radius: Option<f64>,
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "json" => Ok(OutputFormat::Json),
        "csv" => Ok(OutputFormat::Csv),
        other => Err(format!("unknown format `{other}` (json, csv)")),
    }
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    match s {
        "minkowski" => Ok(ModelKind::Minkowski),
        "friedmann" => Ok(ModelKind::Friedmann),
        other => Err(format!("unknown model `{other}` (minkowski, friedmann)")),
    }
}

fn fixed<const N: usize>(flag: &str, values: Option<Vec<f64>>) -> Result<Option<[f64; N]>, ScenarioError> {
    values
        .map(|v| {
            <[f64; N]>::try_from(v.as_slice())
                .map_err(|_| ScenarioError::Validation(format!("--{flag} takes {N} comma-separated numbers")))
        })
        .transpose()
}

fn to_config(name: ScenarioName, p: Params) -> Result<ScenarioConfig, ScenarioError> {
    Ok(ScenarioConfig {
        scenario: Some(name),
        model: p.model,
        a: p.a,
        u: p.u,
        v: p.v,
        frame: p.frame,
        frame_b: p.frame_b,
        omega: p.omega,
        radius_cap: p.radius_cap,
        boost: p.boost,
        point: fixed("point", p.point)?,
        v_probe: p.v_probe,
        speeds: fixed("speeds", p.speeds)?,
        smin: p.smin,
        smax: p.smax,
        step: p.step,
        adaptive: p.adaptive.then_some(true),
        half_width: p.half_width,
        grid: p.grid,
        strict: p.strict.then_some(true),
        radius: p.radius,
        ..Default::default()
    })
}

fn execute(cli: Cli) -> Result<(), ScenarioError> {
    let (name, params) = match cli.command {
        Command::Decompose(p) => (ScenarioName::Decompose, p),
        Command::Classify(p) => (ScenarioName::Classify, p),
        Command::PirfCheck(p) => (ScenarioName::PirfCheck, p),
        Command::Geodesic(p) => (ScenarioName::Geodesic, p),
        Command::Experiment(p) => (ScenarioName::Experiment, p),
        Command::NormalChart(p) => (ScenarioName::NormalChart, p),
        Command::Plli(p) => (ScenarioName::Plli, p),
        Command::Equivalence(p) => (ScenarioName::Equivalence, p),
    };
    let base = match &cli.config {
        Some(path) => ScenarioConfig::from_file(path)?,
        None => ScenarioConfig::default(),
    };
    let mut flags = to_config(name, params)?;
    flags.out = cli.out;
    flags.format = cli.format;
    flags.tol = cli.tol;
    let config = base.overlay(flags);
    let report = run_scenario(&config)?;
    write_report(&report)
}

/// Parse `args`, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter("FRAMEKIN_LOG")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            if e.kind() == clap::error::ErrorKind::InvalidSubcommand {
                let names: Vec<_> = ScenarioName::ALL.iter().map(|s| s.as_str()).collect();
                eprintln!("scenarios: {}", names.join(", "));
            }
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("framekin: {e}");
            e.exit_code()
        }
    }
}
