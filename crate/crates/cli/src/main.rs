//! `slitdisk`: evaluate, verify and render from the command line.
//!
//! Exit status: 0 success, 1 a check failed, 2 usage or parse error,
//! 3 a point or parameter outside the admissible domain.

mod format;
mod point;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use slitdisk::blaschke::{factorial_zeros, hoffman_bound, BlaschkeProduct};
use slitdisk::config::{parse_complex, parse_range};
use slitdisk::counterexample::{build, run_suite, Suite, VerificationReport};
use slitdisk::innerfn::SingularInner;
use slitdisk::render::{render_target, Target, Window};
use slitdisk::slitmap::SlitMap;
use slitdisk::{DiskPoint, Error, RunConfig, Strategy};

use crate::format::{fmt_point, fmt_value};
use crate::point::parse_point;

#[derive(Parser, Debug)]
#[command(name = "slitdisk", version, about = "Thin Blaschke products on the slit disk")]
struct Cli {
    /// key = value configuration file; unset keys keep their defaults
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override the random seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the output directory
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate one function at one point
    Eval(EvalArgs),
    /// Run a group of checks and write the report
    Verify(VerifyArgs),
    /// Write a domain-coloring raster
    Render(RenderArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EvalTarget {
    Blaschke,
    Singular,
    MapG,
    MapH,
    Phi,
}

#[derive(Args, Debug)]
struct EvalArgs {
    target: EvalTarget,
    /// `re,im`, `dev:re,im` for 1 - delta, or `dev@ar,ai:re,im` for anchor (1 - delta)
    #[arg(long, allow_hyphen_values = true)]
    point: String,
    /// Off-axis zero of the product (default from the config)
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long)]
    n_max: Option<usize>,
    /// Mass of the singular atom
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Location of the singular atom on the circle
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    eta: String,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum VerifyTarget {
    Thin,
    Hoffman,
    SlitFloor,
    Products,
    Map,
    Counterexample,
    Lemma25,
    Remark26,
    ThinGeneral,
    All,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    target: VerifyTarget,
    /// Ratio for `hoffman`
    #[arg(long)]
    c: Option<f64>,
    /// Angle for `slit-floor`
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Index range `lo..hi` for `slit-floor`
    #[arg(long)]
    m: Option<String>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// phi1, phi2, g, h, B or phi
    target: String,
    #[arg(long, default_value_t = 256)]
    res: usize,
    /// `disk`, `near-1` or `x0,x1,y0,y1`
    #[arg(long, default_value = "disk", allow_hyphen_values = true)]
    region: String,
    /// Output file (default: <out_dir>/<target>.ppm)
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Domain(String),
    Other(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) => Failure::Usage(e.to_string()),
            e if e.is_domain() => Failure::Domain(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_file(path).map_err(|e| match e {
            Error::Io(msg) => Failure::Usage(format!("cannot read {}: {msg}", path.display())),
            other => other.into(),
        })?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    Ok(cfg)
}

fn eval(args: &EvalArgs, cfg: &RunConfig) -> Result<(), Failure> {
    let z = parse_point(&args.point)?;
    let map = SlitMap::new();
    let a = match &args.a {
        Some(s) => parse_complex(s)?,
        None => cfg.a,
    };
    let n_max = args.n_max.unwrap_or(cfg.n_max);
    let out = match args.target {
        EvalTarget::Blaschke => {
            let b = BlaschkeProduct::new(factorial_zeros(a, n_max)?, cfg.tol.min(1e-12))?;
            fmt_value(b.eval(z)?)
        }
        EvalTarget::Singular => {
            let eta = parse_complex(&args.eta)?;
            fmt_value(SingularInner::atom(eta, args.t)?.eval(z)?)
        }
        EvalTarget::MapG => fmt_point(map.g(z)?),
        EvalTarget::MapH => fmt_point(map.h(z)?),
        EvalTarget::Phi => {
            let cx = build(DiskPoint::new(a)?, n_max, cfg.tol)?;
            fmt_value(cx.phi_eval(z)?)
        }
    };
    println!("{out}");
    Ok(())
}

/// Writes `contents` next to `path` and renames it into place.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Failure> {
    let io = |e: std::io::Error| Failure::Other(format!("writing {}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

fn verify(args: &VerifyArgs, cfg: &RunConfig) -> Result<(), Failure> {
    let suite = match args.target {
        VerifyTarget::Thin => Suite::Thin,
        VerifyTarget::Hoffman => Suite::Hoffman { c: args.c.unwrap_or(cfg.hoffman_c) },
        VerifyTarget::SlitFloor => Suite::SlitFloor {
            theta: args.theta.unwrap_or(cfg.theta1),
            m_range: args.m.as_deref().map(parse_range).transpose()?.unwrap_or(cfg.m_range),
        },
        VerifyTarget::Products => Suite::Products,
        VerifyTarget::Map => Suite::Map,
        VerifyTarget::Counterexample => Suite::Counterexample,
        VerifyTarget::Lemma25 => Suite::Lemma25,
        VerifyTarget::Remark26 => Suite::Remark26,
        VerifyTarget::ThinGeneral => Suite::ThinGeneral,
        VerifyTarget::All => Suite::All,
    };
    if let Suite::Hoffman { c } = suite {
        println!("hoffman_bound({c}) = {}", fmt_value(Complex64::new(hoffman_bound(c)?, 0.0)));
    }
    let report = run_suite(&suite, cfg);
    write_report(&report, cfg)?;
    if let Some(floor) = report.checks.iter().find(|c| c.name.starts_with("slit-floor")) {
        if let Some(v) = floor.values.iter().find(|v| v.label == "floor") {
            println!("floor = {}", fmt_value(Complex64::new(v.value, 0.0)));
        }
    }
    print!("{}", report.to_table());
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn write_report(report: &VerificationReport, cfg: &RunConfig) -> Result<(), Failure> {
    write_atomic(&cfg.out_dir.join("report.json"), &report.to_json())?;
    write_atomic(&cfg.out_dir.join("profiles.csv"), &report.to_csv())
}

fn render(args: &RenderArgs, cfg: &RunConfig) -> Result<(), Failure> {
    let target: Target = args.target.parse()?;
    let window: Window = args.region.parse()?;
    if args.res == 0 || args.res > 8192 {
        return Err(Failure::Usage(format!("resolution {} not in 1..=8192", args.res)));
    }
    let cx = build(DiskPoint::new(cfg.a)?, cfg.n_max, cfg.tol)?;
    let raster = render_target(Strategy::default(), target, &cx, window, args.res)?;
    let path = args.out.clone().unwrap_or_else(|| cfg.out_dir.join(format!("{}.ppm", args.target)));
    write_atomic(&path, &raster.to_ppm())?;
    println!("{}", path.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli).and_then(|cfg| match &cli.command {
        Command::Eval(args) => eval(args, &cfg),
        Command::Verify(args) => verify(args, &cfg),
        Command::Render(args) => render(args, &cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
