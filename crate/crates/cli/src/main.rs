mod error;
mod report;
mod suites;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vosa_core::cyclotomic::CyclotomicField;
use vosa_core::Q;

use error::{CliError, Result};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "vosa", version, about = "Exact computations with free fermion and lattice vertex operator superalgebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate a graded dimension and compare it with its closed form
    Character {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        params: Params,
    },
    /// Run a verification suite
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        params: Params,
    },
    /// Collect evidence for one of the two conjectures
    Evidence {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=2))]
        conjecture: u8,
        #[command(flatten)]
        params: Params,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Vfer,
    Msigma,
    Mg,
    Vl,
    Mpm,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Virasoro,
    Jacobi,
    TwistedJacobi,
    Tau,
    Phi,
    Transport,
    ParityStability,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
struct Params {
    /// Number of free fermions
    #[arg(long)]
    d: Option<usize>,
    /// Cycle length of the permutation
    #[arg(long)]
    k: Option<usize>,
    /// Truncation of q-series (rational)
    #[arg(long = "T", value_parser = parse_q)]
    t: Option<Q>,
    /// Weight cutoff for states (rational)
    #[arg(long = "W", value_parser = parse_q)]
    w: Option<Q>,
    /// Mode window
    #[arg(long)]
    window: Option<i64>,
    /// Order n of the cyclotomic field Q(zeta_n)
    #[arg(long = "cyclotomic-order")]
    order: Option<u32>,
    /// Coefficient bound for brute-force checks
    #[arg(long)]
    bound: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

fn parse_q(s: &str) -> std::result::Result<Q, String> {
    let q: Q = s.trim().parse().map_err(|_| format!("not a rational number: {}", s))?;
    if q < Q::from_integer(0) {
        return Err("must be nonnegative".into());
    }
    Ok(q)
}

/// Parameters after defaults, echoed in the report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub d: Option<usize>,
    pub k: Option<usize>,
    #[serde(rename = "T")]
    pub t: String,
    #[serde(rename = "W")]
    pub w: String,
    pub window: i64,
    pub bound: i64,
    pub cyclotomic_order: u32,
    pub format: Format,
    #[serde(skip)]
    pub t_q: Q,
    #[serde(skip)]
    pub w_q: Q,
}

impl RunConfig {
    fn resolve(command: String, p: &Params, default_t: i64) -> Result<Self> {
        let order = p.order.unwrap_or(8);
        if order == 0 || order % 8 != 0 {
            return Err(CliError::Usage(format!("cyclotomic order {} must be a multiple of 8 (i, sqrt 2 and zeta_8 are needed)", order)));
        }
        if let Some(k) = p.k {
            if order as usize % k != 0 && k % 2 == 0 {
                return Err(CliError::Usage(format!("cyclotomic order {} lacks a primitive {}-th root of unity", order, k)));
            }
        }
        let window = p.window.unwrap_or(3);
        if window < 0 {
            return Err(CliError::Usage("window must be nonnegative".into()));
        }
        let t_q = p.t.unwrap_or(Q::from_integer(default_t));
        let w_q = p.w.unwrap_or(Q::from_integer(2));
        Ok(RunConfig {
            command,
            d: p.d,
            k: p.k,
            t: t_q.to_string(),
            w: w_q.to_string(),
            window,
            bound: p.bound.unwrap_or(4),
            cyclotomic_order: order,
            format: p.format,
            t_q,
            w_q,
        })
    }

    pub fn field(&self) -> CyclotomicField {
        CyclotomicField::new(self.cyclotomic_order)
    }
}

fn emit(report: &Report, cfg: &RunConfig, out: &Option<std::path::PathBuf>) -> Result<()> {
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let (cfg, params, report, always_ok) = match cli.command {
        Command::Character { target, params } => {
            let cfg = RunConfig::resolve(format!("character {:?}", target).to_lowercase(), &params, 10)?;
            let (checks, series) = suites::character(target, &cfg)?;
            let mut r = Report::new(config_value(&cfg), checks);
            r.series = series;
            (cfg.clone(), params, r, false)
        }
        Command::Verify { suite, params } => {
            let name = serde_json::to_value(suite).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let cfg = RunConfig::resolve(format!("verify {}", name), &params, 3)?;
            let checks = suites::verify(suite, &cfg)?;
            (cfg.clone(), params, Report::new(config_value(&cfg), checks), false)
        }
        Command::Evidence { conjecture, params } => {
            let cfg = RunConfig::resolve(format!("evidence {}", conjecture), &params, 3)?;
            let (checks, status) = suites::evidence(conjecture, &cfg)?;
            let mut r = Report::new(config_value(&cfg), checks);
            r.status = Some(status);
            (cfg.clone(), params, r, true)
        }
    };
    emit(&report, &cfg, &params.out)?;
    Ok(always_ok || report.passed())
}

fn config_value(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
