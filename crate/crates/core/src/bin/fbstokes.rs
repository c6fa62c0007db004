//! Command-line front end: one subcommand per verification task.
//!
//! Exit status: 0 when every tolerance is met, 1 when a report was written
//! but some check failed, 2 for usage or configuration errors.

use clap::{Args, Parser, Subcommand};
use fbstokes::harness::config::*;
use fbstokes::harness::{run, Execution, Format, RunConfig, TaskConfig, VerificationReport};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fbstokes", version, about = "Verification harness for free-boundary Stokes kernels")]
struct Cli {
    /// Evaluate grid points on one thread (reports are identical either way).
    #[arg(long, global = true)]
    serial: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Output {
    /// Report path; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Defaults to the extension of --out, else json.
    #[arg(long, value_parser = parse_format)]
    format: Option<Format>,
}

#[derive(Subcommand)]
enum Command {
    /// Bound constants of B, D and E_0 over a sector grid.
    VerifySymbols {
        #[arg(long)]
        sector_angle: Option<f64>,
        #[arg(long)]
        lambda0: Option<f64>,
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long)]
        n_lambda: Option<usize>,
        #[arg(long)]
        n_arg: Option<usize>,
        #[arg(long)]
        a_min: Option<f64>,
        #[arg(long)]
        a_max: Option<f64>,
        #[arg(long)]
        n_a: Option<usize>,
        /// One viscosity, or several separated by commas.
        #[arg(long, value_parser = parse_csv, allow_hyphen_values = true)]
        mu: Option<Floats>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_parser = parse_csv, allow_hyphen_values = true)]
        a_kappa: Option<Floats>,
        #[command(flatten)]
        output: Output,
    },
    /// Residuals of a half-space model problem at one (lambda, xi').
    SolveHalfspace {
        #[arg(long, value_parser = parse_model)]
        model: Option<HalfspaceModel>,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        lambda: Option<[f64; 2]>,
        #[arg(long, value_parser = parse_csv, allow_hyphen_values = true)]
        xi: Option<Floats>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_parser = parse_csv, allow_hyphen_values = true)]
        a_kappa: Option<Floats>,
        /// JSON file with h_hat / d_hat, or `random`.
        #[arg(long)]
        data: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Whole-space resolvent residuals at seeded frequencies.
    WholespaceCheck {
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        lambda: Option<[f64; 2]>,
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        n_samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Mean curvature of a surface by two routes against its reference.
    Curvature {
        /// JSON surface description.
        #[arg(long)]
        surface: PathBuf,
        #[arg(long)]
        n_samples: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Reynolds transport, divergence identity and area derivative.
    TransportCheck {
        /// JSON flow description or `builtin:dilation`.
        #[arg(long)]
        flow: String,
        #[arg(long, value_parser = parse_csv)]
        dt_list: Option<Floats>,
        #[command(flatten)]
        output: Output,
    },
    /// Harmonic eigenvalues, spectral gap and rigid basis on spheres.
    BallSpectra {
        #[arg(long = "R")]
        radius: Option<f64>,
        #[arg(long)]
        lmax: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Vanishing and remainder orders of the nonlinear terms.
    NonlinearAudit {
        #[arg(long, value_parser = parse_case)]
        case: AuditCase,
        #[arg(long, value_parser = parse_csv)]
        eps_list: Option<Floats>,
        #[command(flatten)]
        output: Output,
    },
    /// Run a task from a JSON config file.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Alias keeps clap from treating the flag as repeatable.
type Floats = Vec<f64>;

fn parse_csv(s: &str) -> Result<Floats, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect()
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    match parse_csv(s)?.as_slice() {
        [re, im] => Ok([*re, *im]),
        _ => Err("expected re,im".into()),
    }
}

fn parse_format(s: &str) -> Result<Format, String> {
    match s {
        "csv" => Ok(Format::Csv),
        "json" => Ok(Format::Json),
        _ => Err("expected csv or json".into()),
    }
}

fn parse_model(s: &str) -> Result<HalfspaceModel, String> {
    match s {
        "neumann" => Ok(HalfspaceModel::Neumann),
        "tension" => Ok(HalfspaceModel::Tension),
        _ => Err("expected neumann or tension".into()),
    }
}

fn parse_case(s: &str) -> Result<AuditCase, String> {
    AuditCase::parse(s).ok_or_else(|| {
        let names: Vec<&str> = AuditCase::ALL.iter().map(|c| c.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

/// Turns parsed flags into a run configuration; file arguments are read here.
fn build(command: Command) -> Result<RunConfig, ConfigError> {
    let (task, output) = match command {
        Command::VerifySymbols { sector_angle, lambda0, lambda_max, n_lambda, n_arg, a_min, a_max, n_a, mu, sigma, a_kappa, output } => {
            let mut t = SymbolsTask::default();
            set(&mut t.sector_angle, sector_angle);
            set(&mut t.lambda0, lambda0);
            set(&mut t.lambda_max, lambda_max);
            set(&mut t.n_lambda, n_lambda);
            set(&mut t.n_arg, n_arg);
            set(&mut t.a_min, a_min);
            set(&mut t.a_max, a_max);
            set(&mut t.n_a, n_a);
            set(&mut t.mu, mu);
            set(&mut t.sigma, sigma);
            set(&mut t.a_kappa, a_kappa);
            (TaskConfig::VerifySymbols(t), output)
        }
        Command::SolveHalfspace { model, lambda, xi, mu, sigma, a_kappa, data, seed, tol, output } => {
            let mut t = HalfspaceTask::default();
            set(&mut t.model, model);
            set(&mut t.lambda, lambda);
            set(&mut t.xi, xi);
            set(&mut t.mu, mu);
            set(&mut t.sigma, sigma);
            set(&mut t.a_kappa, a_kappa);
            set(&mut t.seed, seed);
            set(&mut t.tol, tol);
            t.data = match data.as_deref() {
                None | Some("random") => None,
                Some(path) => Some(boundary_data_from_json(&read_text(Path::new(path), "data")?, "data")?),
            };
            (TaskConfig::SolveHalfspace(t), output)
        }
        Command::WholespaceCheck { lambda, mu, n_samples, seed, tol, output } => {
            let mut t = WholespaceTask::default();
            set(&mut t.lambda, lambda);
            set(&mut t.mu, mu);
            set(&mut t.n_samples, n_samples);
            set(&mut t.seed, seed);
            set(&mut t.tol, tol);
            (TaskConfig::WholespaceCheck(t), output)
        }
        Command::Curvature { surface, n_samples, tol, output } => {
            let spec = surface_from_json(&read_text(&surface, "surface")?, "surface")?;
            let mut t = CurvatureTask::new(spec);
            set(&mut t.n_samples, n_samples);
            set(&mut t.tol, tol);
            (TaskConfig::Curvature(t), output)
        }
        Command::TransportCheck { flow, dt_list, output } => {
            let spec = match flow.strip_prefix("builtin:") {
                Some("dilation") => FlowSpec::Dilation { dim: 3 },
                Some(other) => return Err(ConfigError::new("flow", format!("unknown builtin `{other}`, expected builtin:dilation"))),
                None => flow_from_json(&read_text(Path::new(&flow), "flow")?, "flow")?,
            };
            let mut t = TransportTask::new(spec);
            set(&mut t.dt_list, dt_list);
            (TaskConfig::TransportCheck(t), output)
        }
        Command::BallSpectra { radius, lmax, output } => {
            let mut t = SpectraTask::default();
            set(&mut t.radius, radius);
            set(&mut t.lmax, lmax);
            (TaskConfig::BallSpectra(t), output)
        }
        Command::NonlinearAudit { case, eps_list, output } => {
            let mut t = AuditTask::new(case);
            set(&mut t.eps_list, eps_list);
            (TaskConfig::NonlinearAudit(t), output)
        }
        Command::Run { config } => return RunConfig::from_json(&read_text(&config, "config")?),
    };
    task.validate()?;
    Ok(RunConfig {
        task,
        out: output.out,
        format: output.format,
    })
}

fn render(report: &VerificationReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.serial { Execution::Serial } else { Execution::Parallel };
    let config = match build(cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fbstokes: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&config.task, exec) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fbstokes: {e}");
            return ExitCode::from(2);
        }
    };
    let text = render(&report, config.format());
    let written = match &config.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("fbstokes: invalid `out`: {e}");
        return ExitCode::from(2);
    }
    let failed = report.records.iter().filter(|r| !r.pass).count() + report.checks.iter().filter(|c| !c.1).count();
    if report.passed() {
        eprintln!("fbstokes {}: PASS ({} records)", config.task.name(), report.records.len());
        ExitCode::SUCCESS
    } else {
        eprintln!("fbstokes {}: FAIL ({failed} failing of {} records and {} checks)", config.task.name(), report.records.len(), report.checks.len());
        ExitCode::from(1)
    }
}
