//! `coronawalk`: spectra, perfect state transfer verdicts and pretty good
//! state transfer searches for graphs and vertex complemented coronae.
//!
//! Exit status: 0 when a result (including a negative verdict) was produced,
//! 2 on parse or precondition errors, 3 when exact recognition failed.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coronawalk::state_transfer::Verdict;
use coronawalk::workflow::{
    check_pst, corona_spectrum_summary, fidelity, parse_grid, parse_target, parse_vertex, search_pgst, spectrum,
    to_field_csv, to_json, OutputFormat, RunConfig, Target, TimeRequest, WorkflowError,
};

#[derive(Parser, Debug)]
#[command(name = "coronawalk", version, about = "Quantum walks on vertex complemented coronae")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ConfigArgs {
    /// Exact recognition and support tolerance.
    #[arg(long, global = true, env = "QWC_TOLERANCE", default_value_t = 1e-9)]
    tolerance: f64,
    /// Eigenvalue clustering tolerance.
    #[arg(long, global = true, env = "QWC_CLUSTER_TOL", default_value_t = 1e-7)]
    cluster_tol: f64,
    /// Largest lattice index scanned by search-pgst.
    #[arg(long, global = true, env = "QWC_L_BOUND", default_value_t = 1_000_000)]
    l_bound: u64,
    /// Target fidelity is 1 - epsilon.
    #[arg(long, global = true, env = "QWC_EPSILON", default_value_t = 0.01)]
    epsilon: f64,
    /// End of the default fidelity grid.
    #[arg(long, global = true, env = "QWC_T_MAX", default_value_t = 50.0)]
    t_max: f64,
    /// Points on the default fidelity grid.
    #[arg(long, global = true, env = "QWC_STEPS", default_value_t = 2000)]
    steps: usize,
    #[arg(long, global = true, env = "QWC_FORMAT", default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Read the graph from an edge-list file; the TARGET argument is then
    /// omitted.
    #[arg(long, global = true, env = "QWC_FILE")]
    file: Option<PathBuf>,
}

impl ConfigArgs {
    fn run_config(&self) -> Result<RunConfig, WorkflowError> {
        let cfg = RunConfig {
            tolerance: self.tolerance,
            cluster_tol: self.cluster_tol,
            l_bound: self.l_bound,
            epsilon: self.epsilon,
            t_max: self.t_max,
            steps: self.steps,
            format: self.format.parse()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distinct signless Laplacian eigenvalues with multiplicities.
    Spectrum {
        /// TARGET
        #[arg(value_name = "TARGET")]
        args: Vec<String>,
    },
    /// Closed-form corona spectrum checked against the assembled matrix.
    CoronaSpectrum {
        /// Base graph spec.
        g: String,
        /// Inner graph spec.
        h: String,
    },
    /// Perfect state transfer verdict between two vertices.
    CheckPst {
        /// TARGET U V
        #[arg(value_name = "TARGET U V", num_args = 2..=3)]
        args: Vec<String>,
    },
    /// Bounded search for pretty good state transfer between base vertices.
    SearchPgst {
        /// TARGET [U V]; vertices default to base:0 base:1
        #[arg(value_name = "TARGET [U V]", num_args = 0..=3)]
        args: Vec<String>,
    },
    /// Transition amplitude at one time, or fidelity over a grid.
    Fidelity {
        /// TARGET U V
        #[arg(value_name = "TARGET U V", num_args = 2..=3)]
        args: Vec<String>,
        #[arg(long, conflicts_with = "grid", allow_hyphen_values = true)]
        tau: Option<f64>,
        /// T_MIN:T_MAX:STEPS
        #[arg(long)]
        grid: Option<String>,
    },
}

/// Splits positionals into the target and the remaining vertex arguments.
fn target_and_rest<'a>(args: &'a [String], file: &Option<PathBuf>) -> Result<(Target, &'a [String]), WorkflowError> {
    match file {
        Some(path) => Ok((parse_target(&format!("file:{}", path.display()))?, args)),
        None => {
            let (first, rest) = args.split_first().ok_or_else(|| missing("TARGET"))?;
            Ok((parse_target(first)?, rest))
        }
    }
}

fn missing(what: &str) -> WorkflowError {
    WorkflowError::Parse { input: String::new(), position: 0, message: format!("missing {what}") }
}

fn vertex_pair(rest: &[String], target: &Target) -> Result<(usize, usize), WorkflowError> {
    match rest {
        [u, v] => Ok((parse_vertex(u, target)?, parse_vertex(v, target)?)),
        _ => Err(missing("vertices U V")),
    }
}

fn render<T: serde::Serialize>(value: &T, format: OutputFormat, csv: impl FnOnce(&T) -> String) -> String {
    match format {
        OutputFormat::Json => to_json(value),
        OutputFormat::Csv => csv(value),
    }
}

fn run(cli: Cli) -> Result<(String, i32), WorkflowError> {
    let cfg = cli.config.run_config()?;
    let file = &cli.config.file;
    let format = cfg.format;
    Ok(match cli.command {
        Command::Spectrum { args } => {
            let (target, rest) = target_and_rest(&args, file)?;
            if !rest.is_empty() {
                return Err(WorkflowError::Parse {
                    input: rest[0].clone(),
                    position: 0,
                    message: "unexpected argument".into(),
                });
            }
            let listing = spectrum(&target, &cfg)?;
            (render(&listing, format, |l| l.to_csv()), 0)
        }
        Command::CoronaSpectrum { g, h } => {
            let target = parse_target(&format!("corona({g},{h})"))?;
            let summary = corona_spectrum_summary(&target, &cfg)?;
            (render(&summary, format, |s| s.to_csv()), 0)
        }
        Command::CheckPst { args } => {
            let (target, rest) = target_and_rest(&args, file)?;
            let (u, v) = vertex_pair(rest, &target)?;
            let report = check_pst(&target, u, v, &cfg)?;
            let code = if report.verdict == Verdict::UndecidedNumeric { 3 } else { 0 };
            (render(&report, format, to_field_csv), code)
        }
        Command::SearchPgst { args } => {
            let (target, rest) = target_and_rest(&args, file)?;
            let (u, v) = if rest.is_empty() {
                let base = |i: usize| match target {
                    Target::Graph { .. } => Ok(i),
                    _ => parse_vertex(&format!("base:{i}"), &target),
                };
                (base(0)?, base(1)?)
            } else {
                vertex_pair(rest, &target)?
            };
            let result = search_pgst(&target, u, v, &cfg)?;
            (render(&result, format, to_field_csv), 0)
        }
        Command::Fidelity { args, tau, grid } => {
            let (target, rest) = target_and_rest(&args, file)?;
            let (u, v) = vertex_pair(rest, &target)?;
            let request = match (tau, grid) {
                (Some(t), _) => TimeRequest::At(t),
                (None, Some(g)) => parse_grid(&g)?,
                (None, None) => TimeRequest::Grid { t_min: 0.0, t_max: cfg.t_max, steps: cfg.steps },
            };
            let out = fidelity(&target, u, v, request, &cfg)?;
            (render(&out, format, |o| o.to_csv()), 0)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            let sep = if text.ends_with('\n') { "" } else { "\n" };
            // a closed pipe downstream is not an error
            let _ = write!(out, "{text}{sep}").and_then(|_| out.flush());
            ExitCode::from(code as u8)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
