use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use msp::config::{ConfigFile, ExperimentConfig, OutputFormat, PrecondKind};
use msp::mtx::{self, MtxMatrix};
use msp::spectrum::{matrix_pair_spectrum, problem_spectrum};
use msp::table::run_table;
use msp::verify::run_verify;
use msp::{exit, MspError, Result};

#[derive(Parser)]
#[command(name = "msp", version, about = "Multiple saddle point systems: bound verification and control experiments")]
struct Cli {
    /// Log assembly statistics and per-cell results to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the spectral bounds on random block systems.
    Verify {
        /// Block counts, e.g. `2..6` or `3`.
        #[arg(long, default_value = "2..6")]
        n: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Iteration counts of preconditioned MINRES over levels and alphas.
    Table(ProblemArgs),
    /// Extreme eigenvalues and condition number of the preconditioned system.
    Spectrum {
        #[command(flatten)]
        problem: ProblemArgs,
        /// Estimate extremes with this many Lanczos steps instead of a dense solve.
        #[arg(long)]
        lanczos: Option<usize>,
        /// Use a Matrix Market system file instead of a problem.
        #[arg(long, requires = "precond_file")]
        matrix: Option<PathBuf>,
        /// Preconditioner for `--matrix`.
        #[arg(long = "precond-file")]
        precond_file: Option<PathBuf>,
        /// Block count the `--matrix` bounds refer to. Defaults to the
        /// `layout.json` next to the matrix, or 1 without one.
        #[arg(long, requires = "matrix")]
        blocks: Option<usize>,
    },
    /// Write the system, right-hand side and preconditioners as Matrix Market files.
    Export {
        #[command(flatten)]
        problem: ProblemArgs,
        #[arg(long = "matrix-market", value_name = "DIR")]
        matrix_market: PathBuf,
        /// Also write the exact Schur complement preconditioner.
        #[arg(long)]
        exact: bool,
    },
}

#[derive(Args, Default)]
struct ProblemArgs {
    /// JSON file with defaults for the options below.
    #[arg(long)]
    config: Option<PathBuf>,
    /// boundary_observation, distributed_strong, distributed_very_weak or boundary_control.
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    degree: Option<usize>,
    /// unit_square, unit_cube, annulus_2d or twisted_3d.
    #[arg(long)]
    geometry: Option<String>,
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    levels: Option<Vec<u32>>,
    /// Comma separated regularization parameters.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    alphas: Option<Vec<f64>>,
    /// `exact` or `practical`.
    #[arg(long)]
    precond: Option<String>,
    /// Relative residual reduction in the preconditioned energy norm.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    maxit: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// `csv` or `md`.
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write residual histories to this CSV file.
    #[arg(long)]
    residuals: Option<PathBuf>,
    /// Allow levels beyond desk scale (practical preconditioner only).
    #[arg(long)]
    large: bool,
}

impl ProblemArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(p) => ConfigFile::from_json(&fs::read_to_string(p)?)?,
            None => ConfigFile::default(),
        };
        let cli = ConfigFile {
            problem: self.problem.clone(),
            dim: self.dim,
            degree: self.degree,
            geometry: self.geometry.clone(),
            levels: self.levels.clone(),
            alphas: self.alphas.clone(),
            precond: self.precond.as_deref().map(str::parse::<PrecondKind>).transpose()?,
            tol: self.tol,
            maxit: self.maxit,
            seed: self.seed,
            format: self.format.as_deref().map(str::parse::<OutputFormat>).transpose()?,
            out: self.out.as_ref().map(|p| p.display().to_string()),
            large: self.large.then_some(true),
        };
        ExperimentConfig::resolve(cli.or(file))
    }

    /// Spectrum and export runs use the first level and alpha.
    fn single(&self) -> Result<ExperimentConfig> {
        let cfg = self.resolve()?;
        if cfg.levels.len() > 1 || cfg.alphas.len() > 1 {
            log::warn!("using level {} and alpha {} only", cfg.levels[0], cfg.alphas[0]);
        }
        Ok(cfg)
    }
}

fn parse_range(s: &str) -> Result<Vec<usize>> {
    let bad = || MspError::Config(format!("bad block range {s:?}; expected e.g. 2..6"));
    let v: Vec<usize> = match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.parse().map_err(|_| bad())?;
            let b: usize = b.trim_start_matches('=').parse().map_err(|_| bad())?;
            (a..=b).collect()
        }
        None => vec![s.parse().map_err(|_| bad())?],
    };
    if v.is_empty() || v.iter().any(|n| !(2..=6).contains(n)) {
        return Err(MspError::Config("block counts must lie in 2..6".into()));
    }
    Ok(v)
}

fn emit(text: &str, out: Option<&str>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn read_sym(p: &PathBuf) -> Result<msp_core::linalg::SparseSymMatrix> {
    match mtx::read(BufReader::new(File::open(p)?))? {
        MtxMatrix::Symmetric(m) => Ok(m),
        MtxMatrix::General(_) => Err(MspError::Config(format!("{} is not a symmetric matrix", p.display()))),
    }
}

/// Block count from a `layout.json` written by `export` next to `matrix`.
fn layout_blocks(matrix: &Path) -> Result<Option<usize>> {
    let Some(p) = matrix.parent().map(|d| d.join("layout.json")).filter(|p| p.exists()) else {
        return Ok(None);
    };
    let layout: serde_json::Value = serde_json::from_str(&fs::read_to_string(&p)?)?;
    let n = layout["block_dims"].as_array().map(Vec::len);
    if n.is_none() {
        log::warn!("{} has no block_dims; using one block", p.display());
    }
    Ok(n)
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { n, trials, seed } => {
            let ns = parse_range(&n)?;
            let report = run_verify(&ns, trials, seed)?;
            for c in &report.checks {
                println!("{c}");
            }
            Ok(if report.passed() { exit::PASS } else { exit::VIOLATION })
        }
        Command::Table(args) => {
            let cfg = args.resolve()?;
            let table = run_table(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Csv => table.to_csv(),
                OutputFormat::Markdown => table.to_markdown(),
            };
            emit(&text, cfg.out.as_deref())?;
            if let Some(p) = &args.residuals {
                fs::write(p, table.residuals_csv())?;
            }
            Ok(if table.all_converged() { exit::PASS } else { exit::SOLVER })
        }
        Command::Spectrum { problem, lanczos, matrix, precond_file, blocks } => {
            let summary = match (matrix, precond_file) {
                (Some(a), Some(p)) => {
                    let blocks = match blocks {
                        Some(b) => b,
                        None => layout_blocks(&a)?.unwrap_or(1),
                    };
                    matrix_pair_spectrum(read_sym(&a)?, read_sym(&p)?, blocks)?
                }
                _ => {
                    let cfg = problem.single()?;
                    problem_spectrum(&cfg.problem_config(cfg.levels[0], cfg.alphas[0]), cfg.precond, lanczos)?
                }
            };
            println!("{}", summary.to_json());
            Ok(if summary.within_bounds { exit::PASS } else { exit::VIOLATION })
        }
        Command::Export { problem, matrix_market, exact } => {
            let cfg = problem.single()?;
            let written = msp::export::export_problem(&cfg.problem_config(cfg.levels[0], cfg.alphas[0]), &matrix_market, exact)?;
            for p in written {
                info!("wrote {}", p.display());
            }
            Ok(exit::PASS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.verbose { "info" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
