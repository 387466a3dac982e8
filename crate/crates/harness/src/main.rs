//! `primo` — differentially private multi-outcome regression experiments.
//!
//! Subcommands: `simulate` sweeps the synthetic generative model over grids
//! of (d, l, ε, method); `sweep-subsample` additionally sweeps covariance
//! subsample sizes; `fit` runs one private fit on user-supplied design and
//! outcome files. Exit codes: 0 success, 2 configuration error, 3 data
//! error. Output is byte-deterministic for identical invocations unless
//! `--timing` is passed.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use primo_core::privacy::PrivacyBudget;
use primo_core::query::OutcomeMatrix;
use primo_core::solver::{naive_ssp_baseline, reuse_cov, subsample_reuse_cov, DesignMatrix, Mechanism, SolverConfig};

use primo_harness::error::{HarnessError, Result};
use primo_harness::genotype::{load_genotype_matrix, write_matrix};
use primo_harness::sweep::{emit_csv, run_sweep, Method, SweepGrid, TimingMode};

#[derive(Parser)]
#[command(
    name = "primo",
    version,
    about = "Differentially private least squares across many outcomes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sweep the synthetic model over grids of d, l, epsilon, and method.
    Simulate(SimulateArgs),
    /// Like `simulate`, sweeping covariance subsample sizes as well.
    SweepSubsample(SweepSubsampleArgs),
    /// One private fit of design/outcome files; writes the coefficients.
    Fit(FitArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Individuals in each synthetic dataset.
    #[arg(long)]
    n: usize,
    /// Design dimensions, comma-separated.
    #[arg(long, value_delimiter = ',')]
    d: Vec<usize>,
    /// Outcome counts, comma-separated.
    #[arg(long, value_delimiter = ',')]
    l: Vec<usize>,
    /// Privacy budgets epsilon, comma-separated.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    eps: Vec<f64>,
    /// Privacy parameter delta, or `auto` for 1/n^2.
    #[arg(long, default_value = "auto")]
    delta: String,
    /// Ridge parameter.
    #[arg(long, default_value_t = 0.23)]
    lambda: f64,
    /// Methods to run: gauss, proj, naive (comma-separated).
    #[arg(long, value_delimiter = ',', default_value = "gauss")]
    mech: Vec<String>,
    /// Trials per grid cell.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Base seed; every dataset and noise stream derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Row-norm clip applied to the synthetic design.
    #[arg(long, default_value_t = 2.0)]
    x_bound: f64,
    /// Additive phenotype noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    noise_std: f64,
    /// Record wall-clock runtimes (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct SweepSubsampleArgs {
    #[command(flatten)]
    grid: GridArgs,
    /// Covariance subsample sizes, comma-separated; values equal to n
    /// reproduce the full-sample solver exactly.
    #[arg(long, value_delimiter = ',')]
    s: Vec<usize>,
}

#[derive(Args)]
struct FitArgs {
    /// Design matrix file (CSV, or TSV by .tsv extension).
    #[arg(long)]
    x: PathBuf,
    /// Outcome matrix file (CSV, or TSV by .tsv extension).
    #[arg(long)]
    y: PathBuf,
    /// Privacy budget epsilon.
    #[arg(long)]
    eps: f64,
    /// Privacy parameter delta, or `auto` for 1/n^2.
    #[arg(long, default_value = "auto")]
    delta: String,
    /// Ridge parameter.
    #[arg(long, default_value_t = 0.23)]
    lambda: f64,
    /// gauss, proj, or naive.
    #[arg(long, default_value = "proj")]
    mech: String,
    /// Declared row-norm bound for the design; rows above it are clipped.
    #[arg(long)]
    x_bound: f64,
    /// Declared entry bound for the outcomes; exceeding it is a data error.
    #[arg(long)]
    y_bound: f64,
    /// Covariance subsample size (defaults to the full sample).
    #[arg(long)]
    s: Option<usize>,
    /// Seed for every noise stream of the fit.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path for the d×l coefficient matrix.
    #[arg(long)]
    out: PathBuf,
}

fn resolve_delta(spec: &str, n: usize) -> Result<f64> {
    let v = if spec == "auto" {
        1.0 / (n as f64 * n as f64)
    } else {
        spec.parse::<f64>().map_err(|_| {
            HarnessError::Config(format!("delta must be a number or `auto`, got {spec:?}"))
        })?
    };
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(HarnessError::Config(format!("delta {v} must lie in (0, 1)")))
    }
}

fn parse_methods(tokens: &[String]) -> Result<Vec<Method>> {
    tokens.iter().map(|t| Method::parse(t)).collect()
}

fn delimiter_for(path: &Path) -> u8 {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => b'\t',
        _ => b',',
    }
}

fn build_grid(args: &GridArgs, s_values: Vec<Option<usize>>) -> Result<SweepGrid> {
    let delta = resolve_delta(&args.delta, args.n)?;
    let methods = parse_methods(&args.mech)?;
    Ok(SweepGrid {
        n: args.n,
        d_values: args.d.clone(),
        l_values: args.l.clone(),
        s_values,
        eps_values: args.eps.clone(),
        delta,
        lambda: args.lambda,
        methods,
        x_bound: args.x_bound,
        noise_std: args.noise_std,
        timing: if args.timing { TimingMode::Wall } else { TimingMode::Zero },
    })
}

fn run_grid(args: &GridArgs, s_values: Vec<Option<usize>>) -> Result<()> {
    let grid = build_grid(args, s_values)?;
    let rows = run_sweep(&grid, args.trials, args.seed)?;
    emit_csv(&rows, &args.out)?;
    println!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn run_fit(args: &FitArgs) -> Result<()> {
    if !(args.eps > 0.0 && args.eps.is_finite()) {
        return Err(HarnessError::Config(format!(
            "epsilon {} must be positive and finite",
            args.eps
        )));
    }
    if !(args.lambda >= 0.0 && args.lambda.is_finite()) {
        return Err(HarnessError::Config(format!(
            "lambda {} must be finite and nonnegative",
            args.lambda
        )));
    }
    if !(args.x_bound > 0.0 && args.x_bound.is_finite()) {
        return Err(HarnessError::Config(format!(
            "x-bound {} must be positive and finite",
            args.x_bound
        )));
    }
    if !(args.y_bound >= 0.0 && args.y_bound.is_finite()) {
        return Err(HarnessError::Config(format!(
            "y-bound {} must be finite and nonnegative",
            args.y_bound
        )));
    }
    let method = Method::parse(&args.mech)?;
    if method == Method::Naive && args.s.is_some() {
        return Err(HarnessError::Config(
            "the naive baseline has no subsampled-covariance variant".to_string(),
        ));
    }

    let x_raw = load_genotype_matrix(&args.x, delimiter_for(&args.x))?;
    let y_raw = load_genotype_matrix(&args.y, delimiter_for(&args.y))?;
    let n = x_raw.rows();
    if y_raw.rows() != n {
        return Err(HarnessError::Data(format!(
            "design has {n} rows but outcomes have {}",
            y_raw.rows()
        )));
    }
    let delta = resolve_delta(&args.delta, n)?;
    if let Some(s) = args.s {
        if s < 1 || s > n {
            return Err(HarnessError::Config(format!(
                "subsample size {s} out of range 1..={n}"
            )));
        }
    }
    let worst = y_raw.data().iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    if worst > args.y_bound {
        return Err(HarnessError::Data(format!(
            "outcome entry magnitude {worst} exceeds --y-bound {}",
            args.y_bound
        )));
    }

    let x = DesignMatrix::new(x_raw, args.x_bound);
    let y = OutcomeMatrix::new(y_raw, args.y_bound);
    let budget = PrivacyBudget::new(args.eps, delta);
    let cfg = SolverConfig {
        lambda: args.lambda,
        budget,
        mechanism: match method {
            Method::Projection => Mechanism::Projection,
            Method::Gauss | Method::Naive => Mechanism::Gauss,
        },
        subsample_s: args.s,
        seed: args.seed,
    };
    let sol = match method {
        Method::Naive => naive_ssp_baseline(&x, &y, args.lambda, &budget, args.seed)?,
        _ if args.s.is_some() => subsample_reuse_cov(&x, &y, &cfg)?,
        _ => reuse_cov(&x, &y, &cfg)?,
    };
    write_matrix(&args.out, &sol.w_hat, b',')?;
    println!(
        "wrote {}x{} coefficients to {} (mechanism {}, sigma_cov {:.6e})",
        sol.w_hat.rows(),
        sol.w_hat.cols(),
        args.out.display(),
        sol.mechanism.label(),
        sol.sigma_cov,
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Simulate(args) => run_grid(&args.grid, vec![None]),
        Cmd::SweepSubsample(args) => {
            if args.s.is_empty() {
                return Err(HarnessError::Config("--s needs at least one value".to_string()));
            }
            run_grid(&args.grid, args.s.iter().map(|&s| Some(s)).collect())
        }
        Cmd::Fit(args) => run_fit(&args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
