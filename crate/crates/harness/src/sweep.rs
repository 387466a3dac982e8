//! Experiment sweeps: grids over (d, l, s, ε, method), common-random-number
//! seeding, metric rows, and CSV emission.
//!
//! Seed discipline: every (d, l, trial) triple gets a `data seed` and a
//! `solver seed`, both FNV-1a digests of the base seed, a tag, and the
//! triple. Neither depends on ε, s, or the method, so every method at a
//! given grid point faces the same dataset and the same noise streams
//! (common random numbers): loss comparisons across methods and subsample
//! sizes are seed-matched, and a subsampled run at s = n reproduces the
//! full-covariance run bit for bit.
//!
//! Rows are computed in a worker pool (each cell's randomness is derived,
//! never shared) and sorted by (cell index, trial) before emission, so the
//! output bytes are independent of scheduling. With [`TimingMode::Zero`]
//! (the default) the runtime column is written as zero and identical
//! invocations produce byte-identical CSV; [`TimingMode::Wall`] records
//! wall-clock phase times at the cost of that reproducibility.

use std::fs;
use std::path::Path;

use primo_core::privacy::PrivacyBudget;
use primo_core::rng::Fnv1a;
use primo_core::solver::{
    naive_ssp_baseline, ols_optimum, residual_frob_sq, reuse_cov, subsample_reuse_cov, Mechanism,
    SolverConfig,
};

use rayon::prelude::*;

use crate::error::{HarnessError, Result};
use crate::synth::{generate_phenotypes, synthetic_design, SyntheticSpec};

/// How a row's coefficients were produced: the shared-covariance solver with
/// one of the two association mechanisms, or the per-regression baseline
/// that re-noises the covariance for every outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Gauss,
    Projection,
    Naive,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Gauss => "gauss",
            Method::Projection => "projection",
            Method::Naive => "naive",
        }
    }

    /// Accepts the CLI spellings: `gauss`, `proj`/`projection`, `naive`.
    pub fn parse(token: &str) -> Result<Method> {
        match token {
            "gauss" => Ok(Method::Gauss),
            "proj" | "projection" => Ok(Method::Projection),
            "naive" => Ok(Method::Naive),
            other => Err(HarnessError::Config(format!(
                "unknown method {other:?} (expected gauss, proj, or naive)"
            ))),
        }
    }
}

/// Runtime column policy. `Zero` keeps the CSV byte-deterministic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TimingMode {
    #[default]
    Zero,
    Wall,
}

/// A full sweep description. Cells enumerate the cartesian product
/// d × l × s × ε × method in the listed order; `s = None` means the
/// full-sample solver, `s = Some(k)` the subsampled-covariance variant.
#[derive(Debug, Clone)]
pub struct SweepGrid {
    pub n: usize,
    pub d_values: Vec<usize>,
    pub l_values: Vec<usize>,
    pub s_values: Vec<Option<usize>>,
    pub eps_values: Vec<f64>,
    pub delta: f64,
    pub lambda: f64,
    pub methods: Vec<Method>,
    /// Row-norm clip for the synthetic design.
    pub x_bound: f64,
    /// Additive phenotype noise in the generative model.
    pub noise_std: f64,
    pub timing: TimingMode,
}

impl SweepGrid {
    /// A grid with the experiment defaults: full-sample solver, x_bound 2,
    /// unit phenotype noise, deterministic (zero) timing column.
    pub fn new(
        n: usize,
        d_values: Vec<usize>,
        l_values: Vec<usize>,
        eps_values: Vec<f64>,
        delta: f64,
        lambda: f64,
        methods: Vec<Method>,
    ) -> Self {
        Self {
            n,
            d_values,
            l_values,
            s_values: vec![None],
            eps_values,
            delta,
            lambda,
            methods,
            x_bound: 2.0,
            noise_std: 1.0,
            timing: TimingMode::Zero,
        }
    }

    /// Checks every grid value; empty axes are legal and yield no cells.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.n < 1 {
            return bad("n must be >= 1".into());
        }
        for &d in &self.d_values {
            if d < 1 {
                return bad("d must be >= 1".into());
            }
        }
        for &l in &self.l_values {
            if l < 1 {
                return bad("l must be >= 1".into());
            }
        }
        for &s in self.s_values.iter().flatten() {
            if s < 1 || s > self.n {
                return bad(format!("subsample size {s} out of range 1..={}", self.n));
            }
        }
        for &e in &self.eps_values {
            if !(e > 0.0 && e.is_finite()) {
                return bad(format!("epsilon {e} must be positive and finite"));
            }
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta {} must lie in (0, 1)", self.delta));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return bad(format!("lambda {} must be finite and nonnegative", self.lambda));
        }
        if !(self.x_bound > 0.0 && self.x_bound.is_finite()) {
            return bad(format!("x_bound {} must be positive and finite", self.x_bound));
        }
        if !(self.noise_std >= 0.0 && self.noise_std.is_finite()) {
            return bad(format!("noise_std {} must be finite and nonnegative", self.noise_std));
        }
        if self.methods.contains(&Method::Naive) && self.s_values.iter().any(Option::is_some) {
            return bad("the naive baseline has no subsampled-covariance variant".into());
        }
        Ok(())
    }
}

/// One (cell, trial) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub l: usize,
    pub d: usize,
    pub n: usize,
    /// Covariance sample size: n for full-sample runs.
    pub s: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub lambda: f64,
    pub mechanism: Method,
    pub trial: usize,
    pub excess_loss: f64,
    pub loss_ratio: f64,
    pub runtime_ms: f64,
    /// The solver seed the row was produced with (data seed is derived from
    /// the same base; see module docs).
    pub seed: u64,
    /// `"ok"`, or the error that stopped this cell (the sweep continues).
    pub status: String,
}

fn derive_seed(base: u64, tag: &[u8], n: usize, d: usize, l: usize, trial: usize) -> u64 {
    let mut h = Fnv1a::new();
    h.update(&base.to_le_bytes());
    h.update(tag);
    h.update(&(n as u64).to_le_bytes());
    h.update(&(d as u64).to_le_bytes());
    h.update(&(l as u64).to_le_bytes());
    h.update(&(trial as u64).to_le_bytes());
    h.finish()
}

#[derive(Clone, Copy)]
struct Cell {
    idx: usize,
    d: usize,
    l: usize,
    s: Option<usize>,
    eps: f64,
    method: Method,
}

/// Runs every (cell, trial) pair of the grid and returns one row each, in
/// (cell index, trial) order. Datasets and solver seeds depend only on
/// (d, l, trial); solver failures are recorded in the row's status and the
/// sweep continues.
pub fn run_sweep(grid: &SweepGrid, trials: usize, base_seed: u64) -> Result<Vec<ExperimentRow>> {
    grid.validate()?;

    let mut cells = Vec::new();
    for &d in &grid.d_values {
        for &l in &grid.l_values {
            for &s in &grid.s_values {
                for &eps in &grid.eps_values {
                    for &method in &grid.methods {
                        cells.push(Cell { idx: cells.len(), d, l, s, eps, method });
                    }
                }
            }
        }
    }

    // One unit of work per (d, l, trial): the dataset and the non-private
    // optimum are shared by every cell at that grid point.
    let mut units = Vec::new();
    for &d in &grid.d_values {
        for &l in &grid.l_values {
            for trial in 0..trials {
                units.push((d, l, trial));
            }
        }
    }

    let mut tagged: Vec<(usize, usize, ExperimentRow)> = units
        .par_iter()
        .flat_map(|&(d, l, trial)| run_unit(grid, &cells, base_seed, d, l, trial))
        .collect();
    tagged.sort_by_key(|&(cell_idx, trial, _)| (cell_idx, trial));
    Ok(tagged.into_iter().map(|(_, _, row)| row).collect())
}

fn error_row(
    grid: &SweepGrid,
    cell: &Cell,
    trial: usize,
    seed: u64,
    msg: &str,
) -> ExperimentRow {
    ExperimentRow {
        l: cell.l,
        d: cell.d,
        n: grid.n,
        s: cell.s.unwrap_or(grid.n),
        epsilon: cell.eps,
        delta: grid.delta,
        lambda: grid.lambda,
        mechanism: cell.method,
        trial,
        excess_loss: f64::NAN,
        loss_ratio: f64::NAN,
        runtime_ms: 0.0,
        seed,
        status: msg.to_string(),
    }
}

fn run_unit(
    grid: &SweepGrid,
    cells: &[Cell],
    base_seed: u64,
    d: usize,
    l: usize,
    trial: usize,
) -> Vec<(usize, usize, ExperimentRow)> {
    let n = grid.n;
    let data_seed = derive_seed(base_seed, b"data", n, d, l, trial);
    let solver_seed = derive_seed(base_seed, b"solver", n, d, l, trial);

    let x = synthetic_design(n, d, grid.x_bound, data_seed);
    let mut spec = SyntheticSpec::new(n, d, l, data_seed);
    spec.noise_std = grid.noise_std;
    let y = generate_phenotypes(&x, &spec);

    // The non-private optimum and its residual are shared by every cell at
    // this grid point; metrics divide by it, so compute it once.
    let star = ols_optimum(&x, &y).map(|w| residual_frob_sq(&x, &y, &w));
    let denom = (n * l) as f64;

    let mut out = Vec::new();
    for cell in cells.iter().filter(|c| c.d == d && c.l == l) {
        let row = match star {
            Err(e) => error_row(grid, cell, trial, solver_seed, &format!("optimum failed: {e}")),
            Ok(resid_star) => {
                let cfg = SolverConfig {
                    lambda: grid.lambda,
                    budget: PrivacyBudget::new(cell.eps, grid.delta),
                    mechanism: match cell.method {
                        Method::Projection => Mechanism::Projection,
                        Method::Gauss | Method::Naive => Mechanism::Gauss,
                    },
                    subsample_s: cell.s,
                    seed: solver_seed,
                };
                let sol = match cell.method {
                    Method::Naive => {
                        naive_ssp_baseline(&x, &y, grid.lambda, &cfg.budget, solver_seed)
                    }
                    _ if cell.s.is_some() => subsample_reuse_cov(&x, &y, &cfg),
                    _ => reuse_cov(&x, &y, &cfg),
                };
                match sol {
                    Err(e) => error_row(grid, cell, trial, solver_seed, &format!("{e}")),
                    Ok(sol) => {
                        let resid_hat = residual_frob_sq(&x, &y, &sol.w_hat);
                        ExperimentRow {
                            l,
                            d,
                            n,
                            s: cell.s.unwrap_or(n),
                            epsilon: cell.eps,
                            delta: grid.delta,
                            lambda: grid.lambda,
                            mechanism: cell.method,
                            trial,
                            excess_loss: (resid_hat - resid_star) / denom,
                            loss_ratio: resid_hat / resid_star,
                            runtime_ms: match grid.timing {
                                TimingMode::Wall => sol.wall_times.total_ms(),
                                TimingMode::Zero => 0.0,
                            },
                            seed: solver_seed,
                            status: "ok".to_string(),
                        }
                    }
                }
            }
        };
        out.push((cell.idx, trial, row));
    }
    out
}

/// Serializes rows to the CSV schema
/// `l,d,n,s,epsilon,delta,lambda,mechanism,trial,excess_loss,loss_ratio,runtime_ms,seed,status`
/// with floats at 17 significant digits and LF line endings.
pub fn render_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let status = r.status.replace(',', ";");
        out.push_str(&format!(
            "{},{},{},{},{:.16e},{:.16e},{:.16e},{},{},{:.16e},{:.16e},{:.16e},{},{}\n",
            r.l,
            r.d,
            r.n,
            r.s,
            r.epsilon,
            r.delta,
            r.lambda,
            r.mechanism.label(),
            r.trial,
            r.excess_loss,
            r.loss_ratio,
            r.runtime_ms,
            r.seed,
            status,
        ));
    }
    out
}

pub const CSV_HEADER: &str =
    "l,d,n,s,epsilon,delta,lambda,mechanism,trial,excess_loss,loss_ratio,runtime_ms,seed,status";

/// Writes [`render_csv`] output to `path` (UTF-8, LF).
pub fn emit_csv(rows: &[ExperimentRow], path: &Path) -> Result<()> {
    fs::write(path, render_csv(rows))?;
    Ok(())
}

/// Parses [`render_csv`] output back into rows; the inverse of emission for
/// finite metric values.
pub fn parse_csv(text: &str) -> Result<Vec<ExperimentRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(HarnessError::Data(format!(
                "bad CSV header: {other:?}"
            )))
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 14 {
            return Err(HarnessError::Data(format!(
                "row {}: expected 14 fields, got {}",
                idx + 2,
                fields.len()
            )));
        }
        let bad = |what: &str| HarnessError::Data(format!("row {}: bad {what}", idx + 2));
        rows.push(ExperimentRow {
            l: fields[0].parse().map_err(|_| bad("l"))?,
            d: fields[1].parse().map_err(|_| bad("d"))?,
            n: fields[2].parse().map_err(|_| bad("n"))?,
            s: fields[3].parse().map_err(|_| bad("s"))?,
            epsilon: fields[4].parse().map_err(|_| bad("epsilon"))?,
            delta: fields[5].parse().map_err(|_| bad("delta"))?,
            lambda: fields[6].parse().map_err(|_| bad("lambda"))?,
            mechanism: Method::parse(fields[7])?,
            trial: fields[8].parse().map_err(|_| bad("trial"))?,
            excess_loss: fields[9].parse().map_err(|_| bad("excess_loss"))?,
            loss_ratio: fields[10].parse().map_err(|_| bad("loss_ratio"))?,
            runtime_ms: fields[11].parse().map_err(|_| bad("runtime_ms"))?,
            seed: fields[12].parse().map_err(|_| bad("seed"))?,
            status: fields[13].to_string(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_grid() -> SweepGrid {
        SweepGrid::new(40, vec![3], vec![2], vec![5.0], 1e-4, 0.1, vec![Method::Gauss])
    }

    #[test]
    fn empty_grid_gives_empty_output() {
        let mut grid = tiny_grid();
        grid.l_values.clear();
        let rows = run_sweep(&grid, 3, 7).unwrap();
        assert!(rows.is_empty());
        assert_eq!(render_csv(&rows), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn one_cell_three_trials() {
        let rows = run_sweep(&tiny_grid(), 3, 7).unwrap();
        assert_eq!(rows.len(), 3);
        for (t, row) in rows.iter().enumerate() {
            assert_eq!(row.trial, t);
            assert_eq!(row.status, "ok");
            assert_eq!(row.s, 40);
            assert!(row.loss_ratio >= 1.0 - 1e-9, "ratio {} below 1", row.loss_ratio);
        }
        assert_ne!(rows[0].excess_loss, rows[1].excess_loss);
        assert_ne!(rows[1].excess_loss, rows[2].excess_loss);
    }

    #[test]
    fn rerun_is_byte_identical() {
        let a = run_sweep(&tiny_grid(), 4, 3).unwrap();
        let b = run_sweep(&tiny_grid(), 4, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(render_csv(&a), render_csv(&b));
        let c = run_sweep(&tiny_grid(), 4, 4).unwrap();
        assert_ne!(render_csv(&a), render_csv(&c));
    }

    #[test]
    fn rows_sorted_by_cell_then_trial() {
        let mut grid = tiny_grid();
        grid.methods = vec![Method::Gauss, Method::Projection];
        let rows = run_sweep(&grid, 2, 1).unwrap();
        assert_eq!(rows.len(), 4);
        let order: Vec<(Method, usize)> = rows.iter().map(|r| (r.mechanism, r.trial)).collect();
        assert_eq!(
            order,
            vec![
                (Method::Gauss, 0),
                (Method::Gauss, 1),
                (Method::Projection, 0),
                (Method::Projection, 1),
            ]
        );
    }

    #[test]
    fn row_count_is_grid_times_trials() {
        let mut grid = tiny_grid();
        grid.l_values = vec![2, 3];
        grid.eps_values = vec![1.0, 5.0];
        grid.methods = vec![Method::Gauss, Method::Projection];
        let rows = run_sweep(&grid, 3, 0).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 2 * 3);
    }

    #[test]
    fn methods_share_data_via_common_random_numbers() {
        // Same (d, l, trial) ⇒ same solver seed recorded for every method.
        let mut grid = tiny_grid();
        grid.methods = vec![Method::Gauss, Method::Projection, Method::Naive];
        let rows = run_sweep(&grid, 1, 9).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].seed, rows[1].seed);
        assert_eq!(rows[1].seed, rows[2].seed);
    }

    #[test]
    fn full_sample_subsample_matches_full_run_exactly() {
        let mut grid = tiny_grid();
        grid.s_values = vec![None, Some(40)];
        let rows = run_sweep(&grid, 2, 5).unwrap();
        assert_eq!(rows.len(), 4);
        // Rows 0..2 are s = None, rows 2..4 are s = n; seed-matched, the
        // subsampled covariance at s = n is the full covariance bit for bit.
        for t in 0..2 {
            assert_eq!(rows[t].excess_loss, rows[2 + t].excess_loss);
            assert_eq!(rows[t].loss_ratio, rows[2 + t].loss_ratio);
        }
    }

    #[test]
    fn naive_with_subsample_is_a_config_error() {
        let mut grid = tiny_grid();
        grid.methods = vec![Method::Naive];
        grid.s_values = vec![Some(20)];
        let err = run_sweep(&grid, 1, 0).unwrap_err();
        assert!(matches!(err, HarnessError::Config(_)));
    }

    #[test]
    fn invalid_grid_values_are_config_errors() {
        let mut g = tiny_grid();
        g.eps_values = vec![-1.0];
        assert!(matches!(g.validate(), Err(HarnessError::Config(_))));
        let mut g = tiny_grid();
        g.delta = 1.5;
        assert!(matches!(g.validate(), Err(HarnessError::Config(_))));
        let mut g = tiny_grid();
        g.s_values = vec![Some(41)];
        assert!(matches!(g.validate(), Err(HarnessError::Config(_))));
        let mut g = tiny_grid();
        g.lambda = f64::NAN;
        assert!(matches!(g.validate(), Err(HarnessError::Config(_))));
    }

    #[test]
    fn timing_zero_writes_zero_wall_writes_positive() {
        let mut grid = tiny_grid();
        grid.n = 400;
        grid.d_values = vec![20];
        grid.l_values = vec![10];
        let zero = run_sweep(&grid, 1, 2).unwrap();
        assert_eq!(zero[0].runtime_ms, 0.0);
        grid.timing = TimingMode::Wall;
        let wall = run_sweep(&grid, 1, 2).unwrap();
        assert!(wall[0].runtime_ms > 0.0);
        // Timing does not perturb the metrics.
        assert_eq!(zero[0].excess_loss, wall[0].excess_loss);
    }

    #[test]
    fn method_parse_accepts_cli_spellings() {
        assert_eq!(Method::parse("gauss").unwrap(), Method::Gauss);
        assert_eq!(Method::parse("proj").unwrap(), Method::Projection);
        assert_eq!(Method::parse("projection").unwrap(), Method::Projection);
        assert_eq!(Method::parse("naive").unwrap(), Method::Naive);
        assert!(matches!(Method::parse("fancy"), Err(HarnessError::Config(_))));
    }

    #[test]
    fn csv_round_trips_rows() {
        let rows = run_sweep(&tiny_grid(), 3, 11).unwrap();
        let parsed = parse_csv(&render_csv(&rows)).unwrap();
        assert_eq!(rows, parsed);
    }

    #[test]
    fn csv_header_only_for_zero_rows() {
        let text = render_csv(&[]);
        assert_eq!(text, format!("{CSV_HEADER}\n"));
        assert!(parse_csv(&text).unwrap().is_empty());
    }

    #[test]
    fn csv_sanitizes_commas_in_status() {
        let mut row = run_sweep(&tiny_grid(), 1, 0).unwrap().remove(0);
        row.status = "boom, with comma".to_string();
        let parsed = parse_csv(&render_csv(&[row])).unwrap();
        assert_eq!(parsed[0].status, "boom; with comma");
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(parse_csv("not,a,header\n").is_err());
        let text = format!("{CSV_HEADER}\n1,2,3\n");
        assert!(parse_csv(&text).is_err());
    }
}
