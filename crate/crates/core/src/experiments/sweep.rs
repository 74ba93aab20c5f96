use serde::{Deserialize, Serialize};

use super::assumptions::check_assumptions;
use super::metrics::{bound_shapes, error_report, gevrey_mass, ErrorReport};
use super::noise::{add_noise, NoiseMode, NoiseSpec};
use super::truth::{Manufactured, TruthSpec};
use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::solvers::regularized_backward_solve;

/// Allowed deviation of a fitted slope from the shape-predicted one.
pub const SLOPE_TOLERANCE: f64 = 0.15;
/// Allowed max/min spread of the envelope ratio across the noise grid.
pub const SPREAD_LIMIT: f64 = 50.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub truth: TruthSpec,
    pub eps_grid: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    pub k: f64,
    pub times_of_interest: Vec<f64>,
    /// `None` leaves the terminal data exact; `ε` then only sets `γ`.
    pub noise: Option<NoiseMode>,
    pub seed: u64,
}

impl SweepConfig {
    /// `ε ∈ {1e-2, …, 1e-6}`, `C0 = 2`, `C1 = 1`, `K = 1`, times
    /// `{0, 0.25, 0.45}`, H¹×L² noise, dense Gevrey truth.
    pub fn standard() -> Self {
        Self {
            truth: TruthSpec::dense_gevrey(),
            eps_grid: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            c0: 2.0,
            c1: 1.0,
            k: 1.0,
            times_of_interest: vec![0.0, 0.25, 0.45],
            noise: Some(NoiseMode::H1L2),
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedEps {
    pub eps: f64,
    pub reason: String,
}

/// One `(ε, t)` sample. Error entries are norms (`err_l2`, `err_grad`,
/// `sqrt(‖e_t‖² + ∫_t^T ‖∇e_t‖²)`); ratios are `error² / bound`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps: f64,
    pub gamma: f64,
    pub t: f64,
    pub error: [f64; 3],
    pub bound: [f64; 3],
    pub ratio: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeFit {
    /// 1-based metric index.
    pub metric: usize,
    pub t: f64,
    /// Least-squares slope of `log error` against `log ε`.
    pub measured: Option<f64>,
    /// Same fit applied to `½ log bound`.
    pub predicted: f64,
    /// `min(1, 1 - 3 C1 (T - t)/2) / 2`, the bound exponent without log factors.
    pub pure_exponent: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    /// Admissible noise levels, strictly decreasing.
    pub eps_grid: Vec<f64>,
    pub gammas: Vec<f64>,
    pub skipped: Vec<SkippedEps>,
    pub times_of_interest: Vec<f64>,
    pub rows: Vec<SweepRow>,
    #[serde(skip)]
    pub reports: Vec<ErrorReport>,
    pub slopes: Vec<SlopeFit>,
    /// Largest observed ratio per metric.
    pub c_hat: [f64; 3],
    /// Per metric, the largest max/min ratio spread across `ε` at a fixed time.
    pub spread: [f64; 3],
    pub gevrey_mass: f64,
}

impl SweepReport {
    pub fn envelope_ok(&self) -> bool {
        self.spread.iter().all(|&s| s <= SPREAD_LIMIT)
    }

    pub fn slopes_ok(&self) -> bool {
        self.slopes.iter().all(|s| s.within_tolerance)
    }
}

enum Outcome<T> {
    Done(T),
    Skipped(SkippedEps),
}

struct PointResult {
    cfg: RegConfig,
    report: ErrorReport,
}

/// Sorted (descending) and validated noise grid.
fn prepare_grid(eps_grid: &[f64]) -> Result<Vec<f64>> {
    if eps_grid.is_empty() {
        return Err(invalid("empty noise grid"));
    }
    if let Some(bad) = eps_grid.iter().find(|&&e| !(e > 0.0 && e < 1.0)) {
        return Err(invalid(format!("noise levels must lie in (0, 1), got {bad}")));
    }
    let mut grid = eps_grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    if grid.windows(2).any(|w| w[0] == w[1]) {
        return Err(invalid("noise grid contains duplicates"));
    }
    Ok(grid)
}

fn run_points(config: &SweepConfig, m: &Manufactured, grid: &[f64]) -> Result<Vec<Outcome<PointResult>>> {
    let t_final = config.truth.t_final;
    crate::par::map_indexed(grid.len(), |i| {
        let eps = grid[i];
        let cfg = RegConfig::sqrt_schedule(eps, config.c0, config.c1, config.k)?;
        let check = check_assumptions(&cfg, t_final);
        if !check.ok {
            return Ok(Outcome::Skipped(SkippedEps { eps, reason: check.summary() }));
        }
        let terminal = match config.noise {
            Some(mode) => add_noise(&m.terminal, &NoiseSpec::new(eps, config.seed, mode)?)?,
            None => m.terminal.clone(),
        };
        let recon = regularized_backward_solve(&terminal, &cfg, m.truth.times())?;
        let report = error_report(&recon, &m.truth)?;
        Ok(Outcome::Done(PointResult { cfg, report }))
    })
}

fn time_indices(times: &[f64], wanted: &[f64]) -> Result<Vec<usize>> {
    let scale = times.last().copied().unwrap_or(1.0).abs().max(1.0);
    wanted
        .iter()
        .map(|&t| {
            times
                .iter()
                .position(|&s| (s - t).abs() <= 1e-9 * scale)
                .ok_or_else(|| invalid(format!("time of interest {t} is not on the grid")))
        })
        .collect()
}

/// Least-squares slope of `y` against `x`; `None` with fewer than two points.
pub fn fit_slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Some(sxy / sxx)
}

fn spread_of(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(0.0, f64::max);
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    if max == 0.0 {
        1.0
    } else if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Manufacture truth, perturb, reconstruct and compare for each `ε` under
/// `γ = ε^{-1/2}`; inadmissible `ε` are skipped with a diagnostic.
pub fn convergence_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let grid = prepare_grid(&config.eps_grid)?;
    let m = config.truth.manufacture()?;
    let t_final = config.truth.t_final;
    let idx = time_indices(m.truth.times(), &config.times_of_interest)?;
    let mass = gevrey_mass(&m.truth)?;

    let mut eps_grid = Vec::new();
    let mut gammas = Vec::new();
    let mut skipped = Vec::new();
    let mut points = Vec::new();
    for outcome in run_points(config, &m, &grid)? {
        match outcome {
            Outcome::Done(p) => {
                eps_grid.push(p.cfg.eps);
                gammas.push(p.cfg.gamma);
                points.push(p);
            }
            Outcome::Skipped(s) => skipped.push(s),
        }
    }

    let mut rows = Vec::new();
    for p in &points {
        for &i in &idx {
            let t = m.truth.times()[i];
            let sq = p.report.squared_metrics(i);
            let bound = bound_shapes(&p.cfg, t_final, t);
            rows.push(SweepRow {
                eps: p.cfg.eps,
                gamma: p.cfg.gamma,
                t,
                error: sq.map(f64::sqrt),
                bound,
                ratio: [0, 1, 2].map(|k| sq[k] / bound[k]),
            });
        }
    }

    let mut c_hat = [0.0f64; 3];
    let mut spread = [1.0f64; 3];
    let mut slopes = Vec::new();
    let log_eps: Vec<f64> = eps_grid.iter().map(|e| e.ln()).collect();
    for (j, &i) in idx.iter().enumerate() {
        let t = m.truth.times()[i];
        let at_t: Vec<&SweepRow> = rows.iter().skip(j).step_by(idx.len()).collect();
        for k in 0..3 {
            let ratios: Vec<f64> = at_t.iter().map(|r| r.ratio[k]).collect();
            c_hat[k] = ratios.iter().copied().fold(c_hat[k], f64::max);
            if !ratios.is_empty() {
                spread[k] = spread[k].max(spread_of(&ratios));
            }
            let (xs, ys): (Vec<f64>, Vec<f64>) =
                log_eps.iter().zip(&at_t).filter(|(_, r)| r.error[k] > 0.0).map(|(&x, r)| (x, r.error[k].ln())).unzip();
            let measured = fit_slope(&xs, &ys);
            let half_log_bound: Vec<f64> = at_t.iter().map(|r| 0.5 * r.bound[k].ln()).collect();
            let predicted = fit_slope(&log_eps, &half_log_bound).unwrap_or(f64::NAN);
            let pure_exponent = 0.5 * (1.0f64).min(1.0 - 1.5 * config.c1 * (t_final - t));
            let within_tolerance = measured.is_some_and(|s| (s - predicted).abs() <= SLOPE_TOLERANCE);
            slopes.push(SlopeFit { metric: k + 1, t, measured, predicted, pure_exponent, within_tolerance });
        }
    }

    Ok(SweepReport {
        eps_grid,
        gammas,
        skipped,
        times_of_interest: idx.iter().map(|&i| m.truth.times()[i]).collect(),
        rows,
        reports: points.into_iter().map(|p| p.report).collect(),
        slopes,
        c_hat,
        spread,
        gevrey_mass: mass,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeakNoiseReport {
    pub eps_grid: Vec<f64>,
    pub gammas: Vec<f64>,
    pub skipped: Vec<SkippedEps>,
    /// `sup_t ‖e(t)‖² (log γ)²` per `ε`.
    pub ratios: Vec<f64>,
    pub spread: f64,
}

impl WeakNoiseReport {
    pub fn bounded(&self) -> bool {
        self.spread <= SPREAD_LIMIT
    }
}

/// Logarithmic-rate check under pure L² noise on `f0`.
pub fn weak_noise_experiment(config: &SweepConfig) -> Result<WeakNoiseReport> {
    if config.noise == Some(NoiseMode::H1L2) {
        return Err(invalid("the weak-noise experiment needs l2only noise (or none)"));
    }
    let grid = prepare_grid(&config.eps_grid)?;
    let m = config.truth.manufacture()?;
    let mut out = WeakNoiseReport {
        eps_grid: Vec::new(),
        gammas: Vec::new(),
        skipped: Vec::new(),
        ratios: Vec::new(),
        spread: 1.0,
    };
    for outcome in run_points(config, &m, &grid)? {
        match outcome {
            Outcome::Done(p) => {
                let sup = p.report.err_l2.iter().map(|e| e * e).fold(0.0, f64::max);
                out.eps_grid.push(p.cfg.eps);
                out.gammas.push(p.cfg.gamma);
                out.ratios.push(sup * p.cfg.log_gamma().powi(2));
            }
            Outcome::Skipped(s) => out.skipped.push(s),
        }
    }
    if !out.ratios.is_empty() {
        out.spread = spread_of(&out.ratios);
    }
    Ok(out)
}
