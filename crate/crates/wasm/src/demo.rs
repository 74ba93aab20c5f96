use std::f64::consts::PI;

use qrwave::experiments::{add_noise, convergence_sweep, NoiseMode, NoiseSpec, SweepConfig, TruthSpec};
use qrwave::solvers::{naive_backward_solve, regularized_backward_solve};
use qrwave::{Error, RegConfig, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profiles {
    pub x: Vec<f64>,
    pub truth: Vec<f64>,
    pub naive: Vec<f64>,
    pub regularized: Vec<f64>,
    pub gamma: f64,
    pub cutoff: f64,
    pub naive_overflow: bool,
    /// Relative L² errors at `t` (infinite after overflow).
    pub naive_error: f64,
    pub regularized_error: f64,
}

/// Band-limited truth on `(0, π)`, noisy terminal data at `T = 0.5`, then the
/// naive and regularized backward solves evaluated at `t`.
pub fn reconstruct(eps: f64, t: f64, n_modes: usize, seed: u64, x_count: usize) -> Result<Profiles> {
    if x_count < 2 {
        return Err(invalid("need at least two x points"));
    }
    let spec = TruthSpec { n_modes, grid_count: 2, ..TruthSpec::band_limited() };
    if !(0.0..=spec.t_final).contains(&t) {
        return Err(invalid(format!("t must lie in [0, {}]", spec.t_final)));
    }
    let m = spec.manufacture()?;
    let cfg = RegConfig::sqrt_schedule(eps, 2.0, 1.0, 1.0)?;
    let noisy = add_noise(&m.terminal, &NoiseSpec::new(eps, seed, NoiseMode::H1L2)?)?;
    let times = [t];
    let truth = qrwave::solvers::forward_solve(&m.truth.values()[0], &m.truth.dvalues()[0], &times)?;
    let naive = naive_backward_solve(&noisy, &times)?.trajectory;
    let reg = regularized_backward_solve(&noisy, &cfg, &times)?;

    let x: Vec<f64> = (0..x_count).map(|i| PI * i as f64 / (x_count - 1) as f64).collect();
    let exact = &truth.values()[0];
    let scale = exact.norm_l2();
    let naive_overflow = naive.invalid_mask()[0];
    let (naive_profile, naive_error) = if naive_overflow {
        (vec![f64::NAN; x_count], f64::INFINITY)
    } else {
        let u = &naive.values()[0];
        (u.synthesize(&x)?, u.sub(exact)?.norm_l2() / scale)
    };
    Ok(Profiles {
        truth: exact.synthesize(&x)?,
        naive: naive_profile,
        regularized: reg.values()[0].synthesize(&x)?,
        regularized_error: reg.values()[0].sub(exact)?.norm_l2() / scale,
        naive_error,
        naive_overflow,
        gamma: cfg.gamma,
        cutoff: cfg.cutoff,
        x,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepCurve {
    pub eps: Vec<f64>,
    pub error: Vec<f64>,
    /// `sqrt(Ĉ · shape)` with `Ĉ` the largest observed ratio.
    pub envelope: Vec<f64>,
    pub slope: f64,
    pub predicted_slope: f64,
    pub spread: f64,
}

/// Convergence sweep over `eps_count` log-spaced levels in `[1e-6, 1e-2]`.
/// `metric` is 1 (L²), 2 (gradient) or 3 (velocity); `t` snaps to the
/// nearest output time.
pub fn sweep_curve(metric: usize, t: f64, eps_count: usize) -> Result<SweepCurve> {
    if !(1..=3).contains(&metric) {
        return Err(invalid(format!("metric must be 1, 2 or 3, got {metric}")));
    }
    if !(2..=40).contains(&eps_count) {
        return Err(invalid(format!("eps_count must lie in 2..=40, got {eps_count}")));
    }
    let eps_grid = (0..eps_count).map(|i| 10f64.powf(-2.0 - 4.0 * i as f64 / (eps_count - 1) as f64)).collect();
    let config = SweepConfig { eps_grid, times_of_interest: vec![t], ..SweepConfig::standard() };
    let report = convergence_sweep(&config)?;
    let k = metric - 1;
    let fit = &report.slopes[k];
    let ratios: Vec<f64> = report.rows.iter().map(|r| r.ratio[k]).collect();
    let c_hat = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SweepCurve {
        eps: report.rows.iter().map(|r| r.eps).collect(),
        error: report.rows.iter().map(|r| r.error[k]).collect(),
        envelope: report.rows.iter().map(|r| (c_hat * r.bound[k]).sqrt()).collect(),
        slope: fit.measured.unwrap_or(f64::NAN),
        predicted_slope: fit.predicted,
        spread: if min > 0.0 { c_hat / min } else { f64::INFINITY },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Symbols {
    pub mu: Vec<f64>,
    pub q: Vec<f64>,
    pub p: Vec<f64>,
}

pub fn symbols(gamma: f64, mu_max: f64, count: usize) -> Result<Symbols> {
    if count < 2 || !(mu_max > 0.0 && mu_max.is_finite()) {
        return Err(invalid("need at least two points on a positive range"));
    }
    let cfg = RegConfig::with_gamma(0.0, gamma)?;
    let mu: Vec<f64> = (0..count).map(|i| mu_max * i as f64 / (count - 1) as f64).collect();
    Ok(Symbols {
        q: mu.iter().map(|&m| cfg.q_symbol(m)).collect(),
        p: mu.iter().map(|&m| cfg.p_symbol(m)).collect(),
        mu,
    })
}
