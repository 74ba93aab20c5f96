use serde::Serialize;

use super::assumptions::check_assumptions;
use crate::error::{Error, Result};
use crate::operators::RegConfig;
use crate::spectral::{trapezoid, Trajectory};

/// Pointwise-in-time reconstruction errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub times: Vec<f64>,
    pub err_l2: Vec<f64>,
    pub err_grad: Vec<f64>,
    pub err_dt: Vec<f64>,
    /// `∫_t^T ‖∇(u^ε_t - u_t)‖² ds`.
    pub err_dtgrad_int: Vec<f64>,
}

impl ErrorReport {
    /// The three squared left-hand sides at grid index `i`:
    /// `‖e‖²`, `‖∇e‖²`, `‖e_t‖² + ∫_t^T ‖∇e_t‖²`.
    pub fn squared_metrics(&self, i: usize) -> [f64; 3] {
        [self.err_l2[i].powi(2), self.err_grad[i].powi(2), self.err_dt[i].powi(2) + self.err_dtgrad_int[i]]
    }
}

pub fn error_report(reconstructed: &Trajectory, truth: &Trajectory) -> Result<ErrorReport> {
    reconstructed.check_compatible(truth)?;
    let n = truth.len();
    let mut err_l2 = Vec::with_capacity(n);
    let mut err_grad = Vec::with_capacity(n);
    let mut err_dt = Vec::with_capacity(n);
    let mut dtgrad_sq = Vec::with_capacity(n);
    for i in 0..n {
        let e = reconstructed.values()[i].sub(&truth.values()[i])?;
        let de = reconstructed.dvalues()[i].sub(&truth.dvalues()[i])?;
        err_l2.push(e.norm_l2());
        err_grad.push(e.norm_grad());
        err_dt.push(de.norm_l2());
        dtgrad_sq.push(de.norm_grad().powi(2));
    }
    let times = truth.times();
    let mut err_dtgrad_int = vec![0.0; n];
    for i in (0..n.saturating_sub(1)).rev() {
        err_dtgrad_int[i] = err_dtgrad_int[i + 1] + trapezoid(&times[i..i + 2], &dtgrad_sq[i..i + 2]);
    }
    Ok(ErrorReport { times: times.to_vec(), err_l2, err_grad, err_dt, err_dtgrad_int })
}

/// The three right-hand-side shapes of the error estimate at time `t`,
/// without the constant:
/// `ε + γ^x / log γ`, `ε log γ + γ^x`, `ε log²γ + γ^x log γ`,
/// where `x = 3 C1 (T - t) - 2`.
pub fn bound_shapes(cfg: &RegConfig, t_final: f64, t: f64) -> [f64; 3] {
    let lg = cfg.log_gamma();
    let g = cfg.gamma.powf(3.0 * cfg.c1 * (t_final - t) - 2.0);
    [cfg.eps + g / lg, lg * cfg.eps + g, lg * lg * cfg.eps + lg * g]
}

/// [`bound_shapes`] on every report time; refuses when the assumptions fail.
pub fn error_envelope(report: &ErrorReport, cfg: &RegConfig, t_final: f64) -> Result<Vec<[f64; 3]>> {
    let check = check_assumptions(cfg, t_final);
    if !check.ok {
        return Err(Error::Assumption(check.summary()));
    }
    Ok(report.times.iter().map(|&t| bound_shapes(cfg, t_final, t)).collect())
}

/// `M = sup_t ‖u(t)‖²_W + ∫_0^T ‖u_t‖²_W dt` with `W = G_{1,1}`.
pub fn gevrey_mass(truth: &Trajectory) -> Result<f64> {
    let mut sup = 0.0f64;
    let mut dt_sq = Vec::with_capacity(truth.len());
    for (u, du) in truth.values().iter().zip(truth.dvalues()) {
        sup = sup.max(u.norm_gevrey(1.0, 1.0)?.powi(2));
        dt_sq.push(du.norm_gevrey(1.0, 1.0)?.powi(2));
    }
    let m = sup + trapezoid(truth.times(), &dt_sq);
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::Range("Gevrey mass of the truth overflows".into()))
    }
}
