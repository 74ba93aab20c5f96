use serde::Serialize;

use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::solvers::{naive_backward_solve, regularized_backward_solve, TerminalData};
use crate::spectral::{build_basis, SpectralField};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IllposedReport {
    pub mu: f64,
    pub t_final: f64,
    /// `|a(0)| / |a(T)|` of the naive backward solve; `None` on overflow.
    pub amplification: Option<f64>,
    /// `e^{μ T}` (as `μ T` in log form when that overflows).
    pub predicted: f64,
    pub log_predicted: f64,
    pub relative_error: Option<f64>,
    pub overflow: Option<String>,
    /// Same data through the regularized solver.
    pub regularized_amplification: f64,
    /// `2 e^{T}`.
    pub regularized_limit: f64,
}

/// Terminal data `(ε, -μ ε)` on mode `p` sits on the `e^{-μ t}` branch, which
/// the naive backward solve amplifies by `e^{μ T}`.
pub fn illposedness_demo(length: f64, mode: usize, t_final: f64, eps: f64, cfg: &RegConfig) -> Result<IllposedReport> {
    if mode == 0 {
        return Err(invalid("modes are numbered from 1"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(invalid(format!("noise amplitude must be positive, got {eps}")));
    }
    let basis = build_basis(length, mode)?;
    let p = mode - 1;
    let mu = basis.mu(p);
    let td = TerminalData::new(
        SpectralField::single_mode(basis.clone(), p, eps)?,
        SpectralField::single_mode(basis, p, -mu * eps)?,
        t_final,
    )?;
    let times = [0.0, t_final];
    let naive = naive_backward_solve(&td, &times)?;
    let log_predicted = mu * t_final;
    let predicted = log_predicted.exp();
    let (amplification, relative_error, overflow) = if naive.trajectory.invalid_mask()[0] {
        (None, None, Some(format!("exceeds floating range at mu_p*T = {log_predicted}")))
    } else {
        let amp = naive.trajectory.values()[0].coeffs()[p].abs() / eps;
        (Some(amp), Some((amp - predicted).abs() / predicted), None)
    };
    let reg = regularized_backward_solve(&td, cfg, &times)?;
    Ok(IllposedReport {
        mu,
        t_final,
        amplification,
        predicted,
        log_predicted,
        relative_error,
        overflow,
        regularized_amplification: reg.values()[0].coeffs()[p].abs() / eps,
        regularized_limit: 2.0 * t_final.exp(),
    })
}
