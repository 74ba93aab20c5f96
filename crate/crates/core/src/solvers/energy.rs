use serde::Serialize;

use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::spectral::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySample {
    pub t: f64,
    pub energy: f64,
}

/// `E(t) = ‖v_t‖² / (ρ - 1) + ρ‖v‖² + ‖∇v‖²` along a trajectory in v-variables.
pub fn energy_series(traj_v: &Trajectory, rho: f64) -> Result<Vec<EnergySample>> {
    if !(rho > 1.0) {
        return Err(invalid(format!("energy needs rho > 1, got {rho}")));
    }
    Ok(traj_v
        .times()
        .iter()
        .zip(traj_v.values().iter().zip(traj_v.dvalues()))
        .map(|(&t, (v, dv))| {
            let dv2 = dv.norm_l2().powi(2);
            let v2 = v.norm_l2().powi(2);
            let g2 = v.norm_grad().powi(2);
            EnergySample { t, energy: dv2 / (rho - 1.0) + rho * v2 + g2 }
        })
        .collect())
}

/// Envelope `E(T) γ^{2 C1 ρ (T - t)}`.
pub fn energy_envelope(terminal_energy: f64, cfg: &RegConfig, rho: f64, t_final: f64, t: f64) -> f64 {
    terminal_energy * (2.0 * cfg.c1 * rho * (t_final - t) * cfg.log_gamma()).exp()
}

/// `max_t E(t) / envelope(t)`; the sample at `T` is the anchor.
pub fn energy_envelope_ratio(series: &[EnergySample], cfg: &RegConfig, rho: f64, t_final: f64) -> Result<f64> {
    let terminal = series
        .iter()
        .find(|s| (s.t - t_final).abs() <= 1e-12 * t_final)
        .ok_or_else(|| invalid("energy series has no sample at T"))?
        .energy;
    Ok(series
        .iter()
        .map(|s| {
            let env = energy_envelope(terminal, cfg, rho, t_final, s.t);
            if s.energy == 0.0 {
                0.0
            } else {
                s.energy / env
            }
        })
        .fold(0.0, f64::max))
}
