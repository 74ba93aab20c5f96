//! Cross-solver and energy checks shared by the command line and tests.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::rng;
use crate::solvers::{
    energy_envelope_ratio, energy_series, galerkin_step_solve, picard_solve, regularized_backward_solve, v_transform,
    PicardOptions, TerminalData, VDirection,
};
use crate::spectral::{build_basis, uniform_grid, SpectralField, Trajectory};

/// Relative slack allowed by the energy and triangle checks.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSetup {
    pub length: f64,
    pub n_modes: usize,
    /// Terminal data is nonzero on modes `1..=active_modes` only.
    pub active_modes: usize,
    pub t_final: f64,
    pub grid_count: usize,
    pub gamma: f64,
    pub c1: f64,
    pub dt: f64,
    pub picard_iterations: usize,
    pub picard_max_step: f64,
    pub seed: u64,
}

impl Default for OracleSetup {
    fn default() -> Self {
        Self {
            length: std::f64::consts::PI,
            n_modes: 16,
            active_modes: 8,
            t_final: 0.5,
            grid_count: 101,
            gamma: 4f64.exp(),
            c1: 1.0,
            dt: 1e-4,
            picard_iterations: 200,
            picard_max_step: 1e-5,
            seed: 2024,
        }
    }
}

impl OracleSetup {
    fn reg_config(&self) -> Result<RegConfig> {
        RegConfig::new(0.0, self.gamma, 2.0, self.c1, 1.0)
    }

    /// Seeded Gaussian terminal data for draw `index`.
    pub fn terminal_data(&self, index: u64) -> Result<TerminalData> {
        if self.active_modes > self.n_modes {
            return Err(invalid("more active modes than basis modes"));
        }
        let basis = build_basis(self.length, self.n_modes)?;
        let mut stream = rng::stream(self.seed, index);
        let mut draw = || {
            let mut c = rng::normals(&mut stream, self.active_modes);
            c.resize(self.n_modes, 0.0);
            SpectralField::new(basis.clone(), c)
        };
        let f0 = draw()?;
        let f1 = draw()?;
        TerminalData::new(f0, f1, self.t_final)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangleReport {
    pub closed_vs_rk4: f64,
    pub closed_vs_picard: f64,
    pub rk4_vs_picard: f64,
    pub picard_windows: usize,
    pub pass: bool,
}

impl TriangleReport {
    pub fn max_distance(&self) -> f64 {
        self.closed_vs_rk4.max(self.closed_vs_picard).max(self.rk4_vs_picard)
    }
}

/// Closed form, RK4 and Picard on the same terminal data, compared pairwise
/// in relative sup norm.
pub fn oracle_triangle(setup: &OracleSetup) -> Result<TriangleReport> {
    let cfg = setup.reg_config()?;
    let td = setup.terminal_data(0)?;
    let times = uniform_grid(setup.t_final, setup.grid_count)?;
    let closed = regularized_backward_solve(&td, &cfg, &times)?;
    let rk4 = galerkin_step_solve(&td, &cfg, cfg.rho, setup.dt, &times)?;
    let opts = PicardOptions {
        iterations: setup.picard_iterations,
        max_step: setup.picard_max_step,
        ..PicardOptions::default()
    };
    let picard = picard_solve(&td, &cfg, cfg.rho, &times, &opts)?;
    let closed_vs_rk4 = rk4.relative_sup_distance(&closed)?;
    let closed_vs_picard = picard.trajectory.relative_sup_distance(&closed)?;
    let rk4_vs_picard = picard.trajectory.relative_sup_distance(&rk4)?;
    let pass = [closed_vs_rk4, closed_vs_picard, rk4_vs_picard].iter().all(|&d| d <= ORACLE_TOLERANCE);
    Ok(TriangleReport { closed_vs_rk4, closed_vs_picard, rk4_vs_picard, picard_windows: picard.windows, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyCheckReport {
    pub rho: f64,
    /// Per draw, `max_t E(t) / (E(T) γ^{2 C1 ρ (T-t)})`.
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub pass: bool,
}

/// Weighted energy of RK4 runs on `samples` random terminal data against the
/// Grönwall envelope, with `ρ = C1 log γ`.
pub fn energy_check(setup: &OracleSetup, samples: usize) -> Result<EnergyCheckReport> {
    let cfg = setup.reg_config()?;
    if !(cfg.rho >= 2.0) {
        return Err(invalid(format!("energy check needs rho = C1 log(gamma) >= 2, got {}", cfg.rho)));
    }
    let times = uniform_grid(setup.t_final, setup.grid_count)?;
    let ratios = crate::par::map_indexed(samples, |i| {
        let td = setup.terminal_data(i as u64)?;
        let traj = galerkin_step_solve(&td, &cfg, cfg.rho, setup.dt, &times)?;
        draw_ratio(&traj, &cfg, setup.t_final)
    })?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    Ok(EnergyCheckReport { rho: cfg.rho, pass: max_ratio <= 1.0 + ORACLE_TOLERANCE, ratios, max_ratio })
}

fn draw_ratio(traj: &Trajectory, cfg: &RegConfig, t_final: f64) -> Result<f64> {
    let v = v_transform(traj, cfg.rho, t_final, VDirection::ToV)?;
    let series = energy_series(&v, cfg.rho)?;
    energy_envelope_ratio(&series, cfg, cfg.rho, t_final)
}
