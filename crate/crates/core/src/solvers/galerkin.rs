//! Explicit RK4 oracle for the weighted regularized system.

use super::energy::energy_envelope;
use super::vtransform::{v_mode_coefficients, v_transform, VDirection};
use super::{check_oracle_grid, TerminalData};
use crate::error::{invalid, Error, Result};
use crate::operators::RegConfig;
use crate::spectral::{SpectralField, Trajectory};

/// Integrates `y' = f(t, y)` backward from `times.last()` with classical RK4,
/// taking `ceil(Δ / dt)` equal substeps per output interval. `observe` sees
/// the state at every output time, starting at the terminal one, and may
/// abort the run. Returns states aligned with `times` (increasing).
pub fn rk4_backward<F, O>(f: F, y_final: Vec<f64>, times: &[f64], dt: f64, mut observe: O) -> Result<Vec<Vec<f64>>>
where
    F: Fn(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]) -> Result<()>,
{
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid(format!("step size must be positive, got {dt}")));
    }
    if times.is_empty() || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("stepper grid must be strictly increasing"));
    }
    let n = y_final.len();
    let mut y = y_final;
    let (mut k1, mut k2, mut k3, mut k4, mut tmp) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut out = vec![Vec::new(); times.len()];
    let last = times.len() - 1;
    observe(times[last], &y)?;
    out[last] = y.clone();
    for i in (0..last).rev() {
        let (t0, t1) = (times[i + 1], times[i]);
        let steps = ((t0 - t1) / dt).ceil().max(1.0) as usize;
        let h = -(t0 - t1) / steps as f64;
        for s in 0..steps {
            let t = t0 + s as f64 * h;
            f(t, &y, &mut k1);
            for j in 0..n {
                tmp[j] = y[j] + 0.5 * h * k1[j];
            }
            f(t + 0.5 * h, &tmp, &mut k2);
            for j in 0..n {
                tmp[j] = y[j] + 0.5 * h * k2[j];
            }
            f(t + 0.5 * h, &tmp, &mut k3);
            for j in 0..n {
                tmp[j] = y[j] + h * k3[j];
            }
            f(t + h, &tmp, &mut k4);
            for j in 0..n {
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            }
        }
        observe(t1, &y)?;
        out[i] = y.clone();
    }
    Ok(out)
}

/// RK4 solve of the weighted system from `(f0, ρ f0 + f1)` at `T`, mapped
/// back to `u`. Aborts with [`Error::Unstable`] once the weighted energy
/// leaves ten times its Grönwall envelope.
pub fn galerkin_step_solve(td: &TerminalData, cfg: &RegConfig, rho: f64, dt: f64, times: &[f64]) -> Result<Trajectory> {
    if !(rho > 1.0 && rho.is_finite()) {
        return Err(invalid(format!("rho must exceed 1, got {rho}")));
    }
    check_oracle_grid(times, td.t_final)?;
    let basis = td.basis().clone();
    let n = basis.n_modes();
    let coeffs: Vec<(f64, f64)> =
        basis.eigenvalues().iter().map(|&mu| v_mode_coefficients(mu, cfg.p_symbol(mu), rho)).collect();

    // State layout: [y_1, z_1, y_2, z_2, ...].
    let mut y_final = Vec::with_capacity(2 * n);
    for (&a, &da) in td.f0.coeffs().iter().zip(td.f1.coeffs()) {
        y_final.push(a);
        y_final.push(rho * a + da);
    }
    let rhs = |_t: f64, y: &[f64], dy: &mut [f64]| {
        for (p, &(b0, b1)) in coeffs.iter().enumerate() {
            let (v, dv) = (y[2 * p], y[2 * p + 1]);
            dy[2 * p] = dv;
            dy[2 * p + 1] = b0 * v + b1 * dv;
        }
    };
    let energy = |y: &[f64]| {
        basis
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(p, &mu)| {
                let (v, dv) = (y[2 * p], y[2 * p + 1]);
                dv * dv / (rho - 1.0) + (rho + mu) * v * v
            })
            .sum::<f64>()
    };
    let terminal_energy = energy(&y_final);
    let observe = |t: f64, y: &[f64]| {
        let e = energy(y);
        let envelope = energy_envelope(terminal_energy, cfg, rho, td.t_final, t);
        if !e.is_finite() || e > 10.0 * envelope * (1.0 + 1e-12) {
            return Err(Error::Unstable { t, energy: e, envelope });
        }
        Ok(())
    };
    let states = rk4_backward(rhs, y_final, times, dt, observe)?;

    let mut values = Vec::with_capacity(times.len());
    let mut dvalues = Vec::with_capacity(times.len());
    for y in &states {
        values.push(SpectralField::new(basis.clone(), y.iter().step_by(2).copied().collect())?);
        dvalues.push(SpectralField::new(basis.clone(), y.iter().skip(1).step_by(2).copied().collect())?);
    }
    let traj_v = Trajectory::new(basis, times.to_vec(), values, dvalues)?;
    v_transform(&traj_v, rho, td.t_final, VDirection::FromV)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::regularized_backward_solve;
    use crate::spectral::{build_basis, uniform_grid};
    use std::f64::consts::PI;

    fn band_limited(n_modes: usize, active: usize) -> TerminalData {
        let basis = build_basis(PI, n_modes).unwrap();
        let f0 =
            SpectralField::from_fn(basis.clone(), |i, _| if i < active { 1.0 / (i + 1) as f64 } else { 0.0 }).unwrap();
        let f1 =
            SpectralField::from_fn(basis, |i, mu| if i < active { -0.5 * mu.sqrt() / (i + 1) as f64 } else { 0.0 })
                .unwrap();
        TerminalData::new(f0, f1, 0.5).unwrap()
    }

    #[test]
    fn rk4_scalar_decay_is_fourth_order() {
        let times = [0.0, 1.0];
        let err = |dt: f64| {
            let out = rk4_backward(|_, y, dy| dy[0] = y[0], vec![1.0], &times, dt, |_, _| Ok(())).unwrap();
            (out[0][0] - (-1.0f64).exp()).abs()
        };
        let ratio = err(0.1) / err(0.05);
        assert!((ratio - 16.0).abs() < 1.0, "ratio {ratio}");
    }

    #[test]
    fn zero_data_gives_zero_trajectory() {
        let td = TerminalData::zeros(build_basis(PI, 4).unwrap(), 0.5).unwrap();
        let cfg = RegConfig::with_gamma(0.01, 4f64.exp()).unwrap();
        let traj = galerkin_step_solve(&td, &cfg, cfg.rho, 1e-3, &uniform_grid(0.5, 11).unwrap()).unwrap();
        assert!(traj.values().iter().all(SpectralField::is_zero));
    }

    #[test]
    fn all_low_modes_match_closed_form() {
        // γ = e^{40}: cutoff 20, so μ ∈ {1, 4, 9, 16} are all low.
        let td = band_limited(4, 4);
        let cfg = RegConfig::with_gamma(0.0, 40f64.exp()).unwrap();
        let times = uniform_grid(0.5, 51).unwrap();
        let exact = regularized_backward_solve(&td, &cfg, &times).unwrap();
        let stepped = galerkin_step_solve(&td, &cfg, 2.0, 1e-4, &times).unwrap();
        let d = stepped.relative_sup_distance(&exact).unwrap();
        assert!(d <= 1e-8, "distance {d}");
    }

    #[test]
    fn halving_dt_shows_fourth_order() {
        let td = band_limited(8, 8);
        let cfg = RegConfig::with_gamma(0.01, 4f64.exp()).unwrap();
        let times = uniform_grid(0.5, 6).unwrap();
        let exact = regularized_backward_solve(&td, &cfg, &times).unwrap();
        let err =
            |dt| galerkin_step_solve(&td, &cfg, cfg.rho, dt, &times).unwrap().relative_sup_distance(&exact).unwrap();
        let ratio = err(4e-3) / err(2e-3);
        assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
    }

    #[test]
    fn oversized_step_trips_the_detector() {
        let td = band_limited(16, 16);
        let cfg = RegConfig::with_gamma(0.01, 4f64.exp()).unwrap();
        let times = uniform_grid(0.5, 11).unwrap();
        let err = galerkin_step_solve(&td, &cfg, cfg.rho, 0.05, &times).unwrap_err();
        assert!(matches!(err, Error::Unstable { .. }), "{err:?}");
    }

    #[test]
    fn bad_arguments() {
        let td = band_limited(2, 2);
        let cfg = RegConfig::with_gamma(0.01, 4f64.exp()).unwrap();
        let times = uniform_grid(0.5, 3).unwrap();
        assert!(galerkin_step_solve(&td, &cfg, 1.0, 1e-3, &times).is_err());
        assert!(galerkin_step_solve(&td, &cfg, 2.0, 0.0, &times).is_err());
        assert!(galerkin_step_solve(&td, &cfg, 2.0, 1e-3, &[0.0, 0.25]).is_err());
    }
}
