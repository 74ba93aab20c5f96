//! Weighted variable `v = e^{ρ(t-T)} u`, `v_t = e^{ρ(t-T)} u_t + ρ v`.

use serde::Serialize;

use crate::error::Result;
use crate::spectral::{SpectralField, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VDirection {
    ToV,
    FromV,
}

pub fn v_transform(traj: &Trajectory, rho: f64, t_final: f64, direction: VDirection) -> Result<Trajectory> {
    let mut values = Vec::with_capacity(traj.len());
    let mut dvalues = Vec::with_capacity(traj.len());
    for ((&t, u), du) in traj.times().iter().zip(traj.values()).zip(traj.dvalues()) {
        let weight = (rho * (t - t_final)).exp();
        let (a, da): (Vec<f64>, Vec<f64>) = match direction {
            VDirection::ToV => u
                .coeffs()
                .iter()
                .zip(du.coeffs())
                .map(|(&x, &dx)| {
                    let v = weight * x;
                    (v, weight * dx + rho * v)
                })
                .unzip(),
            VDirection::FromV => {
                u.coeffs().iter().zip(du.coeffs()).map(|(&v, &dv)| (v / weight, (dv - rho * v) / weight)).unzip()
            }
        };
        values.push(SpectralField::new(traj.basis().clone(), a)?);
        dvalues.push(SpectralField::new(traj.basis().clone(), da)?);
    }
    Trajectory::new(traj.basis().clone(), traj.times().to_vec(), values, dvalues)
}

/// Per-mode first-order form of the weighted regularized equation:
/// `y' = z`, `z' = b0 y + b1 z`, with `p` the stabilizing symbol.
pub(crate) fn v_mode_coefficients(mu: f64, p: f64, rho: f64) -> (f64, f64) {
    let b0 = -(rho * rho + (mu - 1.0) * rho - mu) + (1.0 - rho) * p;
    let b1 = -(1.0 - 2.0 * rho - mu) + p;
    (b0, b1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_basis;
    use std::f64::consts::PI;

    fn constant_traj(value: f64, times: &[f64]) -> Trajectory {
        let basis = build_basis(PI, 1).unwrap();
        let u = SpectralField::single_mode(basis.clone(), 0, value).unwrap();
        let du = SpectralField::zeros(basis.clone());
        Trajectory::new(basis, times.to_vec(), vec![u; times.len()], vec![du; times.len()]).unwrap()
    }

    #[test]
    fn mode_coefficients_match_shifted_roots() {
        // v = e^{ρ(t-T)} u shifts every characteristic root by ρ.
        for (mu, p, r) in [(9.0, 0.0, (-1.0, 9.0)), (1.5, -3.0, (-1.0, -1.5))] {
            let rho = 2.5;
            let (b0, b1) = v_mode_coefficients(mu, p, rho);
            for root in [r.0 + rho, r.1 + rho] {
                assert!((root * root - b1 * root - b0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn terminal_slice_is_unchanged_in_value() {
        let traj = constant_traj(3.0, &[0.0, 1.0]);
        let v = v_transform(&traj, 5.0, 1.0, VDirection::ToV).unwrap();
        assert_eq!(v.values()[1].coeffs()[0], 3.0);
    }

    #[test]
    fn hand_computed_weighting() {
        let traj = constant_traj(1.0, &[0.0, 1.0]);
        let v = v_transform(&traj, 2.0, 1.0, VDirection::ToV).unwrap();
        let w = (-2.0f64).exp();
        assert!((v.values()[0].coeffs()[0] - w).abs() < 1e-16);
        assert!((v.dvalues()[0].coeffs()[0] - 2.0 * w).abs() < 1e-16);
    }

    #[test]
    fn round_trip_is_identity_to_rounding() {
        let basis = build_basis(PI, 3).unwrap();
        let times = vec![0.0, 0.3, 0.5];
        let u: Vec<_> =
            times.iter().map(|t| SpectralField::new(basis.clone(), vec![1.0 + t, -2.0, 0.5 * t]).unwrap()).collect();
        let du: Vec<_> =
            times.iter().map(|t| SpectralField::new(basis.clone(), vec![-t, 3.0, 0.25]).unwrap()).collect();
        let traj = Trajectory::new(basis, times, u, du).unwrap();
        let rho = 3.5;
        let back =
            v_transform(&v_transform(&traj, rho, 0.5, VDirection::ToV).unwrap(), rho, 0.5, VDirection::FromV).unwrap();
        for i in 0..traj.len() {
            for p in 0..3 {
                let u = traj.values()[i].coeffs()[p];
                let du = traj.dvalues()[i].coeffs()[p];
                assert!((back.values()[i].coeffs()[p] - u).abs() <= 2.0 * f64::EPSILON * u.abs());
                // u_t is recovered from v_t - ρv: rounding is relative to max(|u_t|, ρ|u|).
                let scale = du.abs().max(rho * u.abs());
                assert!((back.dvalues()[i].coeffs()[p] - du).abs() <= 4.0 * f64::EPSILON * scale);
            }
        }
    }
}
