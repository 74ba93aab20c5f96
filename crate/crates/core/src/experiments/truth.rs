use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::solvers::{forward_solve, TerminalData};
use crate::spectral::{build_basis, uniform_grid, EigenBasis, SpectralField, Trajectory};

/// Manufactured truth: initial coefficients `u0`, `u1` for the leading modes
/// (the remaining modes start at zero), evolved forward to `t_final`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSpec {
    pub length: f64,
    pub n_modes: usize,
    pub t_final: f64,
    pub grid_count: usize,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Manufactured {
    pub basis: Arc<EigenBasis>,
    pub truth: Trajectory,
    pub terminal: TerminalData,
}

impl TruthSpec {
    /// Modes `p ≤ 8` with `u0_p = 1/p²`, `u1 = 0`, on `(0, π)`.
    pub fn band_limited() -> Self {
        Self {
            length: std::f64::consts::PI,
            n_modes: 32,
            t_final: 0.5,
            grid_count: 201,
            u0: (1..=8).map(|p| 1.0 / (p * p) as f64).collect(),
            u1: Vec::new(),
        }
    }

    /// `u0_p = e^{-(1+δ) μ_p}` for `μ_p ≤ mu_max`, `u1 = 0`.
    pub fn gevrey_decay(
        length: f64,
        n_modes: usize,
        t_final: f64,
        grid_count: usize,
        delta: f64,
        mu_max: f64,
    ) -> Result<Self> {
        if !(delta >= 0.0) {
            return Err(invalid(format!("decay excess must be nonnegative, got {delta}")));
        }
        let basis = build_basis(length, n_modes)?;
        let u0 =
            basis.eigenvalues().iter().take_while(|&&mu| mu <= mu_max).map(|&mu| (-(1.0 + delta) * mu).exp()).collect();
        Ok(Self { length, n_modes, t_final, grid_count, u0, u1: Vec::new() })
    }

    /// Dense-spectrum default used by the convergence study: `L = 20`,
    /// 200 modes, `δ = 0.1`, band limit `μ ≤ 40`, `T = 0.5`, 201 times.
    pub fn dense_gevrey() -> Self {
        Self::gevrey_decay(20.0, 200, 0.5, 201, 0.1, 40.0).expect("valid built-in truth")
    }

    pub fn manufacture(&self) -> Result<Manufactured> {
        if self.u0.len() > self.n_modes || self.u1.len() > self.n_modes {
            return Err(invalid(format!("truth lists more coefficients than the {} basis modes", self.n_modes)));
        }
        let basis = build_basis(self.length, self.n_modes)?;
        let times = uniform_grid(self.t_final, self.grid_count)?;
        let pad = |c: &[f64]| {
            let mut v = c.to_vec();
            v.resize(self.n_modes, 0.0);
            SpectralField::new(basis.clone(), v)
        };
        let truth = forward_solve(&pad(&self.u0)?, &pad(&self.u1)?, &times)?;
        let last = truth.len() - 1;
        let terminal = TerminalData::new(truth.values()[last].clone(), truth.dvalues()[last].clone(), self.t_final)?;
        Ok(Manufactured { basis, truth, terminal })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_limited_coefficients() {
        let spec = TruthSpec::band_limited();
        assert_eq!(spec.u0.len(), 8);
        assert_eq!(spec.u0[3], 1.0 / 16.0);
    }

    #[test]
    fn dense_gevrey_band_limit() {
        let spec = TruthSpec::dense_gevrey();
        // μ_p = (pπ/20)² ≤ 40 ⇔ p ≤ 40.
        assert_eq!(spec.u0.len(), 40);
    }

    #[test]
    fn terminal_data_is_last_slice() {
        let m = TruthSpec::band_limited().manufacture().unwrap();
        assert_eq!(m.terminal.f0, m.truth.values()[200]);
        assert_eq!(*m.truth.times().last().unwrap(), 0.5);
    }

    #[test]
    fn too_many_coefficients_rejected() {
        let spec = TruthSpec { n_modes: 4, ..TruthSpec::band_limited() };
        assert!(spec.manufacture().is_err());
    }
}
