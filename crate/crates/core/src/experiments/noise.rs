use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::rng;
use crate::solvers::TerminalData;
use crate::spectral::{EigenBasis, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    /// `‖δf0‖_{H¹} + ‖δf1‖ = ε`.
    H1L2,
    /// `‖δf0‖ = ε`, `f1` untouched.
    L2Only,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub eps: f64,
    pub seed: u64,
    pub mode: NoiseMode,
}

impl NoiseSpec {
    pub fn new(eps: f64, seed: u64, mode: NoiseMode) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("noise level must lie in (0, 1), got {eps}")));
        }
        Ok(Self { eps, seed, mode })
    }
}

/// Seeded Gaussian perturbation of the terminal data, rescaled so the noise
/// norm equals `eps` exactly (up to rounding).
pub fn add_noise(td: &TerminalData, spec: &NoiseSpec) -> Result<TerminalData> {
    let (d0, d1) = perturbation(td.basis(), spec)?;
    TerminalData::new(td.f0.axpy(1.0, &d0)?, td.f1.axpy(1.0, &d1)?, td.t_final)
}

/// The `(δf0, δf1)` pair that [`add_noise`] adds.
pub fn perturbation(basis: &Arc<EigenBasis>, spec: &NoiseSpec) -> Result<(SpectralField, SpectralField)> {
    let spec = NoiseSpec::new(spec.eps, spec.seed, spec.mode)?;
    let basis = basis.clone();
    let n = basis.n_modes();
    let mut stream = rng::stream(spec.seed, 0);
    let d0 = SpectralField::new(basis.clone(), rng::normals(&mut stream, n))?;
    let d1 = SpectralField::new(basis.clone(), rng::normals(&mut stream, n))?;
    let (d0, d1) = match spec.mode {
        NoiseMode::H1L2 => {
            let s = spec.eps / (d0.norm_h1() + d1.norm_l2());
            (d0.scale(s), d1.scale(s))
        }
        NoiseMode::L2Only => (d0.scale(spec.eps / d0.norm_l2()), SpectralField::zeros(basis)),
    };
    Ok((d0, d1))
}

/// The noise norm that `mode` controls.
pub fn noise_norm(clean: &TerminalData, noisy: &TerminalData, mode: NoiseMode) -> Result<f64> {
    let d0 = noisy.f0.sub(&clean.f0)?;
    let d1 = noisy.f1.sub(&clean.f1)?;
    Ok(match mode {
        NoiseMode::H1L2 => d0.norm_h1() + d1.norm_l2(),
        NoiseMode::L2Only => d0.norm_l2(),
    })
}
