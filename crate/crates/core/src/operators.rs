//! Perturbing operator `Q`, stabilized operator `P = 2Δ + Q` and numerical
//! checks of their conditional estimates.
//!
//! With cutoff `κ = ½ log γ`:
//!
//! ```text
//! Q h = 2 Σ_{μ_p ≥ κ} μ_p h_p φ_p        P h = -2 Σ_{μ_p < κ} μ_p h_p φ_p
//! ```
//!
//! A mode sitting exactly on the cutoff belongs to `Q`.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rng;
use crate::spectral::{EigenBasis, SpectralField};

/// Decay excess of the random Gevrey samples: `h_p = e^{-(1+δ)μ_p} z_p`.
pub const GEVREY_SAMPLE_DELTA: f64 = 0.1;

/// Tolerance on the sampled bound ratio.
pub const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegConfig {
    pub eps: f64,
    pub gamma: f64,
    pub cutoff: f64,
    pub rho: f64,
    pub c0: f64,
    pub c1: f64,
    pub k: f64,
}

impl RegConfig {
    /// Explicit `γ`. `eps = 0` denotes noise-free terminal data.
    pub fn new(eps: f64, gamma: f64, c0: f64, c1: f64, k: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&eps) {
            return Err(invalid(format!("noise level must lie in [0, 1), got {eps}")));
        }
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(invalid(format!("gamma must be a finite value >= 1, got {gamma}")));
        }
        for (name, v) in [("C0", c0), ("C1", c1), ("K", k)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be positive, got {v}")));
            }
        }
        let log_gamma = gamma.ln();
        Ok(Self { eps, gamma, cutoff: 0.5 * log_gamma, rho: c1 * log_gamma, c0, c1, k })
    }

    /// Default constants `C0 = 2`, `C1 = 1`, `K = 1`.
    pub fn with_gamma(eps: f64, gamma: f64) -> Result<Self> {
        Self::new(eps, gamma, 2.0, 1.0, 1.0)
    }

    /// `γ(ε) = ε^{-1/2}`.
    pub fn sqrt_schedule(eps: f64, c0: f64, c1: f64, k: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("noise level must lie in (0, 1), got {eps}")));
        }
        Self::new(eps, eps.powf(-0.5), c0, c1, k)
    }

    pub fn log_gamma(&self) -> f64 {
        self.gamma.ln()
    }

    pub fn in_q(&self, mu: f64) -> bool {
        mu >= self.cutoff
    }

    /// Spectral symbol of `Q` at `μ`.
    pub fn q_symbol(&self, mu: f64) -> f64 {
        if self.in_q(mu) {
            2.0 * mu
        } else {
            0.0
        }
    }

    /// Spectral symbol of `P` at `μ`.
    pub fn p_symbol(&self, mu: f64) -> f64 {
        if self.in_q(mu) {
            0.0
        } else {
            -2.0 * mu
        }
    }
}

pub fn apply_q(h: &SpectralField, cfg: &RegConfig) -> SpectralField {
    h.map_symbol(|mu| cfg.q_symbol(mu))
}

pub fn apply_p(h: &SpectralField, cfg: &RegConfig) -> SpectralField {
    h.map_symbol(|mu| cfg.p_symbol(mu))
}

/// `2Δh`, i.e. coefficient `p` multiplied by `-2μ_p`.
pub fn doubled_laplacian(h: &SpectralField) -> SpectralField {
    h.map_symbol(|mu| -2.0 * mu)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub samples: usize,
    pub max_ratio: f64,
    pub pass: bool,
    /// Samples whose Gevrey norm was not representable and were redrawn.
    pub rejected: usize,
    /// Largest single-eigenmode ratio over the basis (the sharp constant).
    pub single_mode_sup: f64,
}

/// `‖Q u‖ γ / (C0 ‖u‖_{G_{1,1}})` for one field.
pub fn q_ratio(u: &SpectralField, cfg: &RegConfig) -> Result<f64> {
    let num = apply_q(u, cfg).norm_l2() * cfg.gamma;
    let den = cfg.c0 * u.norm_gevrey(1.0, 1.0)?;
    Ok(if num == 0.0 { 0.0 } else { num / den })
}

/// `‖P u‖ / (C1 log γ ‖u‖)` for one field.
pub fn p_ratio(u: &SpectralField, cfg: &RegConfig) -> f64 {
    let num = apply_p(u, cfg).norm_l2();
    if num == 0.0 {
        0.0
    } else {
        num / (cfg.c1 * cfg.log_gamma() * u.norm_l2())
    }
}

/// Sample `‖Q u‖ ≤ C0 ‖u‖_{G_{1,1}} / γ` on seeded Gevrey-decaying fields.
pub fn verify_q_bound(basis: &Arc<EigenBasis>, samples: usize, cfg: &RegConfig, seed: u64) -> Result<BoundReport> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if !(cfg.gamma > 1.0) {
        return Err(invalid(format!("Q-bound check needs gamma > 1, got {}", cfg.gamma)));
    }
    let draws = crate::par::map_indexed(samples, |i| q_sample_ratio(basis, cfg, seed, i as u64))?;
    let rejected = draws.iter().map(|d| d.1).sum();
    let max_ratio = draws.iter().map(|d| d.0).fold(0.0, f64::max);
    let single_mode_sup = basis
        .eigenvalues()
        .iter()
        .filter(|&&mu| cfg.in_q(mu))
        .map(|&mu| 2.0 * mu * cfg.gamma / (cfg.c0 * (mu.ln() / 2.0 + mu).exp()))
        .fold(0.0, f64::max);
    Ok(BoundReport { samples, max_ratio, pass: max_ratio <= 1.0 + BOUND_SLACK, rejected, single_mode_sup })
}

fn q_sample_ratio(basis: &Arc<EigenBasis>, cfg: &RegConfig, seed: u64, index: u64) -> Result<(f64, usize)> {
    let mut stream = rng::stream(seed, index);
    let z = rng::normals(&mut stream, basis.n_modes());
    let mut decay = 1.0 + GEVREY_SAMPLE_DELTA;
    for rejected in 0..8 {
        let u = SpectralField::from_fn(basis.clone(), |i, mu| (-decay * mu).exp() * z[i])?;
        match q_ratio(&u, cfg) {
            Ok(r) => return Ok((r, rejected)),
            Err(crate::Error::Range(_)) => decay *= 2.0,
            Err(e) => return Err(e),
        }
    }
    Err(crate::Error::Range("Gevrey sample norm not representable".into()))
}

/// Sample `‖P u‖ ≤ C1 log γ ‖u‖` on seeded standard-normal fields.
pub fn verify_p_bound(basis: &Arc<EigenBasis>, samples: usize, cfg: &RegConfig, seed: u64) -> Result<BoundReport> {
    if samples == 0 {
        return Err(invalid("need at least one sample"));
    }
    if !(cfg.log_gamma() > 1.0) {
        return Err(invalid(format!("P-bound check needs gamma > e, got {}", cfg.gamma)));
    }
    let ratios = crate::par::map_indexed(samples, |i| {
        let mut stream = rng::stream(seed, i as u64);
        let z = rng::normals(&mut stream, basis.n_modes());
        Ok(p_ratio(&SpectralField::new(basis.clone(), z)?, cfg))
    })?;
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let single_mode_sup = basis
        .eigenvalues()
        .iter()
        .filter(|&&mu| !cfg.in_q(mu))
        .map(|&mu| 2.0 * mu / (cfg.c1 * cfg.log_gamma()))
        .fold(0.0, f64::max);
    Ok(BoundReport { samples, max_ratio, pass: max_ratio <= 1.0 + BOUND_SLACK, rejected: 0, single_mode_sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_basis;
    use std::f64::consts::PI;

    fn e4() -> RegConfig {
        RegConfig::with_gamma(0.01, 4f64.exp()).unwrap()
    }

    #[test]
    fn config_derived_quantities() {
        let cfg = e4();
        assert!((cfg.cutoff - 2.0).abs() < 1e-15);
        assert!((cfg.rho - 4.0).abs() < 1e-15);
        assert!(RegConfig::with_gamma(0.1, 0.5).is_err());
        assert!(RegConfig::with_gamma(1.0, 2.0).is_err());
        assert!(RegConfig::new(0.1, 2.0, 0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn q_examples() {
        let basis = build_basis(PI, 2).unwrap();
        let cfg = e4();
        let low = SpectralField::single_mode(basis.clone(), 0, 5.0).unwrap();
        assert!(apply_q(&low, &cfg).is_zero());
        let high = SpectralField::single_mode(basis.clone(), 1, 1.0).unwrap();
        let q = apply_q(&high, &cfg);
        assert!((q.coeffs()[1] - 8.0).abs() < 1e-14);

        let all = RegConfig::with_gamma(0.01, 1.0).unwrap();
        let h = SpectralField::new(basis, vec![1.5, -2.0]).unwrap();
        let q = apply_q(&h, &all);
        assert_eq!(q.coeffs()[0], 2.0 * h.basis().mu(0) * 1.5);
        assert_eq!(q.coeffs()[1], 2.0 * h.basis().mu(1) * -2.0);
    }

    #[test]
    fn p_examples() {
        let basis = build_basis(PI, 2).unwrap();
        let cfg = e4();
        let low = SpectralField::single_mode(basis.clone(), 0, 1.0).unwrap();
        assert!((apply_p(&low, &cfg).coeffs()[0] + 2.0).abs() < 1e-14);
        let high = SpectralField::single_mode(basis, 1, 1.0).unwrap();
        assert!(apply_p(&high, &cfg).is_zero());
    }

    #[test]
    fn tie_on_cutoff_goes_to_q() {
        // γ = e⁸ puts the cutoff exactly on μ_2 = 4 for L = π.
        let cfg = RegConfig::with_gamma(0.01, 8f64.exp()).unwrap();
        assert_eq!(cfg.cutoff, 4.0);
        assert!(cfg.in_q(4.0));
        assert_eq!(cfg.p_symbol(4.0), 0.0);
        assert_eq!(cfg.q_symbol(4.0), 8.0);
    }

    #[test]
    fn p_ratio_just_below_cutoff() {
        let cfg = e4();
        // Single mode μ = 1.999: ratio 2μ / log γ.
        let length = PI / 1.999f64.sqrt();
        let basis = build_basis(length, 1).unwrap();
        let u = SpectralField::single_mode(basis, 0, 1.0).unwrap();
        let r = p_ratio(&u, &cfg);
        assert!((r - 2.0 * u.basis().mu(0) / 4.0).abs() < 1e-14);
        assert!((r - 0.9995).abs() < 1e-12);
    }

    #[test]
    fn zero_field_ratios_are_zero() {
        let basis = build_basis(PI, 8).unwrap();
        let cfg = e4();
        let zero = SpectralField::zeros(basis);
        assert_eq!(q_ratio(&zero, &cfg).unwrap(), 0.0);
        assert_eq!(p_ratio(&zero, &cfg), 0.0);
    }

    #[test]
    fn single_mode_q_ratio_matches_closed_form() {
        // Mode exactly at the cutoff: ratio = 2μγ / (2 sqrt(μ e^{2μ})) = sqrt(μ) γ e^{-μ}.
        for mu in [2.0f64, 3.0, 5.0] {
            let basis = build_basis(PI / mu.sqrt(), 1).unwrap();
            let cfg = RegConfig::with_gamma(0.01, (2.0 * basis.mu(0)).exp()).unwrap();
            let u = SpectralField::single_mode(basis.clone(), 0, 1.0).unwrap();
            let m = basis.mu(0);
            let expected = m.sqrt() * cfg.gamma * (-m).exp();
            let got = q_ratio(&u, &cfg).unwrap();
            assert!((got - expected).abs() <= 1e-12 * expected, "mu={mu}: {got} vs {expected}");
            // sqrt(μ) e^{μ} > 1: the conditional estimate cannot hold at the cutoff.
            assert!(got > 1.0);
        }
    }

    #[test]
    fn verifier_rejects_bad_config() {
        let basis = build_basis(PI, 4).unwrap();
        let flat = RegConfig::with_gamma(0.01, 1.0).unwrap();
        assert!(verify_q_bound(&basis, 10, &flat, 1).is_err());
        let small = RegConfig::with_gamma(0.01, 2.0).unwrap();
        assert!(verify_p_bound(&basis, 10, &small, 1).is_err());
        assert!(verify_p_bound(&basis, 0, &e4(), 1).is_err());
    }

    #[test]
    fn verifier_is_seed_deterministic() {
        let basis = build_basis(PI, 16).unwrap();
        let a = verify_p_bound(&basis, 50, &e4(), 7).unwrap();
        let b = verify_p_bound(&basis, 50, &e4(), 7).unwrap();
        assert_eq!(a, b);
        let c = verify_q_bound(&basis, 50, &e4(), 7).unwrap();
        let d = verify_q_bound(&basis, 50, &e4(), 7).unwrap();
        assert_eq!(c, d);
    }
}
