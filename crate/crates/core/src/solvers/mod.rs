//! Time propagation.
//!
//! In the eigenbasis the original equation reduces to
//! `a'' + (1 + μ) a' + μ a = 0` (roots `-1`, `-μ`) per mode. The regularized
//! equation keeps that ODE below the cutoff and switches to
//! `a'' + (1 - μ) a' - μ a = 0` (roots `-1`, `+μ`) on and above it, which is
//! stable when integrated backward from `T`.

mod closed_form;
mod energy;
mod galerkin;
mod picard;
mod vtransform;

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::spectral::{EigenBasis, SpectralField};

pub use closed_form::{forward_solve, naive_backward_solve, regularized_backward_solve, ModeOverflow, NaiveBackward};
pub use energy::{energy_envelope, energy_envelope_ratio, energy_series, EnergySample};
pub use galerkin::{galerkin_step_solve, rk4_backward};
pub use picard::{picard_solve, PicardOptions, PicardSolution, Windowing};
pub use vtransform::{v_transform, VDirection};

/// Below this distance from 1 the original ODE is treated as having the
/// double root `-1`.
pub const REPEATED_ROOT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModeKind {
    ForwardOriginal,
    NaiveBackward,
    RegularizedLow,
    RegularizedHigh,
}

/// Per-mode constant-coefficient ODE `a'' - (r1 + r2) a' + r1 r2 a = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeOde {
    pub mu: f64,
    pub kind: ModeKind,
    pub roots: (f64, f64),
}

impl ModeOde {
    pub fn new(mu: f64, kind: ModeKind) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(invalid(format!("eigenvalue must be positive, got {mu}")));
        }
        let roots = match kind {
            ModeKind::RegularizedHigh => (-1.0, mu),
            _ => (-1.0, -mu),
        };
        Ok(Self { mu, kind, roots })
    }

    /// The regularized ODE for `μ` under `cfg`.
    pub fn regularized(mu: f64, cfg: &RegConfig) -> Result<Self> {
        let kind = if cfg.in_q(mu) { ModeKind::RegularizedHigh } else { ModeKind::RegularizedLow };
        Self::new(mu, kind)
    }

    pub fn has_repeated_root(&self) -> bool {
        self.kind != ModeKind::RegularizedHigh && (self.mu - 1.0).abs() < REPEATED_ROOT_TOL
    }

    /// Solution with `a(t_ref) = a`, `a'(t_ref) = da`.
    pub fn anchored(&self, t_ref: f64, a: f64, da: f64) -> ModeSolution {
        let (r1, r2) = self.roots;
        if self.has_repeated_root() {
            ModeSolution { roots: (r1, r1), repeated: true, t_ref, c1: a, c2: da - r1 * a }
        } else {
            let c2 = (da - r1 * a) / (r2 - r1);
            ModeSolution { roots: (r1, r2), repeated: false, t_ref, c1: a - c2, c2 }
        }
    }
}

/// `a(t) = c1 e^{r1 (t - t_ref)} + c2 e^{r2 (t - t_ref)}`, or
/// `(c1 + c2 (t - t_ref)) e^{r1 (t - t_ref)}` for a double root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModeSolution {
    pub roots: (f64, f64),
    pub repeated: bool,
    pub t_ref: f64,
    pub c1: f64,
    pub c2: f64,
}

impl ModeSolution {
    /// `(a(t), a'(t))`. Terms with a zero coefficient are skipped so an
    /// unused branch cannot turn `0 * inf` into NaN.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let s = t - self.t_ref;
        let (r1, r2) = self.roots;
        if self.repeated {
            let e = (r1 * s).exp();
            let lin = self.c1 + self.c2 * s;
            if lin == 0.0 && self.c2 == 0.0 {
                return (0.0, 0.0);
            }
            return (lin * e, (self.c2 + r1 * lin) * e);
        }
        let mut a = 0.0;
        let mut da = 0.0;
        for (c, r) in [(self.c1, r1), (self.c2, r2)] {
            if c != 0.0 {
                let e = (r * s).exp();
                a += c * e;
                da += c * r * e;
            }
        }
        (a, da)
    }
}

/// `(u(T), u_t(T))` on a shared basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalData {
    pub f0: SpectralField,
    pub f1: SpectralField,
    pub t_final: f64,
}

impl TerminalData {
    pub fn new(f0: SpectralField, f1: SpectralField, t_final: f64) -> Result<Self> {
        f0.check_same_basis(&f1)?;
        if !(t_final > 0.0 && t_final.is_finite()) {
            return Err(invalid(format!("final time must be positive, got {t_final}")));
        }
        Ok(Self { f0, f1, t_final })
    }

    pub fn zeros(basis: Arc<EigenBasis>, t_final: f64) -> Result<Self> {
        Self::new(SpectralField::zeros(basis.clone()), SpectralField::zeros(basis), t_final)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        self.f0.basis()
    }
}

fn check_backward_grid(times: &[f64], t_final: f64) -> Result<()> {
    if times.is_empty() {
        return Err(invalid("empty time grid"));
    }
    if times.iter().any(|&t| !(0.0..=t_final * (1.0 + 1e-14)).contains(&t)) {
        return Err(invalid(format!("grid times must lie in [0, {t_final}]")));
    }
    Ok(())
}

/// Oracle grids must be increasing and end at `T`.
fn check_oracle_grid(times: &[f64], t_final: f64) -> Result<()> {
    check_backward_grid(times, t_final)?;
    if times.len() < 2 || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("oracle grid must be strictly increasing with at least two points"));
    }
    let last = *times.last().unwrap();
    if (last - t_final).abs() > 1e-12 * t_final {
        return Err(invalid(format!("oracle grid must end at T = {t_final}, ends at {last}")));
    }
    Ok(())
}
