use serde::Serialize;

use super::{check_backward_grid, ModeKind, ModeOde, TerminalData};
use crate::error::{invalid, Result};
use crate::operators::RegConfig;
use crate::spectral::{SpectralField, Trajectory};

/// Exact forward evolution from `(u(0), u_t(0))`.
pub fn forward_solve(u0: &SpectralField, u1: &SpectralField, times: &[f64]) -> Result<Trajectory> {
    u0.check_same_basis(u1)?;
    if times.iter().any(|&t| !(t >= 0.0 && t.is_finite())) {
        return Err(invalid("forward grid times must be nonnegative"));
    }
    let basis = u0.basis().clone();
    let solutions = basis
        .eigenvalues()
        .iter()
        .zip(u0.coeffs().iter().zip(u1.coeffs()))
        .map(|(&mu, (&a, &da))| Ok(ModeOde::new(mu, ModeKind::ForwardOriginal)?.anchored(0.0, a, da)))
        .collect::<Result<Vec<_>>>()?;
    let (values, dvalues) = evaluate(&basis, &solutions, times)?;
    Trajectory::new(basis, times.to_vec(), values, dvalues)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeOverflow {
    /// Zero-based mode index.
    pub mode: usize,
    pub mu: f64,
    /// Latest grid time at which the mode is no longer representable.
    pub t: f64,
}

/// Un-regularized backward continuation. Slices where some mode overflows
/// are flagged in the trajectory's invalid mask and listed in `overflow`.
#[derive(Debug, Clone)]
pub struct NaiveBackward {
    pub trajectory: Trajectory,
    pub overflow: Vec<ModeOverflow>,
}

pub fn naive_backward_solve(td: &TerminalData, times: &[f64]) -> Result<NaiveBackward> {
    check_backward_grid(times, td.t_final)?;
    let basis = td.basis().clone();
    let solutions = terminal_solutions(td, |mu| ModeOde::new(mu, ModeKind::NaiveBackward))?;

    let n = basis.n_modes();
    let mut first_bad: Vec<Option<f64>> = vec![None; n];
    let mut values = Vec::with_capacity(times.len());
    let mut dvalues = Vec::with_capacity(times.len());
    let mut mask = Vec::with_capacity(times.len());
    for &t in times {
        let mut a = Vec::with_capacity(n);
        let mut da = Vec::with_capacity(n);
        let mut bad = false;
        for (p, sol) in solutions.iter().enumerate() {
            let (x, dx) = sol.eval(t);
            if !(x.is_finite() && dx.is_finite()) {
                bad = true;
                let slot = &mut first_bad[p];
                *slot = Some(slot.map_or(t, |old: f64| old.max(t)));
            }
            a.push(x);
            da.push(dx);
        }
        values.push(SpectralField::new_unchecked(basis.clone(), a));
        dvalues.push(SpectralField::new_unchecked(basis.clone(), da));
        mask.push(bad);
    }
    let overflow = first_bad
        .iter()
        .enumerate()
        .filter_map(|(mode, t)| t.map(|t| ModeOverflow { mode, mu: basis.mu(mode), t }))
        .collect();
    let trajectory = Trajectory::with_mask(basis, times.to_vec(), values, dvalues, mask)?;
    Ok(NaiveBackward { trajectory, overflow })
}

/// Exact backward solve of the regularized equation.
pub fn regularized_backward_solve(td: &TerminalData, cfg: &RegConfig, times: &[f64]) -> Result<Trajectory> {
    check_backward_grid(times, td.t_final)?;
    let basis = td.basis().clone();
    let solutions = terminal_solutions(td, |mu| ModeOde::regularized(mu, cfg))?;
    let (values, dvalues) = evaluate(&basis, &solutions, times)?;
    Trajectory::new(basis, times.to_vec(), values, dvalues)
}

fn terminal_solutions(td: &TerminalData, ode: impl Fn(f64) -> Result<ModeOde>) -> Result<Vec<super::ModeSolution>> {
    td.basis()
        .eigenvalues()
        .iter()
        .zip(td.f0.coeffs().iter().zip(td.f1.coeffs()))
        .map(|(&mu, (&a, &da))| Ok(ode(mu)?.anchored(td.t_final, a, da)))
        .collect()
}

fn evaluate(
    basis: &std::sync::Arc<crate::spectral::EigenBasis>,
    solutions: &[super::ModeSolution],
    times: &[f64],
) -> Result<(Vec<SpectralField>, Vec<SpectralField>)> {
    let mut values = Vec::with_capacity(times.len());
    let mut dvalues = Vec::with_capacity(times.len());
    for &t in times {
        let (a, da): (Vec<f64>, Vec<f64>) = solutions.iter().map(|s| s.eval(t)).unzip();
        values.push(SpectralField::new(basis.clone(), a)?);
        dvalues.push(SpectralField::new(basis.clone(), da)?);
    }
    Ok((values, dvalues))
}
