//! Fixed-point oracle for the weighted system in integral form,
//! `w(t) = w(T) - ∫_t^T B w ds`, with trapezoid quadrature.

use serde::Serialize;

use super::vtransform::{v_mode_coefficients, v_transform, VDirection};
use super::{check_oracle_grid, TerminalData};
use crate::error::{invalid, Error, Result};
use crate::operators::RegConfig;
use crate::spectral::{SpectralField, Trajectory};

/// How `[0, T]` is split for the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Windowing {
    /// Consecutive windows with `‖B‖ h ≤ 1/2`, solved from `T` backward.
    Auto,
    /// One window over all of `[0, T]`.
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PicardOptions {
    /// Only the first `n_modes` modes are iterated; the rest are zero.
    pub n_modes: Option<usize>,
    pub iterations: usize,
    /// Largest spacing of the internal quadrature grid.
    pub max_step: f64,
    pub windowing: Windowing,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self { n_modes: None, iterations: 200, max_step: 1e-5, windowing: Windowing::Auto }
    }
}

#[derive(Debug, Clone)]
pub struct PicardSolution {
    pub trajectory: Trajectory,
    pub windows: usize,
    /// `differences[m]`: sup over windows and modes of `‖w^{m+1} - w^m‖_∞`.
    pub differences: Vec<f64>,
}

const GROWTH_LIMIT: usize = 3;
const ROUNDING_FLOOR: f64 = 64.0 * f64::EPSILON;

pub fn picard_solve(
    td: &TerminalData,
    cfg: &RegConfig,
    rho: f64,
    times: &[f64],
    opts: &PicardOptions,
) -> Result<PicardSolution> {
    if opts.iterations == 0 {
        return Err(invalid("picard needs at least one iteration"));
    }
    if !(opts.max_step > 0.0 && opts.max_step.is_finite()) {
        return Err(invalid(format!("max_step must be positive, got {}", opts.max_step)));
    }
    check_oracle_grid(times, td.t_final)?;
    let basis = td.basis().clone();
    let n_active = opts.n_modes.unwrap_or(basis.n_modes());
    if n_active > basis.n_modes() {
        return Err(invalid(format!("n_modes {n_active} exceeds basis size {}", basis.n_modes())));
    }
    let coeffs: Vec<(f64, f64)> =
        basis.eigenvalues()[..n_active].iter().map(|&mu| v_mode_coefficients(mu, cfg.p_symbol(mu), rho)).collect();

    let (grid, output_nodes) = refine(times, opts.max_step);
    let windows = match opts.windowing {
        Windowing::Global => vec![(0, grid.len() - 1)],
        Windowing::Auto => {
            let norm = coeffs.iter().map(|&(b0, b1)| (b0.abs() + b1.abs()).max(1.0)).fold(1.0, f64::max);
            split_windows(&grid, 0.5 / norm)
        }
    };

    let mut differences = vec![0.0f64; opts.iterations];
    let mut ys = vec![vec![0.0; times.len()]; basis.n_modes()];
    let mut zs = vec![vec![0.0; times.len()]; basis.n_modes()];
    for (p, &(b0, b1)) in coeffs.iter().enumerate() {
        let f0 = td.f0.coeffs()[p];
        let anchor = (f0, rho * f0 + td.f1.coeffs()[p]);
        let (y, z) = solve_mode((b0, b1), anchor, &grid, &windows, opts.iterations, &mut differences)?;
        for (k, &node) in output_nodes.iter().enumerate() {
            ys[p][k] = y[node];
            zs[p][k] = z[node];
        }
    }

    let mut values = Vec::with_capacity(times.len());
    let mut dvalues = Vec::with_capacity(times.len());
    for k in 0..times.len() {
        values.push(SpectralField::new(basis.clone(), ys.iter().map(|m| m[k]).collect())?);
        dvalues.push(SpectralField::new(basis.clone(), zs.iter().map(|m| m[k]).collect())?);
    }
    let traj_v = Trajectory::new(basis, times.to_vec(), values, dvalues)?;
    let trajectory = v_transform(&traj_v, rho, td.t_final, VDirection::FromV)?;
    Ok(PicardSolution { trajectory, windows: windows.len(), differences })
}

/// Subdivides every output interval into equal pieces no longer than
/// `max_step`; returns the fine grid and the fine index of each output time.
fn refine(times: &[f64], max_step: f64) -> (Vec<f64>, Vec<usize>) {
    let mut grid = vec![times[0]];
    let mut nodes = vec![0];
    for w in times.windows(2) {
        let pieces = ((w[1] - w[0]) / max_step).ceil().max(1.0) as usize;
        for j in 1..pieces {
            grid.push(w[0] + (w[1] - w[0]) * j as f64 / pieces as f64);
        }
        grid.push(w[1]);
        nodes.push(grid.len() - 1);
    }
    (grid, nodes)
}

/// Node ranges `(start, end)`, listed from `T` backward.
fn split_windows(grid: &[f64], width: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut end = grid.len() - 1;
    while end > 0 {
        let mut start = end - 1;
        while start > 0 && grid[end] - grid[start - 1] <= width {
            start -= 1;
        }
        out.push((start, end));
        end = start;
    }
    out
}

fn solve_mode(
    (b0, b1): (f64, f64),
    anchor: (f64, f64),
    grid: &[f64],
    windows: &[(usize, usize)],
    iterations: usize,
    differences: &mut [f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = grid.len();
    let mut y = vec![0.0; n];
    let mut z = vec![0.0; n];
    y[n - 1] = anchor.0;
    z[n - 1] = anchor.1;
    let mut ny = vec![0.0; n];
    let mut nz = vec![0.0; n];
    for &(start, end) in windows {
        let (ye, ze) = (y[end], z[end]);
        y[start..end].fill(ye);
        z[start..end].fill(ze);
        let mut previous = f64::INFINITY;
        let mut growth = 0;
        for (m, slot) in differences.iter_mut().enumerate().take(iterations) {
            ny[end] = ye;
            nz[end] = ze;
            let (mut iy, mut iz) = (0.0, 0.0);
            for k in (start..end).rev() {
                let h = grid[k + 1] - grid[k];
                iy += 0.5 * h * (z[k] + z[k + 1]);
                iz += 0.5 * h * (b0 * (y[k] + y[k + 1]) + b1 * (z[k] + z[k + 1]));
                ny[k] = ye - iy;
                nz[k] = ze - iz;
            }
            let mut diff = 0.0f64;
            let mut scale = 0.0f64;
            for k in start..end {
                diff = diff.max((ny[k] - y[k]).abs()).max((nz[k] - z[k]).abs());
                scale = scale.max(ny[k].abs()).max(nz[k].abs());
            }
            y[start..end].copy_from_slice(&ny[start..end]);
            z[start..end].copy_from_slice(&nz[start..end]);
            *slot = slot.max(diff);
            if !diff.is_finite() {
                return Err(Error::Divergence { t: grid[end], iteration: m + 1 });
            }
            if diff == 0.0 {
                break;
            }
            if diff > previous && diff > ROUNDING_FLOOR * scale {
                growth += 1;
                if growth >= GROWTH_LIMIT {
                    return Err(Error::Divergence { t: grid[end], iteration: m + 1 });
                }
            } else {
                growth = 0;
            }
            previous = diff;
        }
    }
    Ok((y, z))
}
