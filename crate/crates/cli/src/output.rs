use std::fs;
use std::path::{Path, PathBuf};

use qrwave::experiments::{ErrorReport, SweepReport, WeakNoiseReport};
use qrwave::Trajectory;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Round-trip exact: 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|source| CliError::Io { path: root.to_path_buf(), source })?;
        Ok(Self { root: root.to_path_buf() })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write_csv<I>(&self, name: &str, header: &[String], rows: I) -> CliResult<PathBuf>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let path = self.path(name);
        let io = |e: csv::Error| CliError::Io { path: path.clone(), source: std::io::Error::other(e) };
        let mut w = csv::Writer::from_path(&path).map_err(io)?;
        w.write_record(header).map_err(io)?;
        for row in rows {
            w.write_record(row.into_iter().map(num)).map_err(io)?;
        }
        w.flush().map_err(|source| CliError::Io { path: path.clone(), source })?;
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&self, name: &str, value: &T) -> CliResult<PathBuf> {
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(value)
            .map_err(|e| CliError::Io { path: path.clone(), source: std::io::Error::other(e) })?;
        text.push('\n');
        fs::write(&path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
        Ok(path)
    }
}

pub fn trajectory_header(n_modes: usize) -> Vec<String> {
    let mut h = vec!["t".to_string()];
    h.extend((1..=n_modes).map(|p| format!("mode_{p}")));
    h.extend((1..=n_modes).map(|p| format!("dmode_{p}")));
    h
}

pub fn trajectory_rows(traj: &Trajectory) -> impl Iterator<Item = Vec<f64>> + '_ {
    traj.times().iter().enumerate().map(move |(i, &t)| {
        let mut row = vec![t];
        row.extend_from_slice(traj.values()[i].coeffs());
        row.extend_from_slice(traj.dvalues()[i].coeffs());
        row
    })
}

pub const ERROR_HEADER: [&str; 5] = ["t", "err_l2", "err_grad", "err_dt", "err_dtgrad_int"];

pub fn error_rows(r: &ErrorReport) -> impl Iterator<Item = Vec<f64>> + '_ {
    (0..r.times.len()).map(move |i| vec![r.times[i], r.err_l2[i], r.err_grad[i], r.err_dt[i], r.err_dtgrad_int[i]])
}

pub const SWEEP_HEADER: [&str; 12] = [
    "eps",
    "gamma",
    "t",
    "err_l2",
    "bound1",
    "ratio1",
    "err_grad",
    "bound2",
    "ratio2",
    "err_dt_plus_int",
    "bound3",
    "ratio3",
];

pub fn sweep_rows(r: &SweepReport) -> impl Iterator<Item = Vec<f64>> + '_ {
    r.rows.iter().map(|row| {
        let mut v = vec![row.eps, row.gamma, row.t];
        for k in 0..3 {
            v.extend([row.error[k], row.bound[k], row.ratio[k]]);
        }
        v
    })
}

pub const WEAK_HEADER: [&str; 3] = ["eps", "gamma", "ratio"];

pub fn weak_rows(r: &WeakNoiseReport) -> impl Iterator<Item = Vec<f64>> + '_ {
    (0..r.eps_grid.len()).map(move |i| vec![r.eps_grid[i], r.gammas[i], r.ratios[i]])
}

pub fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}
