//! Run configuration: a flat file of dotted keys (`reg.C1 = 1.0`), read as
//! TOML. Every key is optional; unset keys take the documented defaults.

use std::path::Path;

use qrwave::experiments::{NoiseMode, OracleSetup, SweepConfig, TruthSpec};
use qrwave::RegConfig;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub domain: Domain,
    pub time: Time,
    pub truth: Truth,
    pub noise: Noise,
    pub reg: Reg,
    pub sweep: Sweep,
    pub verify: Verify,
    pub illposed: Illposed,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Domain {
    pub length: Option<f64>,
    pub n_modes: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Time {
    #[serde(rename = "T")]
    pub t_final: f64,
    pub grid_count: usize,
}

impl Default for Time {
    fn default() -> Self {
        Self { t_final: 0.5, grid_count: 201 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruthKind {
    /// Band-limited for `forward`/`invert`, dense Gevrey for `sweep`.
    #[default]
    Auto,
    BandLimited,
    Gevrey,
    Explicit,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Truth {
    pub kind: TruthKind,
    pub u0: Vec<f64>,
    pub u1: Vec<f64>,
    pub delta: f64,
    pub mu_max: f64,
}

impl Default for Truth {
    fn default() -> Self {
        Self { kind: TruthKind::Auto, u0: Vec::new(), u1: Vec::new(), delta: 0.1, mu_max: 40.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseChoice {
    H1l2,
    L2only,
    None,
}

impl NoiseChoice {
    pub fn mode(self) -> Option<NoiseMode> {
        match self {
            NoiseChoice::H1l2 => Some(NoiseMode::H1L2),
            NoiseChoice::L2only => Some(NoiseMode::L2Only),
            NoiseChoice::None => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Noise {
    pub eps: f64,
    pub mode: NoiseChoice,
    pub seed: u64,
}

impl Default for Noise {
    fn default() -> Self {
        Self { eps: 1e-3, mode: NoiseChoice::H1l2, seed: 1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    /// `γ = ε^{-1/2}`.
    #[default]
    Sqrt,
    Explicit,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Reg {
    #[serde(rename = "C0")]
    pub c0: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub schedule: Schedule,
    pub gamma: Option<f64>,
}

impl Default for Reg {
    fn default() -> Self {
        Self { c0: 2.0, c1: 1.0, k: 1.0, schedule: Schedule::Sqrt, gamma: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    #[default]
    Convergence,
    Weak,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    pub experiment: Experiment,
    pub eps_grid: Vec<f64>,
    pub times: Vec<f64>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            experiment: Experiment::Convergence,
            eps_grid: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            times: vec![0.0, 0.25, 0.45],
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Verify {
    pub samples: usize,
    pub seed: u64,
    pub n_modes: usize,
    pub gammas: Vec<f64>,
    pub energy_samples: usize,
    pub dt: f64,
    pub picard_iterations: usize,
}

impl Default for Verify {
    fn default() -> Self {
        Self {
            samples: 1000,
            seed: 7,
            n_modes: 64,
            gammas: vec![4f64.exp(), 8f64.exp(), 1e3],
            energy_samples: 20,
            dt: 1e-4,
            picard_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Illposed {
    pub mode: usize,
    pub eps: f64,
    pub gamma: f64,
}

impl Default for Illposed {
    fn default() -> Self {
        Self { mode: 3, eps: 1e-3, gamma: 4f64.exp() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Forward,
    Invert,
    Sweep,
    Verify,
    DemoIllposed,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("invalid configuration: {}", e.message())))
    }

    pub fn override_seed(&mut self, seed: u64) {
        self.noise.seed = seed;
        self.verify.seed = seed;
    }

    fn resolved_kind(&self, command: Command) -> TruthKind {
        match (self.truth.kind, command) {
            (TruthKind::Auto, Command::Sweep) => TruthKind::Gevrey,
            (TruthKind::Auto, _) => TruthKind::BandLimited,
            (kind, _) => kind,
        }
    }

    pub fn truth_spec(&self, command: Command) -> CliResult<TruthSpec> {
        let kind = self.resolved_kind(command);
        let (default_length, default_modes) = match kind {
            TruthKind::Gevrey => (20.0, 200),
            _ => (std::f64::consts::PI, 32),
        };
        let length = self.domain.length.unwrap_or(default_length);
        let n_modes = self.domain.n_modes.unwrap_or(default_modes);
        let (t_final, grid_count) = (self.time.t_final, self.time.grid_count);
        Ok(match kind {
            TruthKind::Gevrey => {
                TruthSpec::gevrey_decay(length, n_modes, t_final, grid_count, self.truth.delta, self.truth.mu_max)?
            }
            TruthKind::Explicit => {
                TruthSpec { length, n_modes, t_final, grid_count, u0: self.truth.u0.clone(), u1: self.truth.u1.clone() }
            }
            _ => TruthSpec { length, n_modes, t_final, grid_count, ..TruthSpec::band_limited() },
        })
    }

    /// Regularization for a single run at noise level `eps`.
    pub fn reg_config(&self, eps: f64) -> CliResult<RegConfig> {
        let r = &self.reg;
        Ok(match r.schedule {
            Schedule::Sqrt => RegConfig::sqrt_schedule(eps, r.c0, r.c1, r.k)?,
            Schedule::Explicit => RegConfig::new(eps, r.gamma.unwrap_or(f64::NAN), r.c0, r.c1, r.k)?,
        })
    }

    pub fn sweep_config(&self) -> CliResult<SweepConfig> {
        let noise = match self.sweep.experiment {
            Experiment::Weak => self.noise.mode.mode().map(|_| NoiseMode::L2Only),
            Experiment::Convergence => self.noise.mode.mode(),
        };
        Ok(SweepConfig {
            truth: self.truth_spec(Command::Sweep)?,
            eps_grid: self.sweep.eps_grid.clone(),
            c0: self.reg.c0,
            c1: self.reg.c1,
            k: self.reg.k,
            times_of_interest: self.sweep.times.clone(),
            noise,
            seed: self.noise.seed,
        })
    }

    /// Regularization parameters exercised by `verify`.
    pub fn verify_gammas(&self) -> Vec<f64> {
        match (self.reg.schedule, self.reg.gamma) {
            (Schedule::Explicit, Some(g)) => vec![g],
            _ => self.verify.gammas.clone(),
        }
    }

    pub fn oracle_setup(&self, gamma: f64) -> OracleSetup {
        OracleSetup {
            gamma,
            c1: self.reg.c1,
            t_final: self.time.t_final,
            dt: self.verify.dt,
            picard_iterations: self.verify.picard_iterations,
            seed: self.verify.seed,
            ..OracleSetup::default()
        }
    }

    /// Every problem found, so a bad file is reported in one pass.
    pub fn validate(&self, command: Command) -> CliResult<()> {
        let mut problems = Vec::new();
        let mut need = |ok: bool, msg: String| {
            if !ok {
                problems.push(msg);
            }
        };
        let positive = |x: f64| x > 0.0 && x.is_finite();

        if let Some(l) = self.domain.length {
            need(positive(l), format!("domain.length must be positive, got {l}"));
        }
        if let Some(n) = self.domain.n_modes {
            need(n >= 1, "domain.n_modes must be at least 1".into());
        }
        need(positive(self.time.t_final), format!("time.T must be positive, got {}", self.time.t_final));
        need(self.time.grid_count >= 2, format!("time.grid_count must be >= 2, got {}", self.time.grid_count));
        for (name, v) in [("reg.C0", self.reg.c0), ("reg.C1", self.reg.c1), ("reg.K", self.reg.k)] {
            need(positive(v), format!("{name} must be positive, got {v}"));
        }
        match (self.reg.schedule, self.reg.gamma) {
            (Schedule::Explicit, None) => need(false, "reg.schedule = \"explicit\" needs reg.gamma".into()),
            (Schedule::Explicit, Some(g)) => {
                need(g >= 1.0 && g.is_finite(), format!("reg.gamma must be >= 1, got {g}"))
            }
            (Schedule::Sqrt, Some(_)) => need(false, "reg.gamma is only used with reg.schedule = \"explicit\"".into()),
            (Schedule::Sqrt, None) => {}
        }
        let kind = self.resolved_kind(command);
        if kind == TruthKind::Explicit {
            let n = self.domain.n_modes.unwrap_or(32);
            need(self.truth.u0.len() <= n && self.truth.u1.len() <= n, format!("truth.u0/u1 list more than {n} modes"));
            need(
                self.truth.u0.iter().chain(&self.truth.u1).all(|c| c.is_finite()),
                "truth coefficients must be finite".into(),
            );
        }
        if kind == TruthKind::Gevrey {
            need(self.truth.delta >= 0.0, format!("truth.delta must be >= 0, got {}", self.truth.delta));
        }

        match command {
            Command::Invert => {
                let eps = self.noise.eps;
                need((0.0..1.0).contains(&eps), format!("noise.eps must lie in [0, 1), got {eps}"));
                if self.reg.schedule == Schedule::Sqrt {
                    need(eps > 0.0, "noise.eps = 0 needs reg.schedule = \"explicit\" with reg.gamma".into());
                }
            }
            Command::Sweep => {
                need(!self.sweep.eps_grid.is_empty(), "sweep.eps_grid is empty".into());
                for &e in &self.sweep.eps_grid {
                    need(e > 0.0 && e < 1.0, format!("sweep.eps_grid entries must lie in (0, 1), got {e}"));
                }
                need(self.reg.schedule == Schedule::Sqrt, "sweep uses reg.schedule = \"sqrt\"".into());
                let (t_final, last) = (self.time.t_final, self.time.grid_count.saturating_sub(1) as f64);
                for &t in &self.sweep.times {
                    let k = t / t_final * last;
                    need(
                        (0.0..=t_final).contains(&t) && (k - k.round()).abs() < 1e-6,
                        format!("sweep.times entry {t} is not a grid time"),
                    );
                }
            }
            Command::Verify => {
                need(self.verify.samples >= 1, "verify.samples must be >= 1".into());
                need(self.verify.n_modes >= 1, "verify.n_modes must be >= 1".into());
                need(self.verify.energy_samples >= 1, "verify.energy_samples must be >= 1".into());
                need(self.verify.picard_iterations >= 1, "verify.picard_iterations must be >= 1".into());
                need(positive(self.verify.dt), format!("verify.dt must be positive, got {}", self.verify.dt));
                need(!self.verify_gammas().is_empty(), "verify.gammas is empty".into());
                for g in self.verify_gammas() {
                    need(g >= 1.0 && g.is_finite(), format!("verify gamma must be >= 1, got {g}"));
                }
            }
            Command::DemoIllposed => {
                need(self.illposed.mode >= 1, "illposed.mode counts from 1".into());
                need(positive(self.illposed.eps), format!("illposed.eps must be positive, got {}", self.illposed.eps));
                need(self.illposed.gamma >= 1.0, format!("illposed.gamma must be >= 1, got {}", self.illposed.gamma));
            }
            Command::Forward => {}
        }

        if problems.is_empty() {
            Ok(())
        } else {
            Err(CliError::Config(format!("invalid configuration:\n  - {}", problems.join("\n  - "))))
        }
    }
}
