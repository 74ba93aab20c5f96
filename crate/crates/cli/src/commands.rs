use std::path::Path;

use qrwave::experiments::{
    add_noise, check_assumptions, convergence_sweep, energy_check, error_envelope, error_report, gevrey_mass,
    illposedness_demo, oracle_triangle, weak_noise_experiment, AssumptionReport, EnergyCheckReport, NoiseSpec,
    TriangleReport,
};
use qrwave::operators::{verify_p_bound, verify_q_bound, BoundReport};
use qrwave::solvers::regularized_backward_solve;
use qrwave::spectral::build_basis;
use qrwave::RegConfig;
use serde::Serialize;

use crate::config::{Command, Experiment, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{self, header, OutDir};

pub struct Context<'a> {
    pub config: &'a RunConfig,
    pub out: &'a Path,
    pub quiet: bool,
}

impl Context<'_> {
    fn say(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            println!("{}", msg.as_ref());
        }
    }
}

pub fn forward(ctx: &Context) -> CliResult<()> {
    ctx.config.validate(Command::Forward)?;
    let m = ctx.config.truth_spec(Command::Forward)?.manufacture()?;
    let out = OutDir::create(ctx.out)?;
    let path = out.write_csv(
        "trajectory.csv",
        &output::trajectory_header(m.basis.n_modes()),
        output::trajectory_rows(&m.truth),
    )?;
    ctx.say(format!("wrote {}", path.display()));
    Ok(())
}

#[derive(Serialize)]
struct InvertSummary {
    eps: f64,
    noise: Option<qrwave::experiments::NoiseMode>,
    seed: u64,
    gamma: f64,
    cutoff: f64,
    rho: f64,
    assumptions: AssumptionReport,
    gevrey_mass: Option<f64>,
    /// Per metric, `max_t error² / bound`; absent when the assumptions fail.
    c_hat: Option<[f64; 3]>,
    max_err_l2: f64,
    max_err_grad: f64,
    max_err_dt: f64,
}

pub fn invert(ctx: &Context) -> CliResult<()> {
    let config = ctx.config;
    config.validate(Command::Invert)?;
    let spec = config.truth_spec(Command::Invert)?;
    let m = spec.manufacture()?;
    let eps = config.noise.eps;
    let cfg = config.reg_config(eps)?;
    let noise = if eps > 0.0 { config.noise.mode.mode() } else { None };
    let terminal = match noise {
        Some(mode) => add_noise(&m.terminal, &NoiseSpec::new(eps, config.noise.seed, mode)?)?,
        None => m.terminal.clone(),
    };
    let recon = regularized_backward_solve(&terminal, &cfg, m.truth.times())?;
    let report = error_report(&recon, &m.truth)?;
    let assumptions = check_assumptions(&cfg, spec.t_final);
    let c_hat = if assumptions.ok {
        let shapes = error_envelope(&report, &cfg, spec.t_final)?;
        let mut c = [0.0f64; 3];
        for (i, shape) in shapes.iter().enumerate() {
            let sq = report.squared_metrics(i);
            for k in 0..3 {
                c[k] = c[k].max(sq[k] / shape[k]);
            }
        }
        Some(c)
    } else {
        None
    };
    let max = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
    let summary = InvertSummary {
        eps,
        noise,
        seed: config.noise.seed,
        gamma: cfg.gamma,
        cutoff: cfg.cutoff,
        rho: cfg.rho,
        gevrey_mass: gevrey_mass(&m.truth).ok(),
        c_hat,
        max_err_l2: max(&report.err_l2),
        max_err_grad: max(&report.err_grad),
        max_err_dt: max(&report.err_dt),
        assumptions,
    };

    let out = OutDir::create(ctx.out)?;
    out.write_csv(
        "reconstruction.csv",
        &output::trajectory_header(m.basis.n_modes()),
        output::trajectory_rows(&recon),
    )?;
    out.write_csv("errors.csv", &header(&output::ERROR_HEADER), output::error_rows(&report))?;
    out.write_json("invert.json", &summary)?;
    ctx.say(format!(
        "gamma = {:.6}, cutoff = {:.6}, sup err_l2 = {:.3e}; wrote {}",
        cfg.gamma,
        cfg.cutoff,
        summary.max_err_l2,
        ctx.out.display()
    ));
    if !summary.assumptions.ok {
        ctx.say(format!("warning: {}", summary.assumptions.summary()));
    }
    Ok(())
}

pub fn sweep(ctx: &Context) -> CliResult<()> {
    let config = ctx.config;
    config.validate(Command::Sweep)?;
    let sweep = config.sweep_config()?;
    let out = OutDir::create(ctx.out)?;
    match config.sweep.experiment {
        Experiment::Convergence => {
            let report = convergence_sweep(&sweep)?;
            out.write_csv("sweep.csv", &header(&output::SWEEP_HEADER), output::sweep_rows(&report))?;
            out.write_json("sweep.json", &report)?;
            ctx.say(format!(
                "{} noise levels ({} skipped); spread per metric = [{:.2}, {:.2}, {:.2}]",
                report.eps_grid.len(),
                report.skipped.len(),
                report.spread[0],
                report.spread[1],
                report.spread[2]
            ));
            for s in &report.skipped {
                ctx.say(format!("skipped eps = {}: {}", s.eps, s.reason));
            }
        }
        Experiment::Weak => {
            let report = weak_noise_experiment(&sweep)?;
            out.write_csv("weak_noise.csv", &header(&output::WEAK_HEADER), output::weak_rows(&report))?;
            out.write_json("weak_noise.json", &report)?;
            ctx.say(format!("ratio spread = {:.2}", report.spread));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct BoundCheck {
    gamma: f64,
    q: BoundReport,
    p: BoundReport,
    /// Largest `‖Q h‖ γ^{1/2} / ‖h‖_W` over single eigenmodes, for reference.
    q_sharp_constant: f64,
}

#[derive(Serialize)]
struct VerifySummary {
    bounds: Vec<BoundCheck>,
    triangle: TriangleReport,
    energy: EnergyCheckReport,
    failures: Vec<String>,
}

pub fn verify(ctx: &Context) -> CliResult<()> {
    let config = ctx.config;
    config.validate(Command::Verify)?;
    let gammas = config.verify_gammas();
    let reg = &config.reg;
    let cfgs = gammas.iter().map(|&g| RegConfig::new(0.0, g, reg.c0, reg.c1, reg.k)).collect::<Result<Vec<_>, _>>()?;
    let violations: Vec<String> =
        cfgs.iter().map(|c| check_assumptions(c, config.time.t_final)).filter(|r| !r.ok).map(|r| r.summary()).collect();
    if !violations.is_empty() {
        return Err(CliError::Assumption(violations.join("; ")));
    }

    let length = config.domain.length.unwrap_or(std::f64::consts::PI);
    let basis = build_basis(length, config.verify.n_modes)?;
    let mut failures = Vec::new();
    let mut bounds = Vec::new();
    for cfg in &cfgs {
        let q = verify_q_bound(&basis, config.verify.samples, cfg, config.verify.seed)?;
        let p = verify_p_bound(&basis, config.verify.samples, cfg, config.verify.seed)?;
        if !q.pass {
            failures.push(format!("Q-bound at gamma = {} (max ratio {:.6e})", cfg.gamma, q.max_ratio));
        }
        if !p.pass {
            failures.push(format!("P-bound at gamma = {} (max ratio {:.6e})", cfg.gamma, p.max_ratio));
        }
        ctx.say(format!(
            "gamma = {:<12.6} Q max ratio {:.6e} [{}]   P max ratio {:.6e} [{}]",
            cfg.gamma,
            q.max_ratio,
            verdict(q.pass),
            p.max_ratio,
            verdict(p.pass)
        ));
        let q_sharp_constant = q.single_mode_sup * cfg.c0 / cfg.gamma.sqrt();
        bounds.push(BoundCheck { gamma: cfg.gamma, q, p, q_sharp_constant });
    }

    let setup = config.oracle_setup(gammas[0]);
    let triangle = oracle_triangle(&setup)?;
    if !triangle.pass {
        failures.push(format!("oracle triangle (max distance {:.3e})", triangle.max_distance()));
    }
    ctx.say(format!("oracle triangle max distance {:.3e} [{}]", triangle.max_distance(), verdict(triangle.pass)));
    let energy = energy_check(&setup, config.verify.energy_samples)?;
    if !energy.pass {
        failures.push(format!("energy envelope (max ratio {:.6e})", energy.max_ratio));
    }
    ctx.say(format!("energy envelope max ratio {:.9} [{}]", energy.max_ratio, verdict(energy.pass)));

    let out = OutDir::create(ctx.out)?;
    let summary = VerifySummary { bounds, triangle, energy, failures };
    out.write_json("verify.json", &summary)?;
    if summary.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(summary.failures.join("; ")))
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

pub fn demo_illposed(ctx: &Context) -> CliResult<()> {
    let config = ctx.config;
    config.validate(Command::DemoIllposed)?;
    let d = &config.illposed;
    let cfg = RegConfig::new(0.0, d.gamma, config.reg.c0, config.reg.c1, config.reg.k)?;
    let length = config.domain.length.unwrap_or(std::f64::consts::PI);
    let report = illposedness_demo(length, d.mode, config.time.t_final, d.eps, &cfg)?;
    let out = OutDir::create(ctx.out)?;
    out.write_json("illposed.json", &report)?;
    match (&report.amplification, &report.overflow) {
        (Some(a), _) => ctx.say(format!(
            "mu = {}: naive amplification {:.6e} (predicted {:.6e}); regularized {:.6} (limit {:.6})",
            report.mu, a, report.predicted, report.regularized_amplification, report.regularized_limit
        )),
        (None, Some(msg)) => ctx.say(format!("mu = {}: naive solve {msg}", report.mu)),
        (None, None) => {}
    }
    Ok(())
}
