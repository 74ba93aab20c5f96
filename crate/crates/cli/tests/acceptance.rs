//! Acceptance suite. Runs every criterion, prints one line each and exits
//! nonzero if any of them fails.

use std::f64::consts::PI;
use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qrwave::experiments::{
    convergence_sweep, energy_check, illposedness_demo, oracle_triangle, weak_noise_experiment, NoiseMode, OracleSetup,
    SweepConfig, ORACLE_TOLERANCE, SPREAD_LIMIT,
};
use qrwave::operators::{apply_p, apply_q, doubled_laplacian, verify_p_bound, verify_q_bound};
use qrwave::rng;
use qrwave::solvers::{forward_solve, regularized_backward_solve, TerminalData};
use qrwave::spectral::{build_basis, uniform_grid};
use qrwave::{RegConfig, SpectralField};

struct Outcome {
    pass: bool,
    detail: String,
}

type Check = fn() -> Result<Outcome, String>;

fn main() -> ExitCode {
    let checks: [(&str, Check); 9] = [
        ("conditional estimates", criterion_1),
        ("operator identity", criterion_2),
        ("oracle triangle", criterion_3),
        ("energy estimate", criterion_4),
        ("ill-posedness vs stability", criterion_5),
        ("convergence envelope", criterion_6),
        ("exact recovery", criterion_7),
        ("logarithmic-rate variant", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (n, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({:.2} s) {}", n + 1, start.elapsed().as_secs_f64(), outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took < limit, format!("runtime {:.2} s of {} s", took.as_secs_f64(), limit.as_secs()))
}

fn criterion_1() -> Result<Outcome, String> {
    let start = Instant::now();
    let basis = build_basis(PI, 64).map_err(err)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for gamma in [4f64.exp(), 8f64.exp(), 1e3] {
        let cfg = RegConfig::new(0.0, gamma, 2.0, 1.0, 1.0).map_err(err)?;
        let q = verify_q_bound(&basis, 1000, &cfg, 7).map_err(err)?;
        let p = verify_p_bound(&basis, 1000, &cfg, 7).map_err(err)?;
        pass &= q.pass && p.pass;
        parts.push(format!("gamma {gamma:.4}: Q {:.4e} P {:.4e}", q.max_ratio, p.max_ratio));
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    Ok(Outcome { pass: pass && fast, detail: format!("{}; {time}", parts.join(", ")) })
}

fn criterion_2() -> Result<Outcome, String> {
    let basis = build_basis(PI, 64).map_err(err)?;
    let mut worst_ulps = 0.0f64;
    let mut composition_ok = true;
    for (i, gamma) in (0..1000u64).zip([4f64.exp(), 8f64.exp(), 1e3].into_iter().cycle()) {
        let cfg = RegConfig::new(0.0, gamma, 2.0, 1.0, 1.0).map_err(err)?;
        let mut stream = rng::stream(11, i);
        let h = SpectralField::new(basis.clone(), rng::normals(&mut stream, basis.n_modes())).map_err(err)?;
        let p = apply_p(&h, &cfg);
        let rhs = doubled_laplacian(&h).axpy(1.0, &apply_q(&h, &cfg)).map_err(err)?;
        for (a, b) in p.coeffs().iter().zip(rhs.coeffs()) {
            let ulp = f64::EPSILON * a.abs().max(b.abs());
            if a != b {
                worst_ulps = worst_ulps.max((a - b).abs() / ulp);
            }
        }
        composition_ok &= apply_q(&p, &cfg).is_zero() && apply_p(&apply_q(&h, &cfg), &cfg).is_zero();
    }
    Ok(Outcome {
        pass: worst_ulps <= 4.0 && composition_ok,
        detail: format!("max identity deviation {worst_ulps} ulp, compositions vanish: {composition_ok}"),
    })
}

fn criterion_3() -> Result<Outcome, String> {
    let start = Instant::now();
    let report = oracle_triangle(&OracleSetup::default()).map_err(err)?;
    let (fast, time) = within(Duration::from_secs(30), start);
    Ok(Outcome {
        pass: report.pass && report.max_distance() <= ORACLE_TOLERANCE && fast,
        detail: format!(
            "closed/rk4 {:.3e}, closed/picard {:.3e}, rk4/picard {:.3e}; {time}",
            report.closed_vs_rk4, report.closed_vs_picard, report.rk4_vs_picard
        ),
    })
}

fn criterion_4() -> Result<Outcome, String> {
    let report = energy_check(&OracleSetup::default(), 20).map_err(err)?;
    Ok(Outcome {
        pass: report.pass && report.rho >= 2.0,
        detail: format!("rho {:.3}, max E(t)/envelope {:.9}", report.rho, report.max_ratio),
    })
}

fn criterion_5() -> Result<Outcome, String> {
    let cfg = RegConfig::new(1e-3, 4f64.exp(), 2.0, 1.0, 1.0).map_err(err)?;
    let report = illposedness_demo(PI, 3, 0.5, 1e-3, &cfg).map_err(err)?;
    let amp = report.amplification.ok_or("naive solve overflowed")?;
    let close = (amp / 4.5f64.exp() - 1.0).abs() <= 0.01;
    let stable = report.regularized_amplification <= 2.0 * 0.5f64.exp();
    Ok(Outcome {
        pass: report.mu == 9.0 && close && stable,
        detail: format!(
            "naive {amp:.5} vs e^4.5 = {:.5}, regularized {:.5} vs limit {:.5}",
            4.5f64.exp(),
            report.regularized_amplification,
            2.0 * 0.5f64.exp()
        ),
    })
}

fn criterion_6() -> Result<Outcome, String> {
    let start = Instant::now();
    let report = convergence_sweep(&SweepConfig::standard()).map_err(err)?;
    let (fast, time) = within(Duration::from_secs(60), start);
    let spreads = report.spread.iter().map(|s| format!("{s:.2}")).collect::<Vec<_>>().join("/");
    let off: Vec<String> = report
        .slopes
        .iter()
        .filter(|s| !s.within_tolerance)
        .map(|s| match s.measured {
            Some(m) => format!("metric {} t={} slope {m:.3} vs {:.3}", s.metric, s.t, s.predicted),
            None => format!("metric {} t={} slope undefined", s.metric, s.t),
        })
        .collect();
    let slopes = if off.is_empty() { "all slopes within 0.15".to_string() } else { off.join(", ") };
    Ok(Outcome {
        pass: report.skipped.is_empty()
            && report.spread.iter().all(|&s| s <= SPREAD_LIMIT)
            && report.envelope_ok()
            && report.slopes_ok()
            && fast,
        detail: format!("spreads {spreads}; {slopes}; {time}"),
    })
}

fn criterion_7() -> Result<Outcome, String> {
    let length = 4.0 * PI;
    let basis = build_basis(length, 16).map_err(err)?;
    let cfg = RegConfig::new(0.0, 4f64.exp(), 2.0, 1.0, 1.0).map_err(err)?;
    let active = |i: usize| i < 4;
    if (0..16).filter(|&i| active(i)).any(|i| cfg.in_q(basis.mu(i))) {
        return Err("truth has a mode at or above the cutoff".into());
    }
    let u0 = SpectralField::from_fn(basis.clone(), |i, _| if active(i) { 1.0 / (i + 1) as f64 } else { 0.0 })
        .map_err(err)?;
    let u1 = SpectralField::from_fn(basis.clone(), |i, _| if active(i) { 0.3 * (i as f64 - 1.5) } else { 0.0 })
        .map_err(err)?;
    let t_final = 0.5;
    let times = uniform_grid(t_final, 201).map_err(err)?;
    let truth = forward_solve(&u0, &u1, &times).map_err(err)?;
    let last = truth.len() - 1;
    let td = TerminalData::new(truth.values()[last].clone(), truth.dvalues()[last].clone(), t_final).map_err(err)?;
    let recon = regularized_backward_solve(&td, &cfg, &times).map_err(err)?;

    let sup = |f: &dyn Fn(&SpectralField) -> f64, derivative: bool| -> Result<f64, String> {
        let (a, b) = if derivative { (recon.dvalues(), truth.dvalues()) } else { (recon.values(), truth.values()) };
        let mut diff = 0.0f64;
        let mut scale = 0.0f64;
        for (r, t) in a.iter().zip(b) {
            diff = diff.max(f(&r.sub(t).map_err(err)?));
            scale = scale.max(f(t));
        }
        Ok(diff / scale)
    };
    let e_u = sup(&SpectralField::norm_l2, false)?;
    let e_ut = sup(&SpectralField::norm_l2, true)?;
    let e_grad = sup(&SpectralField::norm_grad, false)?;
    Ok(Outcome {
        pass: e_u <= 1e-9 && e_ut <= 1e-9 && e_grad <= 1e-9,
        detail: format!("relative sup error u {e_u:.3e}, u_t {e_ut:.3e}, grad u {e_grad:.3e}"),
    })
}

fn criterion_8() -> Result<Outcome, String> {
    let config = SweepConfig { noise: Some(NoiseMode::L2Only), ..SweepConfig::standard() };
    let report = weak_noise_experiment(&config).map_err(err)?;
    Ok(Outcome {
        pass: report.bounded() && report.skipped.is_empty(),
        detail: format!("ratio spread {:.3} over {} levels", report.spread, report.ratios.len()),
    })
}

fn criterion_9() -> Result<Outcome, String> {
    let root = std::env::temp_dir().join(format!("qrwave-acceptance-{}", std::process::id()));
    let runs = [("1", "a"), ("4", "b"), ("4", "c")];
    for (threads, name) in runs {
        let status = Command::new(env!("CARGO_BIN_EXE_qrwave"))
            .args(["sweep", "--quiet", "--seed", "1", "--out"])
            .arg(root.join(name))
            .env("RAYON_NUM_THREADS", threads)
            .status()
            .map_err(err)?;
        if !status.success() {
            return Err(format!("sweep exited with {status}"));
        }
    }
    let mut identical = true;
    for file in ["sweep.csv", "sweep.json"] {
        let first = fs::read(root.join("a").join(file)).map_err(err)?;
        for (_, name) in &runs[1..] {
            identical &= first == fs::read(root.join(name).join(file)).map_err(err)?;
        }
    }
    let _ = fs::remove_dir_all(&root);
    Ok(Outcome {
        pass: identical,
        detail: "sweep.csv and sweep.json compared across RAYON_NUM_THREADS = 1, 4, 4".into(),
    })
}
