use serde::Serialize;

use crate::operators::RegConfig;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl AssumptionReport {
    pub fn summary(&self) -> String {
        self.violations.iter().map(|v| v.detail.as_str()).collect::<Vec<_>>().join("; ")
    }
}

/// Checks `3 C1 T < 2`, `γ ≥ e^{2/C1}` and `γ² ε ≤ K`.
pub fn check_assumptions(cfg: &RegConfig, t_final: f64) -> AssumptionReport {
    let mut violations = Vec::new();
    let horizon = 3.0 * cfg.c1 * t_final;
    if !(horizon < 2.0) {
        violations.push(Violation { condition: "3*C1*T < 2", detail: format!("3*C1*T = {horizon} is not below 2") });
    }
    let gamma_min = (2.0 / cfg.c1).exp();
    // Relative slack so γ = ε^{-1/2} schedules landing on the boundary pass.
    if !(cfg.gamma >= gamma_min * (1.0 - 1e-12)) {
        violations.push(Violation {
            condition: "gamma >= exp(2/C1)",
            detail: format!("gamma = {} is below exp(2/C1) = {gamma_min}", cfg.gamma),
        });
    }
    let g2e = cfg.gamma * cfg.gamma * cfg.eps;
    if !(g2e <= cfg.k * (1.0 + 1e-12)) {
        violations.push(Violation {
            condition: "gamma^2*eps <= K",
            detail: format!("gamma^2*eps = {g2e} exceeds K = {}", cfg.k),
        });
    }
    AssumptionReport { ok: violations.is_empty(), violations }
}
