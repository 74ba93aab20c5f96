//! Noise, assumptions, error metrics and convergence sweeps.

mod assumptions;
mod checks;
mod illposed;
mod metrics;
mod noise;
mod sweep;
mod truth;

pub use assumptions::{check_assumptions, AssumptionReport, Violation};
pub use checks::{energy_check, oracle_triangle, EnergyCheckReport, OracleSetup, TriangleReport, ORACLE_TOLERANCE};
pub use illposed::{illposedness_demo, IllposedReport};
pub use metrics::{bound_shapes, error_envelope, error_report, gevrey_mass, ErrorReport};
pub use noise::{add_noise, noise_norm, perturbation, NoiseMode, NoiseSpec};
pub use sweep::{
    convergence_sweep, fit_slope, weak_noise_experiment, SkippedEps, SlopeFit, SweepConfig, SweepReport, SweepRow,
    WeakNoiseReport, SLOPE_TOLERANCE, SPREAD_LIMIT,
};
pub use truth::{Manufactured, TruthSpec};
