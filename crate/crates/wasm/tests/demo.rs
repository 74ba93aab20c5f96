use std::f64::consts::PI;

use qrwave_wasm::demo::{reconstruct, sweep_curve, symbols};

#[test]
fn symbols_split_at_cutoff_and_sum_to_doubled_laplacian() {
    let gamma = 4f64.exp();
    let s = symbols(gamma, 8.0, 81).unwrap();
    assert_eq!(s.mu.len(), 81);
    for ((&mu, &q), &p) in s.mu.iter().zip(&s.q).zip(&s.p) {
        if mu >= 2.0 {
            assert_eq!((q, p), (2.0 * mu, 0.0));
        } else {
            assert_eq!((q, p), (0.0, -2.0 * mu));
        }
        assert_eq!(p, -2.0 * mu + q);
    }
}

#[test]
fn symbols_reject_bad_ranges() {
    assert!(symbols(10.0, 1.0, 1).is_err());
    assert!(symbols(10.0, -1.0, 5).is_err());
    assert!(symbols(0.5, 1.0, 5).is_err());
}

#[test]
fn reconstruction_profiles_share_the_grid() {
    let r = reconstruct(1e-4, 0.0, 16, 3, 41).unwrap();
    assert_eq!(r.x.len(), 41);
    assert_eq!((r.x[0], r.x[40]), (0.0, PI));
    for v in [&r.truth, &r.naive, &r.regularized] {
        assert_eq!(v.len(), 41);
        assert_eq!((v[0], v[40]), (0.0, 0.0));
    }
    assert_eq!(r.gamma, 100.0);
    assert!((r.cutoff - 0.5 * 100f64.ln()).abs() < 1e-15);
}

#[test]
fn regularized_beats_naive_and_improves_with_less_noise() {
    // Below ε ≈ 1e-2 the error plateaus at the bias of the modes above the
    // cutoff, so compare well separated levels.
    let coarse = reconstruct(1e-1, 0.0, 16, 1, 11).unwrap();
    let fine = reconstruct(1e-6, 0.0, 16, 1, 11).unwrap();
    assert!(fine.regularized_error < coarse.regularized_error);
    for r in [&coarse, &fine] {
        assert!(r.regularized_error * 1e6 < r.naive_error);
    }
}

#[test]
fn naive_overflow_yields_nan_profile() {
    // μ = 64² has e^{μT} far beyond f64 range.
    let r = reconstruct(1e-3, 0.0, 64, 1, 5).unwrap();
    assert!(r.naive_overflow);
    assert!(r.naive.iter().all(|v| v.is_nan()));
    assert!(r.naive_error.is_infinite());
    assert!(r.regularized.iter().all(|v| v.is_finite()));
}

#[test]
fn reconstruction_at_final_time_matches_data_up_to_noise() {
    let r = reconstruct(1e-6, 0.5, 16, 1, 11).unwrap();
    assert!(r.regularized_error < 1e-4, "{}", r.regularized_error);
}

#[test]
fn reconstruction_rejects_bad_arguments() {
    assert!(reconstruct(0.0, 0.0, 16, 1, 11).is_err());
    assert!(reconstruct(1e-3, 0.7, 16, 1, 11).is_err());
    assert!(reconstruct(1e-3, 0.0, 4, 1, 11).is_err());
    assert!(reconstruct(1e-3, 0.0, 16, 1, 1).is_err());
}

#[test]
fn sweep_envelope_dominates_error() {
    let c = sweep_curve(2, 0.25, 6).unwrap();
    assert_eq!(c.eps.len(), 6);
    assert!(c.eps.windows(2).all(|w| w[1] < w[0]));
    assert!((c.eps[0] - 1e-2).abs() < 1e-17 && (c.eps[5] - 1e-6).abs() < 1e-20);
    for (e, b) in c.error.iter().zip(&c.envelope) {
        assert!(e <= &(b * (1.0 + 1e-12)));
    }
    assert!(c.spread >= 1.0 && c.slope.is_finite());
}

#[test]
fn sweep_rejects_bad_arguments() {
    assert!(sweep_curve(0, 0.0, 5).is_err());
    assert!(sweep_curve(1, 0.0, 1).is_err());
}
