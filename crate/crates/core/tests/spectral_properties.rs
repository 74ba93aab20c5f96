use std::f64::consts::PI;

use proptest::prelude::*;
use qrwave::spectral::{build_basis, trapezoid, SpectralField};

fn coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..=max_len)
}

proptest! {
    #[test]
    fn norm_ordering(c in coeffs(32), length in 0.5f64..10.0, sigma in 0.01f64..2.0) {
        let basis = build_basis(length, c.len()).unwrap();
        let f = SpectralField::new(basis, c).unwrap();
        let slack = 1.0 + 1e-12;
        prop_assert!(f.norm_l2() <= f.norm_h1() * slack);
        prop_assert!(f.norm_grad() <= f.norm_h1() * slack);
        if let Ok(g) = f.norm_gevrey(sigma, 1.0) {
            prop_assert!(f.norm_grad() <= g * slack);
        }
    }

    #[test]
    fn norms_are_homogeneous(c in coeffs(24), scale in -50.0f64..50.0) {
        let basis = build_basis(PI, c.len()).unwrap();
        let f = SpectralField::new(basis, c).unwrap();
        let g = f.scale(scale);
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * b.abs().max(1e-300);
        prop_assert!(close(g.norm_l2(), scale.abs() * f.norm_l2()));
        prop_assert!(close(g.norm_h1(), scale.abs() * f.norm_h1()));
        prop_assert!(close(g.norm_grad(), scale.abs() * f.norm_grad()));
        prop_assert!(close(g.norm_gevrey(0.5, 1.0).unwrap(), scale.abs() * f.norm_gevrey(0.5, 1.0).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn parseval_matches_quadrature(a in coeffs(32), b in coeffs(32), length in 0.5f64..5.0) {
        let n = a.len().max(b.len());
        let basis = build_basis(length, n).unwrap();
        let pad = |mut v: Vec<f64>| { v.resize(n, 0.0); SpectralField::new(basis.clone(), v).unwrap() };
        let (f, g) = (pad(a), pad(b));
        let x: Vec<f64> = (0..10_000).map(|i| if i == 9_999 { length } else { length * i as f64 / 9_999.0 }).collect();
        let fx = f.synthesize(&x).unwrap();
        let gx = g.synthesize(&x).unwrap();
        let prod: Vec<f64> = fx.iter().zip(&gx).map(|(p, q)| p * q).collect();
        let quad = trapezoid(&x, &prod);
        let exact = f.inner(&g).unwrap();
        let scale = f.norm_l2() * g.norm_l2();
        prop_assert!((quad - exact).abs() <= 1e-6 * scale, "quad {quad} exact {exact}");
    }
}
