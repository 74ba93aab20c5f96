//! Dirichlet sine eigenbasis on `(0, L)`, coefficient-space fields and norms.
//!
//! A function `h` is carried by its coefficients `h_p = <h, φ_p>` with
//! `φ_p(x) = sqrt(2/L) sin(pπx/L)` and `-Δφ_p = μ_p φ_p`, `μ_p = (pπ/L)²`.
//! All norms follow from Parseval.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    length: f64,
    eigenvalues: Vec<f64>,
}

impl EigenBasis {
    pub fn new(length: f64, n_modes: usize) -> Result<Arc<Self>> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(invalid(format!("domain length must be positive, got {length}")));
        }
        if n_modes == 0 {
            return Err(invalid("need at least one mode"));
        }
        let eigenvalues = (1..=n_modes)
            .map(|p| {
                let k = p as f64 * PI / length;
                k * k
            })
            .collect();
        Ok(Arc::new(Self { length, eigenvalues }))
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn n_modes(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `μ_p` for `p = 1..=n_modes`, stored at index `p - 1`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn mu(&self, index: usize) -> f64 {
        self.eigenvalues[index]
    }

    /// `φ_p(x)` for the zero-based mode index.
    pub fn eigenfunction(&self, index: usize, x: f64) -> f64 {
        let p = (index + 1) as f64;
        (2.0 / self.length).sqrt() * (p * PI * x / self.length).sin()
    }

    pub(crate) fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other) || **self == **other
    }
}

/// Build the basis for `(0, L)` with `n_modes` modes.
pub fn build_basis(length: f64, n_modes: usize) -> Result<Arc<EigenBasis>> {
    EigenBasis::new(length, n_modes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    basis: Arc<EigenBasis>,
    coeffs: Vec<f64>,
}

impl SpectralField {
    pub fn new(basis: Arc<EigenBasis>, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != basis.n_modes() {
            return Err(invalid(format!("expected {} coefficients, got {}", basis.n_modes(), coeffs.len())));
        }
        if let Some(p) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(invalid(format!("coefficient {} is not finite", p + 1)));
        }
        Ok(Self { basis, coeffs })
    }

    /// Construct without the finiteness check; used for overflowed naive solves.
    pub(crate) fn new_unchecked(basis: Arc<EigenBasis>, coeffs: Vec<f64>) -> Self {
        debug_assert_eq!(coeffs.len(), basis.n_modes());
        Self { basis, coeffs }
    }

    pub fn zeros(basis: Arc<EigenBasis>) -> Self {
        let n = basis.n_modes();
        Self { basis, coeffs: vec![0.0; n] }
    }

    /// Field with a single nonzero coefficient on the zero-based mode `index`.
    pub fn single_mode(basis: Arc<EigenBasis>, index: usize, value: f64) -> Result<Self> {
        if index >= basis.n_modes() {
            return Err(invalid(format!("mode index {index} out of range")));
        }
        let mut field = Self::zeros(basis);
        field.coeffs[index] = value;
        Ok(field)
    }

    /// Coefficients from a closure over `(index, μ)`.
    pub fn from_fn(basis: Arc<EigenBasis>, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let coeffs = basis.eigenvalues().iter().enumerate().map(|(i, &mu)| f(i, mu)).collect();
        Self::new(basis, coeffs)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn check_same_basis(&self, other: &Self) -> Result<()> {
        if self.basis.same_as(&other.basis) {
            Ok(())
        } else {
            Err(Error::BasisMismatch)
        }
    }

    /// `self + scale * other`.
    pub fn axpy(&self, scale: f64, other: &Self) -> Result<Self> {
        self.check_same_basis(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + scale * b).collect();
        Self::new(self.basis.clone(), coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.axpy(-1.0, other)
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Coefficient-wise multiplication by a spectral symbol `s(μ_p)`.
    pub fn map_symbol(&self, symbol: impl Fn(f64) -> f64) -> Self {
        let coeffs = self.coeffs.iter().zip(self.basis.eigenvalues()).map(|(c, &mu)| symbol(mu) * c).collect();
        Self { basis: self.basis.clone(), coeffs }
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_same_basis(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }

    pub fn norm_l2(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Full H¹ norm `sqrt(Σ (1 + μ_p) h_p²)`.
    pub fn norm_h1(&self) -> f64 {
        self.weighted_sq(|mu| 1.0 + mu).sqrt()
    }

    /// `‖∇h‖ = sqrt(Σ μ_p h_p²)`.
    pub fn norm_grad(&self) -> f64 {
        self.weighted_sq(|mu| mu).sqrt()
    }

    fn weighted_sq(&self, weight: impl Fn(f64) -> f64) -> f64 {
        self.coeffs.iter().zip(self.basis.eigenvalues()).map(|(c, &mu)| weight(mu) * c * c).sum()
    }

    /// Gevrey norm `sqrt(Σ μ_p^α e^{2σμ_p} h_p²)`.
    ///
    /// Terms are combined in log space so large `σμ_p` with tiny coefficients
    /// stays representable; a result beyond `f64::MAX` is a range error.
    pub fn norm_gevrey(&self, sigma: f64, alpha: f64) -> Result<f64> {
        if !(sigma > 0.0) {
            return Err(invalid(format!("Gevrey order must be positive, got {sigma}")));
        }
        if !(alpha >= 0.0) {
            return Err(invalid(format!("Gevrey index must be nonnegative, got {alpha}")));
        }
        let log_terms: Vec<f64> = self
            .coeffs
            .iter()
            .zip(self.basis.eigenvalues())
            .filter(|(c, _)| **c != 0.0)
            .map(|(c, &mu)| alpha * mu.ln() + 2.0 * sigma * mu + 2.0 * c.abs().ln())
            .collect();
        let Some(max) = log_terms.iter().copied().reduce(f64::max) else {
            return Ok(0.0);
        };
        let sum: f64 = log_terms.iter().map(|l| (l - max).exp()).sum();
        let norm = (0.5 * (max + sum.ln())).exp();
        if norm.is_finite() {
            Ok(norm)
        } else {
            Err(Error::Range(format!("Gevrey norm (sigma = {sigma}, alpha = {alpha}) overflows; band-limit the field")))
        }
    }

    /// Point values `Σ_p h_p φ_p(x)` on a physical grid in `[0, L]`.
    pub fn synthesize(&self, x_grid: &[f64]) -> Result<Vec<f64>> {
        let length = self.basis.length();
        x_grid
            .iter()
            .map(|&x| {
                if !(0.0..=length).contains(&x) {
                    return Err(invalid(format!("grid point {x} outside [0, {length}]")));
                }
                if x == 0.0 || x == length {
                    return Ok(0.0);
                }
                Ok(self.coeffs.iter().enumerate().map(|(i, c)| c * self.basis.eigenfunction(i, x)).sum())
            })
            .collect()
    }
}

/// Time-gridded `(u, u_t)` carried in coefficient space.
///
/// `invalid[i]` marks slices whose coefficients overflowed (naive backward
/// solves only); every other slice is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    basis: Arc<EigenBasis>,
    times: Vec<f64>,
    values: Vec<SpectralField>,
    dvalues: Vec<SpectralField>,
    invalid: Vec<bool>,
}

impl Trajectory {
    pub fn new(
        basis: Arc<EigenBasis>,
        times: Vec<f64>,
        values: Vec<SpectralField>,
        dvalues: Vec<SpectralField>,
    ) -> Result<Self> {
        let mask = vec![false; times.len()];
        Self::with_mask(basis, times, values, dvalues, mask)
    }

    pub(crate) fn with_mask(
        basis: Arc<EigenBasis>,
        times: Vec<f64>,
        values: Vec<SpectralField>,
        dvalues: Vec<SpectralField>,
        mask: Vec<bool>,
    ) -> Result<Self> {
        if mask.len() != times.len() {
            return Err(invalid("invalid mask length differs from the time grid"));
        }
        if values.len() != times.len() || dvalues.len() != times.len() {
            return Err(invalid_len(times.len(), values.len(), dvalues.len()));
        }
        check_monotone(&times)?;
        for ((u, du), bad) in values.iter().zip(&dvalues).zip(&mask) {
            if !u.basis.same_as(&basis) || !du.basis.same_as(&basis) {
                return Err(Error::BasisMismatch);
            }
            if !bad && u.coeffs.iter().chain(&du.coeffs).any(|c| !c.is_finite()) {
                return Err(invalid("trajectory holds non-finite values"));
            }
        }
        Ok(Self { basis, times, values, dvalues, invalid: mask })
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[SpectralField] {
        &self.values
    }

    pub fn dvalues(&self) -> &[SpectralField] {
        &self.dvalues
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn invalid_mask(&self) -> &[bool] {
        &self.invalid
    }

    pub fn is_all_valid(&self) -> bool {
        !self.invalid.iter().any(|&b| b)
    }

    /// Largest `‖u(t)‖` (or `‖u_t(t)‖` when `derivative`) over the grid.
    pub fn sup_norm(&self, derivative: bool) -> f64 {
        let fields = if derivative { &self.dvalues } else { &self.values };
        fields.iter().map(SpectralField::norm_l2).fold(0.0, f64::max)
    }

    /// `sup_t ‖self(t) - other(t)‖ / sup_t ‖other(t)‖` over both `u` and `u_t`.
    pub fn relative_sup_distance(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        let mut diff = 0.0f64;
        for i in 0..self.len() {
            diff = diff
                .max(self.values[i].sub(&other.values[i])?.norm_l2())
                .max(self.dvalues[i].sub(&other.dvalues[i])?.norm_l2());
        }
        let scale = other.sup_norm(false).max(other.sup_norm(true));
        Ok(if scale == 0.0 { diff } else { diff / scale })
    }

    pub fn check_compatible(&self, other: &Self) -> Result<()> {
        if !self.basis.same_as(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        if self.times.len() != other.times.len()
            || self.times.iter().zip(&other.times).any(|(a, b)| (a - b).abs() > 1e-12 * (1.0 + a.abs()))
        {
            return Err(invalid("trajectories use different time grids"));
        }
        Ok(())
    }
}

fn invalid_len(times: usize, values: usize, dvalues: usize) -> Error {
    invalid(format!("trajectory length mismatch: {times} times, {values} values, {dvalues} derivatives"))
}

fn check_monotone(times: &[f64]) -> Result<()> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(invalid("time grid holds non-finite values"));
    }
    let increasing = times.windows(2).all(|w| w[1] > w[0]);
    let decreasing = times.windows(2).all(|w| w[1] < w[0]);
    if increasing || decreasing {
        Ok(())
    } else {
        Err(invalid("time grid must be strictly monotone"))
    }
}

/// `count` equispaced times on `[0, t_end]`, increasing.
pub fn uniform_grid(t_end: f64, count: usize) -> Result<Vec<f64>> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(invalid(format!("final time must be positive, got {t_end}")));
    }
    if count < 2 {
        return Err(invalid("time grid needs at least two points"));
    }
    let last = (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { t_end } else { t_end * i as f64 / last }).collect())
}

/// Composite trapezoid of `values` over the (possibly nonuniform) grid.
pub fn trapezoid(times: &[f64], values: &[f64]) -> f64 {
    times.windows(2).zip(values.windows(2)).map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn eigenvalues_for_pi_interval_are_squares() {
        let basis = build_basis(PI, 3).unwrap();
        for (mu, expected) in basis.eigenvalues().iter().zip([1.0, 4.0, 9.0]) {
            assert!((mu - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
    }

    #[test]
    fn eigenvalues_unit_and_two_pi_intervals() {
        let unit = build_basis(1.0, 1).unwrap();
        assert_relative_eq!(unit.mu(0), PI * PI, max_relative = 1e-15);
        let wide = build_basis(2.0 * PI, 2).unwrap();
        assert_relative_eq!(wide.mu(0), 0.25, max_relative = 1e-15);
        assert_relative_eq!(wide.mu(1), 1.0, max_relative = 1e-15);
    }

    #[test]
    fn basis_rejects_bad_arguments() {
        assert!(matches!(build_basis(0.0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_basis(-1.0, 3), Err(Error::InvalidArgument(_))));
        assert!(matches!(build_basis(1.0, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn l2_norm_examples() {
        let basis = build_basis(PI, 2).unwrap();
        assert_eq!(SpectralField::zeros(basis.clone()).norm_l2(), 0.0);
        assert_eq!(SpectralField::single_mode(basis.clone(), 0, 3.0).unwrap().norm_l2(), 3.0);
        assert_eq!(SpectralField::new(basis, vec![3.0, 4.0]).unwrap().norm_l2(), 5.0);
    }

    #[test]
    fn h1_and_grad_norm_examples() {
        // μ = 3 needs L = π/√3.
        let basis = build_basis(PI / 3f64.sqrt(), 1).unwrap();
        let f = SpectralField::single_mode(basis, 0, 1.0).unwrap();
        assert_relative_eq!(f.norm_h1(), 2.0, max_relative = 1e-14);

        let wide = build_basis(2.0 * PI, 1).unwrap();
        let g = SpectralField::single_mode(wide, 0, 2.0).unwrap();
        assert_relative_eq!(g.norm_h1(), 5f64.sqrt(), max_relative = 1e-14);

        let basis = build_basis(PI, 2).unwrap();
        assert_eq!(SpectralField::zeros(basis.clone()).norm_h1(), 0.0);
        let h = SpectralField::single_mode(basis.clone(), 1, 1.0).unwrap();
        assert_relative_eq!(h.norm_grad(), 2.0, max_relative = 1e-15);
        let k = SpectralField::new(basis, vec![1.0, 1.0]).unwrap();
        assert_relative_eq!(k.norm_grad(), 5f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn gevrey_norm_examples() {
        let basis = build_basis(PI, 1).unwrap();
        assert_eq!(SpectralField::zeros(basis.clone()).norm_gevrey(1.0, 1.0).unwrap(), 0.0);
        let f = SpectralField::single_mode(basis, 0, 1.0).unwrap();
        assert_relative_eq!(f.norm_gevrey(1.0, 1.0).unwrap(), std::f64::consts::E, max_relative = 1e-14);

        // μ = 2 needs L = π/√2.
        let basis = build_basis(PI / 2f64.sqrt(), 1).unwrap();
        let g = SpectralField::single_mode(basis, 0, (-2.0f64).exp()).unwrap();
        assert_relative_eq!(g.norm_gevrey(1.0, 0.0).unwrap(), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn gevrey_overflow_is_range_error_and_tiny_coeffs_survive() {
        let basis = build_basis(PI, 40).unwrap();
        // μ_30 = 900: e^{1800} overflows unless the coefficient compensates.
        let big = SpectralField::single_mode(basis.clone(), 29, 1.0).unwrap();
        assert!(matches!(big.norm_gevrey(1.0, 1.0), Err(Error::Range(_))));
        let tiny = SpectralField::single_mode(basis, 29, 1e-300).unwrap();
        let expected = (0.5 * (900f64.ln() + 1800.0 + 2.0 * 1e-300f64.ln())).exp();
        assert_relative_eq!(tiny.norm_gevrey(1.0, 1.0).unwrap(), expected, max_relative = 1e-12);
    }

    #[test]
    fn gevrey_rejects_nonpositive_order() {
        let basis = build_basis(PI, 1).unwrap();
        let f = SpectralField::zeros(basis);
        assert!(f.norm_gevrey(0.0, 1.0).is_err());
    }

    #[test]
    fn synthesize_examples() {
        let basis = build_basis(PI, 1).unwrap();
        let f = SpectralField::single_mode(basis.clone(), 0, 1.0).unwrap();
        let values = f.synthesize(&[0.0, PI / 2.0, PI]).unwrap();
        assert_eq!(values[0], 0.0);
        assert_relative_eq!(values[1], (2.0 / PI).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(values[1], 0.7978846, max_relative = 1e-7);
        assert_eq!(values[2], 0.0);

        let zero = SpectralField::zeros(basis.clone());
        assert!(zero.synthesize(&[0.3, 1.2, 2.9]).unwrap().iter().all(|&v| v == 0.0));
        assert!(f.synthesize(&[-0.1]).is_err());
        assert!(f.synthesize(&[PI + 0.1]).is_err());
    }

    #[test]
    fn field_rejects_wrong_length_and_nan() {
        let basis = build_basis(PI, 2).unwrap();
        assert!(SpectralField::new(basis.clone(), vec![1.0]).is_err());
        assert!(SpectralField::new(basis, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn basis_mismatch_is_reported() {
        let a = SpectralField::zeros(build_basis(PI, 2).unwrap());
        let b = SpectralField::zeros(build_basis(1.0, 2).unwrap());
        assert_eq!(a.sub(&b).unwrap_err(), Error::BasisMismatch);
    }

    #[test]
    fn uniform_grid_endpoints() {
        let grid = uniform_grid(0.5, 201).unwrap();
        assert_eq!(grid[0], 0.0);
        assert_eq!(grid[200], 0.5);
        assert!(uniform_grid(0.5, 1).is_err());
    }
}
