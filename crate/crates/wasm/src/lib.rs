//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function wraps a plain Rust function of the same name in
//! [`demo`], which the native tests exercise directly.

pub mod demo;

use wasm_bindgen::prelude::*;

fn js_err(e: qrwave::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Truth, naive and regularized profiles `u(x, t)` on `x_count` points.
#[wasm_bindgen]
pub struct Profiles {
    inner: demo::Profiles,
}

#[wasm_bindgen]
impl Profiles {
    #[wasm_bindgen(getter)]
    pub fn x(&self) -> Vec<f64> {
        self.inner.x.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn truth(&self) -> Vec<f64> {
        self.inner.truth.clone()
    }

    /// NaN everywhere once the naive solve overflows.
    #[wasm_bindgen(getter)]
    pub fn naive(&self) -> Vec<f64> {
        self.inner.naive.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn regularized(&self) -> Vec<f64> {
        self.inner.regularized.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn gamma(&self) -> f64 {
        self.inner.gamma
    }

    #[wasm_bindgen(getter)]
    pub fn cutoff(&self) -> f64 {
        self.inner.cutoff
    }

    #[wasm_bindgen(getter, js_name = naiveOverflow)]
    pub fn naive_overflow(&self) -> bool {
        self.inner.naive_overflow
    }

    #[wasm_bindgen(getter, js_name = regularizedError)]
    pub fn regularized_error(&self) -> f64 {
        self.inner.regularized_error
    }

    #[wasm_bindgen(getter, js_name = naiveError)]
    pub fn naive_error(&self) -> f64 {
        self.inner.naive_error
    }
}

#[wasm_bindgen]
pub fn reconstruct(eps: f64, t: f64, n_modes: usize, seed: u32, x_count: usize) -> Result<Profiles, JsError> {
    demo::reconstruct(eps, t, n_modes, u64::from(seed), x_count).map(|inner| Profiles { inner }).map_err(js_err)
}

/// Error and fitted envelope of one metric across a log-spaced noise grid.
#[wasm_bindgen]
pub struct SweepCurve {
    inner: demo::SweepCurve,
}

#[wasm_bindgen]
impl SweepCurve {
    #[wasm_bindgen(getter)]
    pub fn eps(&self) -> Vec<f64> {
        self.inner.eps.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn error(&self) -> Vec<f64> {
        self.inner.error.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn envelope(&self) -> Vec<f64> {
        self.inner.envelope.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn slope(&self) -> f64 {
        self.inner.slope
    }

    #[wasm_bindgen(getter, js_name = predictedSlope)]
    pub fn predicted_slope(&self) -> f64 {
        self.inner.predicted_slope
    }

    #[wasm_bindgen(getter)]
    pub fn spread(&self) -> f64 {
        self.inner.spread
    }
}

#[wasm_bindgen(js_name = sweepCurve)]
pub fn sweep_curve(metric: usize, t: f64, eps_count: usize) -> Result<SweepCurve, JsError> {
    demo::sweep_curve(metric, t, eps_count).map(|inner| SweepCurve { inner }).map_err(js_err)
}

/// Flattened `[μ..., q(μ)..., p(μ)...]` on `count` points of `[0, mu_max]`.
#[wasm_bindgen]
pub fn symbols(gamma: f64, mu_max: f64, count: usize) -> Result<Vec<f64>, JsError> {
    demo::symbols(gamma, mu_max, count).map(|s| [s.mu, s.q, s.p].concat()).map_err(js_err)
}
