//! Shared fixtures for the benchmarks.

use entrev_core::PhysicalParams;

/// Reference parameters: `lambda/W = 0.1`, `alpha = 1/sqrt(10)`.
pub fn reference_params() -> PhysicalParams {
    PhysicalParams::from_ratio(0.1, 1.0 / 10f64.sqrt()).expect("valid parameters")
}

/// `n` evenly spaced times over `tau = lambda t` in `[0, 50]`.
pub fn times(params: &PhysicalParams, n: usize) -> Vec<f64> {
    let t_max = 50.0 / params.lambda();
    (0..n).map(|k| t_max * k as f64 / (n - 1) as f64).collect()
}
