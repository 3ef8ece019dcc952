//! Single-body dynamics of one atom coupled to a Lorentzian reservoir.
//!
//! The atom starts excited with the reservoir in vacuum. The state stays in
//! the one-excitation sector, `c1 |e>|0>_r + c2 |g>|1>_r`, where `|1>_r` is
//! the normalized collective one-exciton state of the reservoir. This makes
//! each atom-reservoir pair an effective two-qubit system.
//!
//! Three independent routes to the amplitudes are provided: closed forms,
//! fourth-order integration of the pseudomode equations, and direct
//! integration of the memory-kernel equation.

mod integrators;
mod params;
mod quasimode;

pub use integrators::{
    integrate_memory_kernel, integrate_memory_kernel_recurrence, integrate_pseudomode,
    max_resolved_step, KernelSample,
};
pub use params::{coupling_regime, CouplingRegime, PhysicalParams, DEGENERACY_TOL};
pub use quasimode::{
    excited_population_extrema, quasimode_populations, Extremum, ExtremumKind, QuasimodePopulations,
};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Single-body amplitudes at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeState {
    pub t: f64,
    /// Amplitude of `|e>|0>_r`.
    pub c1: Complex64,
    /// Amplitude of `|g>|1>_r`, fixed real and non-negative.
    pub c2: f64,
    /// Pseudomode amplitude.
    pub b: Complex64,
}

impl AmplitudeState {
    /// `|c1|^2`, the excited-state population.
    pub fn excited_population(&self) -> f64 {
        self.c1.norm_sqr()
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_finite() && t >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTime(t))
    }
}

/// `(sin(d t / 2), cos(d t / 2), d)` with the rounding errors of `d` and of
/// the product `d t` folded back in to first order.
fn half_angle(params: &PhysicalParams, t: f64) -> (f64, f64, f64) {
    let disc = params.discriminant();
    let d = disc.sqrt();
    let d_lo = (-d).mul_add(d, disc) / (2.0 * d);
    let dt = d * t;
    let dt_lo = d.mul_add(t, -dt) + d_lo * t;
    let (s, c) = (0.5 * dt).sin_cos();
    let x_lo = 0.5 * dt_lo;
    (s + c * x_lo, c - s * x_lo, d)
}

/// `exp(-lambda t / 2)`, correcting for the rounding of the exponent.
fn envelope(lambda: f64, t: f64) -> f64 {
    let a = -0.5 * lambda * t;
    let a_lo = (-0.5 * lambda).mul_add(t, -a);
    let e = a.exp();
    e.mul_add(a_lo, e)
}

/// Real rotating-frame amplitudes `(c0, b / -i)` at time `t`.
///
/// `c0` is real and `b` is purely imaginary on resonance, so both are
/// returned as reals.
fn rotating_frame(params: &PhysicalParams, t: f64) -> (f64, f64) {
    let w = params.w();
    let lambda = params.lambda();
    match params.regime() {
        CouplingRegime::Strong => {
            let (s, c, d) = half_angle(params, t);
            let env = envelope(lambda, t);
            (env * (lambda / d).mul_add(s, c), 2.0 * w / d * env * s)
        }
        CouplingRegime::Weak => {
            // Hyperbolic continuation, written with decaying exponentials only.
            let kappa = (-params.discriminant()).sqrt();
            let slow = (0.5 * (kappa - lambda) * t).exp();
            let fast = (-0.5 * (kappa + lambda) * t).exp();
            let cosh = 0.5 * (slow + fast);
            let sinh = 0.5 * (slow - fast);
            (cosh + lambda / kappa * sinh, 2.0 * w / kappa * sinh)
        }
        CouplingRegime::Critical => {
            let env = (-0.5 * lambda * t).exp();
            (env * (1.0 + 0.5 * lambda * t), w * t * env)
        }
    }
}

/// Closed-form excited amplitude `c1(t) = c0(t) exp(-i omega0 t)`.
pub fn c1_closed(params: &PhysicalParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let (c0, _) = rotating_frame(params, t);
    Ok(Complex64::from_polar(1.0, -params.omega0() * t) * c0)
}

/// Closed-form reservoir amplitude `c2 = sqrt(1 - |c1|^2)`.
pub fn c2_closed(params: &PhysicalParams, t: f64) -> Result<f64> {
    let c1 = c1_closed(params, t)?;
    Ok((1.0 - c1.norm_sqr()).max(0.0).sqrt())
}

/// Closed-form pseudomode amplitude, `-2i (W/d) exp(-lambda t/2) sin(d t/2)`
/// in strong coupling and its continuations elsewhere.
pub fn pseudomode_b_closed(params: &PhysicalParams, t: f64) -> Result<Complex64> {
    check_time(t)?;
    let (_, b) = rotating_frame(params, t);
    Ok(Complex64::new(0.0, -b))
}

/// All closed-form amplitudes at one instant.
pub fn amplitude_state(params: &PhysicalParams, t: f64) -> Result<AmplitudeState> {
    check_time(t)?;
    let (c0, b) = rotating_frame(params, t);
    let c1 = Complex64::from_polar(1.0, -params.omega0() * t) * c0;
    Ok(AmplitudeState {
        t,
        c1,
        c2: (1.0 - c0 * c0).max(0.0).sqrt(),
        b: Complex64::new(0.0, -b),
    })
}
