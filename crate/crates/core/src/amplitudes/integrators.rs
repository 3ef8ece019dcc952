//! Fixed-step integrators for the single-body amplitudes.
//!
//! Both routes work in the frame rotating at `omega0`, where the equations
//! carry no fast phase. The pseudomode route integrates
//!
//! ```text
//! dc0/dt = -i W b
//! db/dt  = -lambda b - i W c0
//! ```
//!
//! with classic RK4. The memory-kernel route integrates
//! `dc0/dt = -W^2 int_0^t c0(s) exp(-lambda (t - s)) ds` directly.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{AmplitudeState, CouplingRegime, PhysicalParams};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest step accepted by the integrators.
///
/// In strong coupling this is a fiftieth of the oscillation period `2 pi / d`.
/// Elsewhere the same fraction of `2 pi / max(2W, lambda)` is used.
pub fn max_resolved_step(params: &PhysicalParams) -> f64 {
    let rate = match params.regime() {
        CouplingRegime::Strong => params.discriminant().sqrt(),
        _ => (2.0 * params.w()).max(params.lambda()),
    };
    2.0 * PI / rate / 50.0
}

/// Validates `(t_end, step)` and returns the uniform grid `(n_steps, h)`.
///
/// `h <= step` is chosen so that the last sample lands exactly on `t_end`.
fn grid(params: &PhysicalParams, t_end: f64, step: f64) -> Result<(usize, f64)> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_end",
            value: t_end,
            reason: "must be positive and finite",
        });
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "must be positive and finite",
        });
    }
    let max = max_resolved_step(params);
    if step > max {
        return Err(Error::StepTooCoarse { step, max });
    }
    // Tolerate t_end being an integer multiple of step up to rounding.
    let n = ((t_end / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

fn pseudomode_rhs(w: f64, lambda: f64, c0: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (-I * w * b, -lambda * b - I * w * c0)
}

fn sample(params: &PhysicalParams, t: f64, c0: Complex64, b: Complex64) -> AmplitudeState {
    AmplitudeState {
        t,
        c1: c0 * Complex64::from_polar(1.0, -params.omega0() * t),
        c2: (1.0 - c0.norm_sqr()).max(0.0).sqrt(),
        b,
    }
}

fn kahan_add(sum: &mut Complex64, comp: &mut Complex64, x: Complex64) {
    let y = x - *comp;
    let t = *sum + y;
    *comp = (t - *sum) - y;
    *sum = t;
}

/// Integrates the pseudomode pair from `(c0, b) = (1, 0)` with RK4.
///
/// Returns `n + 1` samples including `t = 0` and `t = t_end`.
pub fn integrate_pseudomode(
    params: &PhysicalParams,
    t_end: f64,
    step: f64,
) -> Result<Vec<AmplitudeState>> {
    let (n, h) = grid(params, t_end, step)?;
    let (w, lambda) = (params.w(), params.lambda());

    let mut c0 = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(sample(params, 0.0, c0, b));

    // Compensated (Kahan) accumulation keeps the state update's rounding
    // error below the truncation error down to steps of ~1e-4/W.
    let mut comp_c = Complex64::new(0.0, 0.0);
    let mut comp_b = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        let (k1c, k1b) = pseudomode_rhs(w, lambda, c0, b);
        let (k2c, k2b) = pseudomode_rhs(w, lambda, c0 + 0.5 * h * k1c, b + 0.5 * h * k1b);
        let (k3c, k3b) = pseudomode_rhs(w, lambda, c0 + 0.5 * h * k2c, b + 0.5 * h * k2b);
        let (k4c, k4b) = pseudomode_rhs(w, lambda, c0 + h * k3c, b + h * k3b);
        kahan_add(
            &mut c0,
            &mut comp_c,
            h / 6.0 * (k1c + 2.0 * k2c + 2.0 * k3c + k4c),
        );
        kahan_add(
            &mut b,
            &mut comp_b,
            h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b),
        );
        // Report the state at the representable time fl(k h): shift it by
        // the rounding of the product using the exact derivative.
        let t = k as f64 * h;
        let t_lo = (k as f64).mul_add(h, -t);
        let (dc, db) = pseudomode_rhs(w, lambda, c0, b);
        out.push(sample(params, t, c0 - dc * t_lo, b - db * t_lo));
    }
    Ok(out)
}

/// One sample of the memory-kernel solution (rotating frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSample {
    pub t: f64,
    pub c0: Complex64,
}

/// Implicit trapezoidal update shared by both history strategies.
///
/// `history` is the trapezoid sum of the kernel integral at `t_{n+1}`
/// without the (unknown) `c_{n+1}` endpoint term; `force` is `dc0/dt` at
/// `t_n`. The endpoint enters linearly, so the implicit step is solved
/// exactly.
#[inline]
fn trapezoid_step(
    w2: f64,
    h: f64,
    c_n: Complex64,
    force: Complex64,
    history: Complex64,
) -> Complex64 {
    (c_n + 0.5 * h * (force - w2 * history)) / (1.0 + 0.25 * w2 * h * h)
}

/// Direct integration of the memory-kernel equation.
///
/// The history integral is re-summed with trapezoid weights at every step,
/// so the cost is `O(n^2)`. The method is second order in the step.
pub fn integrate_memory_kernel(
    params: &PhysicalParams,
    t_end: f64,
    step: f64,
) -> Result<Vec<KernelSample>> {
    let (n, h) = grid(params, t_end, step)?;
    let w2 = params.w() * params.w();
    let decay: Vec<f64> = (0..=n)
        .map(|k| (-params.lambda() * h * k as f64).exp())
        .collect();

    let mut c = Vec::with_capacity(n + 1);
    c.push(Complex64::new(1.0, 0.0));
    let mut force = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(KernelSample { t: 0.0, c0: c[0] });

    for m in 0..n {
        // Kernel integral at t_{m+1} over samples 0..=m.
        let mut history = 0.5 * h * c[0] * decay[m + 1];
        for (j, cj) in c.iter().enumerate().skip(1) {
            history += h * cj * decay[m + 1 - j];
        }
        let next = trapezoid_step(w2, h, c[m], force, history);
        force = -w2 * (history + 0.5 * h * next);
        c.push(next);
        out.push(KernelSample {
            t: (m + 1) as f64 * h,
            c0: next,
        });
    }
    Ok(out)
}

/// Same scheme as [`integrate_memory_kernel`], with the history carried by
/// the exponential-kernel recurrence `I_{n+1} = e^{-lambda h} I_n + ...`.
/// Cost is `O(n)`.
pub fn integrate_memory_kernel_recurrence(
    params: &PhysicalParams,
    t_end: f64,
    step: f64,
) -> Result<Vec<KernelSample>> {
    let (n, h) = grid(params, t_end, step)?;
    let w2 = params.w() * params.w();
    let decay = (-params.lambda() * h).exp();

    let mut c = Complex64::new(1.0, 0.0);
    let mut integral = Complex64::new(0.0, 0.0);
    let mut force = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n + 1);
    out.push(KernelSample { t: 0.0, c0: c });

    for m in 0..n {
        let history = decay * (integral + 0.5 * h * c);
        let next = trapezoid_step(w2, h, c, force, history);
        integral = history + 0.5 * h * next;
        force = -w2 * integral;
        c = next;
        out.push(KernelSample {
            t: (m + 1) as f64 * h,
            c0: c,
        });
    }
    Ok(out)
}
