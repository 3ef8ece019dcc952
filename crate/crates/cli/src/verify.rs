//! Self-verification suites: each independent oracle run end to end for
//! every requested `lambda/W`.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use entrev_core::amplitudes::{
    c1_closed, integrate_memory_kernel_recurrence, integrate_pseudomode,
};
use entrev_core::criteria::{compare_counts, revival_threshold, sweep_alphas, RevivalCount};
use entrev_core::entanglement::{
    concurrence_atom_reservoir_closed, concurrence_atoms_closed, concurrence_reservoirs_closed,
    i_concurrence, multipartite_concurrence, wootters_concurrence,
};
use entrev_core::states::{
    build_joint_state, partial_trace, purity, reduced_pair, Pair, Partition, Qubit,
};
use entrev_core::{CouplingRegime, PhysicalParams};

use crate::args::Fault;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub lambda_over_w: f64,
    pub status: Status,
    pub detail: String,
}

type Check = Result<String, String>;
type Suite<'a> = (&'static str, bool, Box<dyn Fn() -> Check + 'a>);

fn fail_unless(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text(e: entrev_core::Error) -> String {
    e.to_string()
}

const RK4_STEP: f64 = 1e-3;
const RK4_TOL: f64 = 1e-8;
const KERNEL_STEP: f64 = 5e-4;
const KERNEL_TOL: f64 = 1e-4;
const WOOTTERS_TOL: f64 = 1e-10;
const CONSTANT_TOL: f64 = 1e-10;
const ENDPOINT_TOL: f64 = 1e-4;

fn integrators(p: &PhysicalParams) -> Check {
    let t_end = match p.d() {
        Some(d) => 4.0 * PI / d,
        None => 10.0 / p.w(),
    };
    let rk4_error = |step: f64| -> Result<f64, String> {
        let mut worst = 0.0f64;
        for s in integrate_pseudomode(p, t_end, step).map_err(text)? {
            worst = worst.max((s.c1 - c1_closed(p, s.t).map_err(text)?).norm());
        }
        Ok(worst)
    };
    let coarse = rk4_error(RK4_STEP)?;
    fail_unless(coarse <= RK4_TOL, || {
        format!("RK4 error {coarse:e} > {RK4_TOL:e}")
    })?;
    let mut detail = format!("RK4 {coarse:.1e}");
    if p.regime() == CouplingRegime::Strong {
        let ratio = coarse / rk4_error(RK4_STEP / 2.0)?;
        fail_unless(ratio >= 12.0, || {
            format!("RK4 halving ratio {ratio:.2} < 12")
        })?;
        detail += &format!(" (x{ratio:.1} on halving)");
    }
    let mut kernel = 0.0f64;
    for s in integrate_memory_kernel_recurrence(p, t_end, KERNEL_STEP).map_err(text)? {
        kernel = kernel.max((s.c0 - c1_closed(p, s.t).map_err(text)?).norm());
    }
    fail_unless(kernel <= KERNEL_TOL, || {
        format!("kernel error {kernel:e} > {KERNEL_TOL:e}")
    })?;
    Ok(format!("{detail}, kernel {kernel:.1e}"))
}

fn wootters(p: &PhysicalParams) -> Check {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let t_max = 50.0 / p.lambda();
    let mut worst = 0.0f64;
    for k in 0..100 {
        let q = p
            .with_alpha(0.01 + 0.98 * (k as f64 + 0.5) / 100.0)
            .map_err(text)?;
        let t = t_max * (k as f64 * golden).fract();
        let closed = [
            concurrence_atoms_closed(&q, t).map_err(text)?.value,
            concurrence_reservoirs_closed(&q, t).map_err(text)?.value,
            concurrence_atom_reservoir_closed(&q, t)
                .map_err(text)?
                .value,
        ];
        for (pair, c) in [Pair::A1A2, Pair::R1R2, Pair::A1R1].into_iter().zip(closed) {
            let rho = reduced_pair(&q, t, pair).map_err(text)?;
            worst = worst.max((wootters_concurrence(&rho).map_err(text)?.value - c).abs());
        }
    }
    fail_unless(worst <= WOOTTERS_TOL, || format!("max deviation {worst:e}"))?;
    Ok(format!("300 comparisons, max deviation {worst:.1e}"))
}

/// The n = 1 revival threshold, optionally with the decay term's sign
/// flipped.
fn first_revival_threshold(p: &PhysicalParams, fault: Option<Fault>) -> Result<f64, String> {
    match fault {
        None => revival_threshold(p, 1).map_err(text),
        Some(Fault::ThresholdSign) => {
            let d = p.require_strong().map_err(text)?;
            let u = 1.0 + (-2.0 * PI * p.lambda() / d).exp();
            Ok(u / (1.0 + u * u).sqrt())
        }
    }
}

fn counts(p: &PhysicalParams, fault: Option<Fault>) -> Check {
    let alphas = sweep_alphas(p, 50, 1e-3).map_err(text)?;
    fail_unless(alphas.len() >= 50, || {
        format!("only {} sweep values", alphas.len())
    })?;
    let threshold = first_revival_threshold(p, fault)?;
    let mut with_both = 0;
    for &alpha in &alphas {
        let q = p.with_alpha(alpha).map_err(text)?;
        let c = compare_counts(&q, 1000.0).map_err(text)?;
        fail_unless(c.counts_agree(), || {
            format!(
                "alpha {alpha:.6}: n_a {} vs scan {}, n_r {} vs scan {}",
                c.n_a, c.scan.revivals, c.n_r, c.scan.deaths
            )
        })?;
        fail_unless(c.ordering_agrees(), || {
            format!("alpha {alpha:.6}: ordering {} not seen in scan", c.ordering)
        })?;
        let scanned_revival = match c.n_a {
            RevivalCount::Infinite => c.scan.atom_dead_intervals == 0,
            RevivalCount::Finite(_) => c.scan.atom_dead_intervals > 1,
        };
        fail_unless((alpha > threshold) == scanned_revival, || {
            format!("alpha {alpha:.6}: threshold {threshold:.6} mispredicts revival")
        })?;
        if c.scan.revivals > 0 && c.scan.deaths > 0 {
            with_both += 1;
        }
    }
    Ok(format!(
        "{} alpha values agree with the scan ({with_both} with both revival and death)",
        alphas.len()
    ))
}

fn constant_partition(p: &PhysicalParams) -> Check {
    let split = Partition::new(&[Qubit::A1, Qubit::R1]).map_err(text)?;
    let t_max = 50.0 / p.lambda();
    let mut worst = 0.0f64;
    for alpha in [0.2, 1.0 / 10f64.sqrt(), 0.6, 0.9] {
        let q = p.with_alpha(alpha).map_err(text)?;
        let target = 2.0 * alpha * q.beta();
        for k in 0..250 {
            let state = build_joint_state(&q, t_max * k as f64 / 249.0).map_err(text)?;
            worst = worst.max((i_concurrence(&state, &split).value - target).abs());
        }
    }
    fail_unless(worst <= CONSTANT_TOL, || format!("max deviation {worst:e}"))?;
    Ok(format!(
        "(a1r1)|(a2r2) stays at 2 alpha beta within {worst:.1e}"
    ))
}

fn multipartite_endpoints(p: &PhysicalParams) -> Check {
    // Late enough for the excitation to have left the atoms.
    let mut t_end = 50.0 / p.lambda();
    while c1_closed(p, t_end).map_err(text)?.norm_sqr() > 1e-12 {
        t_end *= 2.0;
    }
    let mut worst = 0.0f64;
    for alpha in [0.2, 1.0 / 10f64.sqrt(), 0.6, 0.9] {
        let q = p.with_alpha(alpha).map_err(text)?;
        let start = build_joint_state(&q, 0.0).map_err(text)?;
        let early = multipartite_concurrence(&start).value;
        let late = multipartite_concurrence(&build_joint_state(&q, t_end).map_err(text)?).value;
        let brute: f64 = (1u8..15)
            .map(|m| Partition::from_mask(m).map(|s| purity(&partial_trace(&start, &s))))
            .sum::<entrev_core::Result<f64>>()
            .map_err(text)?;
        let brute = 0.5 * (14.0 - brute).max(0.0).sqrt();
        let expected = 2.0 * alpha * q.beta();
        fail_unless(
            (early - brute).abs() <= 1e-10 && (brute - expected).abs() <= 1e-10,
            || {
                format!("alpha {alpha}: C_N(0) = {early}, subset purities give {brute}, expected {expected}")
            },
        )?;
        worst = worst.max((early - late).abs());
    }
    fail_unless(worst <= ENDPOINT_TOL, || {
        format!("C_N endpoints differ by {worst:e}")
    })?;
    Ok(format!(
        "C_N(0) = 2 alpha beta, |C_N(0) - C_N(end)| <= {worst:.1e}"
    ))
}

/// Runs every suite for every ratio.
pub fn run_suites(ratios: &[f64], fault: Option<Fault>) -> Result<Vec<SuiteOutcome>, CliError> {
    let mut out = Vec::new();
    for &ratio in ratios {
        let p = PhysicalParams::from_ratio(ratio, 0.5)?;
        let strong = p.regime() == CouplingRegime::Strong;
        let suites: [Suite; 5] = [
            ("integrators", true, Box::new(|| integrators(&p))),
            ("wootters", true, Box::new(|| wootters(&p))),
            ("counts", strong, Box::new(|| counts(&p, fault))),
            (
                "constant-partition",
                true,
                Box::new(|| constant_partition(&p)),
            ),
            (
                "multipartite-endpoints",
                true,
                Box::new(|| multipartite_endpoints(&p)),
            ),
        ];
        for (suite, applicable, check) in suites {
            let (status, detail) = if !applicable {
                (
                    Status::Skipped,
                    format!("criteria need strong coupling ({} regime)", p.regime()),
                )
            } else {
                match check() {
                    Ok(d) => (Status::Pass, d),
                    Err(d) => (Status::Fail, d),
                }
            };
            out.push(SuiteOutcome {
                suite,
                lambda_over_w: ratio,
                status,
                detail,
            });
        }
    }
    Ok(out)
}

pub fn write_report(outcomes: &[SuiteOutcome], out: &mut dyn Write) -> std::io::Result<()> {
    for o in outcomes {
        writeln!(
            out,
            "[{}] {} (lambda/W = {}): {}",
            o.status, o.suite, o.lambda_over_w, o.detail
        )?;
    }
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    writeln!(
        out,
        "verify: {} passed, {} failed, {} skipped",
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    )
}
