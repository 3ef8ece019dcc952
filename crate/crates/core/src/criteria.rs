//! Revival and sudden-death criteria for the atom and reservoir pair
//! concurrences, with a zero-crossing scan that checks them numerically.
//!
//! All criteria assume strong coupling (`lambda < 2W`). With
//! `E_n = exp(-2 n pi lambda / d)` the population peaks are `|c1(t_n)|^2 = E_n`,
//! atom entanglement revives around peak `n` iff `E_n > 1 - alpha/beta`, and
//! reservoir entanglement dies around peak `n` iff `E_n > alpha/beta`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::amplitudes::{amplitude_state, PhysicalParams};
use crate::error::{Error, Result};

/// Tolerance for the equality cases `alpha = beta` and `2 alpha = beta`.
pub const BOUNDARY_TOL: f64 = 1e-12;
/// Distance from an integer below which a count argument is flagged.
pub const INTEGER_WARN_TOL: f64 = 1e-9;
/// Concurrence values below this count as zero in the numeric scan.
pub const SCAN_EPS: f64 = 1e-9;
/// Minimum scan resolution, in samples per oscillation period.
pub const MIN_SAMPLES_PER_PERIOD: f64 = 200.0;
/// The scan window must reach `exp(-lambda t_max) < SCAN_ENVELOPE`.
pub const SCAN_ENVELOPE: f64 = 1e-6;

fn peak_decay(params: &PhysicalParams, n: u32) -> Result<f64> {
    let d = params.require_strong()?;
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "oscillation index starts at 1",
        });
    }
    Ok((-2.0 * f64::from(n) * PI * params.lambda() / d).exp())
}

/// Atom entanglement revives after the `n`-th population peak iff
/// `alpha` exceeds `(1 - E_n) / sqrt(1 + (1 - E_n)^2)`.
pub fn revival_threshold(params: &PhysicalParams, n: u32) -> Result<f64> {
    let u = 1.0 - peak_decay(params, n)?;
    Ok(u / (1.0 + u * u).sqrt())
}

/// Reservoir entanglement dies around the `n`-th population peak iff
/// `alpha` is below `E_n / sqrt(1 + E_n^2)`.
pub fn esd_threshold(params: &PhysicalParams, n: u32) -> Result<f64> {
    let e = peak_decay(params, n)?;
    Ok(e / (1.0 + e * e).sqrt())
}

/// Whether atom entanglement revives at least once. Strict inequality.
pub fn revival_occurs(params: &PhysicalParams) -> Result<bool> {
    Ok(params.alpha() > revival_threshold(params, 1)?)
}

/// Whether reservoir entanglement suffers sudden death at least once.
/// Strict inequality.
pub fn esd_occurs(params: &PhysicalParams) -> Result<bool> {
    Ok(params.alpha() < esd_threshold(params, 1)?)
}

/// Number of atom-entanglement revivals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RevivalCount {
    Finite(u64),
    /// `alpha >= 1/sqrt(2)`: atom entanglement only touches zero and keeps
    /// oscillating.
    Infinite,
}

impl fmt::Display for RevivalCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(n) => write!(f, "{n}"),
            Self::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for RevivalCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(n) => s.serialize_u64(*n),
            Self::Infinite => s.serialize_str("infinite"),
        }
    }
}

fn alpha_at_least_beta(params: &PhysicalParams) -> bool {
    params.alpha() >= FRAC_1_SQRT_2 - BOUNDARY_TOL
}

/// `(d / 2 pi lambda) ln(beta / (beta - alpha))`, or `None` when unbounded.
fn revival_argument(params: &PhysicalParams) -> Result<Option<f64>> {
    let d = params.require_strong()?;
    if alpha_at_least_beta(params) {
        return Ok(None);
    }
    let (alpha, beta) = (params.alpha(), params.beta());
    Ok(Some(
        d / (2.0 * PI * params.lambda()) * (beta / (beta - alpha)).ln(),
    ))
}

/// `(d / 2 pi lambda) ln(beta / alpha)`.
fn esd_argument(params: &PhysicalParams) -> Result<f64> {
    let d = params.require_strong()?;
    let (alpha, beta) = (params.alpha(), params.beta());
    if alpha <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "death count needs alpha > 0",
        });
    }
    Ok(d / (2.0 * PI * params.lambda()) * (beta / alpha).ln())
}

fn floor_count(x: f64) -> u64 {
    x.max(0.0).floor() as u64
}

fn near_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_WARN_TOL
}

/// `n_a = floor((d / 2 pi lambda) ln(beta / (beta - alpha)))`, infinite for
/// `alpha >= 1/sqrt(2)`.
pub fn count_revivals(params: &PhysicalParams) -> Result<RevivalCount> {
    Ok(match revival_argument(params)? {
        Some(x) => RevivalCount::Finite(floor_count(x)),
        None => RevivalCount::Infinite,
    })
}

/// `n_r = floor((d / 2 pi lambda) ln(beta / alpha))`, zero for
/// `alpha >= beta`.
pub fn count_esd(params: &PhysicalParams) -> Result<u64> {
    let x = esd_argument(params)?;
    if alpha_at_least_beta(params) {
        return Ok(0);
    }
    Ok(floor_count(x))
}

/// Approximate spacing of successive revivals, `2 pi / d`.
pub fn revival_interval(params: &PhysicalParams) -> Result<f64> {
    Ok(2.0 * PI / params.require_strong()?)
}

/// Order of the first atom revival relative to the first reservoir death.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    Before,
    Simultaneous,
    After,
    /// One of the two phenomena does not occur.
    NotApplicable,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Before => "before",
            Self::Simultaneous => "simultaneous",
            Self::After => "after",
            Self::NotApplicable => "not-applicable",
        })
    }
}

/// `before` iff `2 alpha > beta`, `after` iff `2 alpha < beta`.
///
/// An error when revival or sudden death does not occur.
pub fn classify_ordering(params: &PhysicalParams) -> Result<Ordering> {
    if !revival_occurs(params)? {
        return Err(Error::NotApplicable("atom entanglement does not revive"));
    }
    if !esd_occurs(params)? {
        return Err(Error::NotApplicable("reservoir entanglement does not die"));
    }
    let gap = 2.0 * params.alpha() - params.beta();
    Ok(if gap.abs() <= BOUNDARY_TOL {
        Ordering::Simultaneous
    } else if gap > 0.0 {
        Ordering::Before
    } else {
        Ordering::After
    })
}

/// Summary of every criterion for one `(lambda/W, alpha)`.
///
/// Field names double as the JSON keys.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriteriaReport {
    pub lambda_over_w: f64,
    pub alpha: f64,
    pub beta: f64,
    pub d_over_w: f64,
    pub revival_threshold_n1: f64,
    pub esd_threshold_n1: f64,
    pub revival_occurs: bool,
    pub esd_occurs: bool,
    pub n_a: RevivalCount,
    pub n_r: u64,
    pub t_r_in_inv_w: f64,
    pub ordering: Ordering,
    pub warnings: Vec<String>,
}

pub fn criteria_report(params: &PhysicalParams) -> Result<CriteriaReport> {
    let d = params.require_strong()?;
    let mut warnings = Vec::new();
    if let Some(x) = revival_argument(params)? {
        if near_integer(x) {
            warnings.push(format!(
                "n_a argument {x:.12} is within {INTEGER_WARN_TOL:e} of an integer"
            ));
        }
    }
    let x = esd_argument(params)?;
    if !alpha_at_least_beta(params) && near_integer(x) {
        warnings.push(format!(
            "n_r argument {x:.12} is within {INTEGER_WARN_TOL:e} of an integer"
        ));
    }
    let ordering = match classify_ordering(params) {
        Ok(o) => o,
        Err(Error::NotApplicable(_)) => Ordering::NotApplicable,
        Err(e) => return Err(e),
    };
    Ok(CriteriaReport {
        lambda_over_w: params.lambda_over_w(),
        alpha: params.alpha(),
        beta: params.beta(),
        d_over_w: d / params.w(),
        revival_threshold_n1: revival_threshold(params, 1)?,
        esd_threshold_n1: esd_threshold(params, 1)?,
        revival_occurs: revival_occurs(params)?,
        esd_occurs: esd_occurs(params)?,
        n_a: count_revivals(params)?,
        n_r: count_esd(params)?,
        t_r_in_inv_w: revival_interval(params)? * params.w(),
        ordering,
        warnings,
    })
}

/// Events found by scanning the closed-form pair concurrences on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericEvents {
    /// Re-entries of `C_a1a2` above `SCAN_EPS` after a zero plateau.
    pub revivals: usize,
    /// Entries of `C_r1r2` into a zero plateau after its first birth.
    pub deaths: usize,
    pub revival_times: Vec<f64>,
    pub death_times: Vec<f64>,
    /// Maximal runs of at least two samples where `C_a1a2` is exactly zero,
    /// i.e. where `alpha - beta |c2|^2 < 0`.
    pub atom_dead_intervals: usize,
    /// Grid spacing.
    pub step: f64,
}

impl NumericEvents {
    /// Order of the first revival and first death, equal within one step
    /// counting as simultaneous.
    pub fn ordering(&self) -> Ordering {
        match (self.revival_times.first(), self.death_times.first()) {
            (Some(r), Some(d)) if (r - d).abs() <= self.step * (1.0 + 1e-9) => {
                Ordering::Simultaneous
            }
            (Some(r), Some(d)) if r < d => Ordering::Before,
            (Some(_), Some(_)) => Ordering::After,
            _ => Ordering::NotApplicable,
        }
    }
}

/// Maximal runs `[start, end]` where `pred` holds.
fn runs(values: &[f64], pred: impl Fn(f64) -> bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, &v) in values.iter().enumerate() {
        match (pred(v), start) {
            (true, None) => start = Some(k),
            (false, Some(s)) => {
                out.push((s, k - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, values.len() - 1));
    }
    out
}

/// Grid parameters that satisfy the scan preconditions with
/// `per_period` samples per oscillation period.
pub fn scan_grid(params: &PhysicalParams, per_period: f64) -> Result<(f64, usize)> {
    let period = revival_interval(params)?;
    let t_max = (1.0 / SCAN_ENVELOPE).ln() / params.lambda() + 2.0 * period;
    let samples = (t_max / period * per_period.max(MIN_SAMPLES_PER_PERIOD)).ceil() as usize;
    Ok((t_max, samples))
}

/// Scans `C_a1a2` and `C_r1r2` on the uniform grid `t_k = k t_max / samples`,
/// `k = 0..=samples`.
///
/// A zero plateau is a run of at least two consecutive samples below
/// [`SCAN_EPS`]. A revival is the first sample above `SCAN_EPS` after a
/// plateau that was entered from above. A death is the first sample of a
/// plateau of `C_r1r2` that begins after its first birth.
pub fn count_events_numeric(
    params: &PhysicalParams,
    t_max: f64,
    samples: usize,
) -> Result<NumericEvents> {
    let d = params.require_strong()?;
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            value: t_max,
            reason: "must be positive and finite",
        });
    }
    if (-params.lambda() * t_max).exp() >= SCAN_ENVELOPE {
        return Err(Error::UnderResolved(format!(
            "window lambda t_max = {:.3} leaves the envelope above {SCAN_ENVELOPE:e}",
            params.lambda() * t_max
        )));
    }
    let needed = MIN_SAMPLES_PER_PERIOD * t_max * d / (2.0 * PI);
    if (samples as f64) < needed {
        return Err(Error::UnderResolved(format!(
            "{samples} samples given, at least {} needed",
            needed.ceil()
        )));
    }

    let step = t_max / samples as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let mut atoms = Vec::with_capacity(samples + 1);
    let mut reservoirs = Vec::with_capacity(samples + 1);
    for k in 0..=samples {
        let s = amplitude_state(params, k as f64 * step)?;
        let p1 = s.c1.norm_sqr();
        let p2 = s.c2 * s.c2;
        atoms.push((2.0 * beta * p1 * (alpha - beta * p2)).max(0.0));
        reservoirs.push((2.0 * beta * p2 * (alpha - beta * p1)).max(0.0));
    }

    let plateau = |&(s, e): &(usize, usize)| e > s;

    let mut revival_times = Vec::new();
    for (s, e) in runs(&atoms, |v| v < SCAN_EPS).into_iter().filter(plateau) {
        if s > 0 && e < samples {
            revival_times.push((e + 1) as f64 * step);
        }
    }

    let reservoir_zero = runs(&reservoirs, |v| v < SCAN_EPS);
    let first_birth = reservoir_zero
        .iter()
        .find(|&&(_, e)| e < samples)
        .map(|&(s, e)| if s == 0 { e + 1 } else { 0 })
        .unwrap_or(usize::MAX);
    let death_times: Vec<f64> = reservoir_zero
        .iter()
        .filter(|r| plateau(r))
        .filter(|&&(s, _)| s > first_birth)
        .map(|&(s, _)| s as f64 * step)
        .collect();

    let atom_dead_intervals = runs(&atoms, |v| v == 0.0)
        .iter()
        .filter(|r| plateau(r))
        .count();

    Ok(NumericEvents {
        revivals: revival_times.len(),
        deaths: death_times.len(),
        revival_times,
        death_times,
        atom_dead_intervals,
        step,
    })
}

/// Formula counts next to the numeric scan for one parameter set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountComparison {
    pub alpha: f64,
    pub n_a: RevivalCount,
    pub n_r: u64,
    /// Ordering predicted by the sign of `2 alpha - beta`.
    pub ordering: Ordering,
    pub scan: NumericEvents,
}

impl CountComparison {
    /// `n_a` and `n_r` match the scanned revivals and deaths.
    ///
    /// A finite `n_a` must also show exactly `n_a + 1` intervals where the
    /// atom concurrence is identically zero. An infinite one must show none:
    /// the concurrence then only touches zero at the valleys, and the
    /// plateau count of such touches depends on the grid.
    pub fn counts_agree(&self) -> bool {
        let atoms = match self.n_a {
            RevivalCount::Finite(n) => {
                self.scan.revivals as u64 == n && self.scan.atom_dead_intervals as u64 == n + 1
            }
            RevivalCount::Infinite => self.scan.atom_dead_intervals == 0,
        };
        atoms && self.scan.deaths as u64 == self.n_r
    }

    /// The scanned first revival and first death are ordered as predicted,
    /// up to one grid step.
    pub fn ordering_agrees(&self) -> bool {
        let step = self.scan.step * (1.0 + 1e-9);
        match (
            self.ordering,
            self.scan.revival_times.first(),
            self.scan.death_times.first(),
        ) {
            (Ordering::Before, Some(r), Some(d)) => *r < d + step,
            (Ordering::After, Some(r), Some(d)) => *r > d - step,
            (Ordering::Simultaneous, Some(r), Some(d)) => (r - d).abs() <= step,
            (Ordering::NotApplicable, r, d) => r.is_none() || d.is_none(),
            _ => false,
        }
    }
}

/// Runs the formulas and the default-resolution scan side by side.
pub fn compare_counts(params: &PhysicalParams, per_period: f64) -> Result<CountComparison> {
    let report = criteria_report(params)?;
    let (t_max, samples) = scan_grid(params, per_period)?;
    Ok(CountComparison {
        alpha: params.alpha(),
        n_a: report.n_a,
        n_r: report.n_r,
        ordering: report.ordering,
        scan: count_events_numeric(params, t_max, samples)?,
    })
}

/// Up to `count` evenly spaced values of alpha in `[0.02, 0.98]` that stay
/// at least `margin` away from every revival and death threshold, from
/// `1/sqrt(2)` and from `2 alpha = beta`.
pub fn sweep_alphas(params: &PhysicalParams, count: usize, margin: f64) -> Result<Vec<f64>> {
    params.require_strong()?;
    let mut excluded = vec![FRAC_1_SQRT_2, 1.0 / 5f64.sqrt()];
    for n in 1.. {
        let r = revival_threshold(params, n)?;
        let e = esd_threshold(params, n)?;
        let mut done = true;
        if r < FRAC_1_SQRT_2 - margin {
            excluded.push(r);
            done = false;
        }
        if e > margin {
            excluded.push(e);
            done = false;
        }
        if done {
            break;
        }
    }
    let clear = |a: f64| excluded.iter().all(|x| (a - x).abs() >= margin);
    // Refine the candidate grid until enough values survive.
    let mut m = count.max(2);
    loop {
        let picked: Vec<f64> = (0..m)
            .map(|k| 0.02 + 0.96 * k as f64 / (m - 1) as f64)
            .filter(|&a| clear(a))
            .collect();
        if picked.len() >= count || m > 64 * count {
            return Ok(picked);
        }
        m += count / 4 + 1;
    }
}
