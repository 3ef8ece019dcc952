use std::f64::consts::PI;

use serde::Serialize;

use super::{amplitude_state, check_time, PhysicalParams};
use crate::error::{Error, Result};

/// Populations of the atom, the discrete quasimode and the continuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasimodePopulations {
    pub t: f64,
    pub pa: f64,
    pub pm: f64,
    pub pr: f64,
}

/// Splits the single excitation between atom (`|c1|^2`), discrete
/// quasimode (`|b|^2`) and continuum (the remainder).
///
/// The discrete quasimode coincides with the pseudomode.
pub fn quasimode_populations(params: &PhysicalParams, t: f64) -> Result<QuasimodePopulations> {
    let s = amplitude_state(params, t)?;
    let pa = s.c1.norm_sqr();
    let pm = s.b.norm_sqr();
    Ok(QuasimodePopulations {
        t,
        pa,
        pm,
        // One rounding of 1 - (pa + pm) keeps pr monotone in the exact sum.
        pr: (1.0 - (pa + pm)).max(0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Peak,
    Valley,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extremum {
    pub t: f64,
    pub kind: ExtremumKind,
    pub value: f64,
}

/// Extrema of `|c1(t)|^2` for oscillation indices `1..=n_max`, in time
/// order.
///
/// Peaks sit at `t_n = 2 n pi / d` with value `exp(-2 n pi lambda / d)`.
/// Valleys are the zeros of `c1`, where `d t / 2 + theta = n pi` with
/// `theta = atan(d / lambda)`.
pub fn excited_population_extrema(params: &PhysicalParams, n_max: usize) -> Result<Vec<Extremum>> {
    let d = params.require_strong()?;
    if n_max == 0 {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let lambda = params.lambda();
    let theta = (d / lambda).atan();

    let mut out = Vec::with_capacity(2 * n_max);
    for n in 1..=n_max {
        let n = n as f64;
        let t_valley = 2.0 * (n * PI - theta) / d;
        check_time(t_valley)?;
        out.push(Extremum {
            t: t_valley,
            kind: ExtremumKind::Valley,
            value: amplitude_state(params, t_valley)?.c1.norm_sqr(),
        });
        out.push(Extremum {
            t: 2.0 * n * PI / d,
            kind: ExtremumKind::Peak,
            value: (-2.0 * n * PI * lambda / d).exp(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::amplitudes::c1_closed;

    fn params(ratio: f64) -> PhysicalParams {
        PhysicalParams::from_ratio(ratio, 0.5).unwrap()
    }

    #[test]
    fn populations_start_on_atom() {
        let q = quasimode_populations(&params(0.1), 0.0).unwrap();
        assert_eq!((q.pa, q.pm, q.pr), (1.0, 0.0, 0.0));
    }

    #[test]
    fn discrete_mode_empties_at_peak() {
        let p = params(0.1);
        let q = quasimode_populations(&p, 2.0 * PI / p.d().unwrap()).unwrap();
        assert!(q.pm < 1e-24);
        assert_abs_diff_eq!(q.pa, 0.730_115_380_179_405_8, epsilon = 1e-13);
        assert_abs_diff_eq!(q.pr, 0.269_884_619_820_594_2, epsilon = 1e-13);
    }

    #[test]
    fn continuum_absorbs_everything() {
        let p = params(0.1);
        let q = quasimode_populations(&p, 50.0 / p.lambda()).unwrap();
        assert!(q.pr > 1.0 - 1e-4);
    }

    #[test]
    fn continuum_is_a_staircase() {
        let p = params(0.1);
        let mut prev = 0.0;
        for k in 0..=20_000 {
            let q = quasimode_populations(&p, k as f64 * 0.01).unwrap();
            assert!((q.pa + q.pm + q.pr - 1.0).abs() < 1e-12);
            assert!(q.pr >= prev, "t = {}", q.t);
            prev = q.pr;
        }
    }

    #[test]
    fn extrema_layout() {
        let p = params(0.1);
        let ex = excited_population_extrema(&p, 3).unwrap();
        assert_eq!(ex.len(), 6);
        assert_eq!(ex[0].kind, ExtremumKind::Valley);
        assert_eq!(ex[1].kind, ExtremumKind::Peak);
        assert!(ex[0].t > 0.0 && ex[0].t < ex[1].t);
        assert!(ex.windows(2).all(|w| w[0].t < w[1].t));
        assert_abs_diff_eq!(ex[1].t, 3.145_527_022_888_001_7, epsilon = 1e-12);
        assert_abs_diff_eq!(ex[1].value, 0.730_115_380_179_405_8, epsilon = 1e-13);
        for e in ex.iter().filter(|e| e.kind == ExtremumKind::Valley) {
            assert!(e.value < 1e-25);
        }
        let p2 = params(0.2);
        let ex2 = excited_population_extrema(&p2, 1).unwrap();
        assert_abs_diff_eq!(ex2[1].value, 0.531_802_082_944_259_7, epsilon = 1e-13);
    }

    #[test]
    fn peaks_agree_with_dense_scan() {
        for ratio in [0.1, 0.2] {
            let p = params(ratio);
            let d = p.d().unwrap();
            for e in excited_population_extrema(&p, 3).unwrap() {
                if e.kind != ExtremumKind::Peak {
                    continue;
                }
                let best = (0..=20_000)
                    .map(|k| e.t - PI / d + k as f64 * (2.0 * PI / d) / 20_000.0)
                    .map(|t| c1_closed(&p, t).unwrap().norm_sqr())
                    .fold(0.0, f64::max);
                assert_abs_diff_eq!(best, e.value, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn weak_coupling_has_no_extrema() {
        assert!(excited_population_extrema(&params(3.0), 2).is_err());
        assert!(excited_population_extrema(&params(0.1), 0).is_err());
    }
}
