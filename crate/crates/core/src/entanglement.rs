//! Entanglement measures: closed-form pair concurrences, the Wootters
//! concurrence of an arbitrary two-qubit state, I-concurrence of any
//! bipartition of the pure joint state, and the four-qubit multipartite
//! concurrence.

use num_complex::Complex64;
use serde::Serialize;

use crate::amplitudes::{amplitude_state, PhysicalParams};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, hermitian_eigen, hermiticity_defect, singular_values, CMatrix};
use crate::states::{
    linear_entropy, reduced_pair, DensityMatrix, JointState, Pair, Partition, HERMITIAN_TOL,
    PSD_TOL, TRACE_TOL,
};

/// Eigenvalues of `rho` below this (relative to its unit trace) are dropped
/// when factoring `rho = M M^H`.
pub const RANK_TOL: f64 = 1e-14;

/// An entanglement value tagged with what it measures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcurrenceValue {
    pub value: f64,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

impl ConcurrenceValue {
    fn at(value: f64, label: impl Into<String>, t: f64) -> Self {
        Self {
            value,
            label: label.into(),
            t: Some(t),
        }
    }
}

/// `(|c1|^2, |c2|^2)` from the closed forms.
fn populations(params: &PhysicalParams, t: f64) -> Result<(f64, f64)> {
    let s = amplitude_state(params, t)?;
    Ok((s.c1.norm_sqr(), s.c2 * s.c2))
}

/// `C_a1a2 = max{0, 2 beta |c1|^2 (alpha - beta |c2|^2)}`.
pub fn concurrence_atoms_closed(params: &PhysicalParams, t: f64) -> Result<ConcurrenceValue> {
    let (p1, p2) = populations(params, t)?;
    let (alpha, beta) = (params.alpha(), params.beta());
    let value = (2.0 * beta * p1 * (alpha - beta * p2)).max(0.0);
    Ok(ConcurrenceValue::at(value, Pair::A1A2.label(), t))
}

/// `C_r1r2 = max{0, 2 beta |c2|^2 (alpha - beta |c1|^2)}`.
pub fn concurrence_reservoirs_closed(params: &PhysicalParams, t: f64) -> Result<ConcurrenceValue> {
    let (p1, p2) = populations(params, t)?;
    let (alpha, beta) = (params.alpha(), params.beta());
    let value = (2.0 * beta * p2 * (alpha - beta * p1)).max(0.0);
    Ok(ConcurrenceValue::at(value, Pair::R1R2.label(), t))
}

/// `C_a1r1 = 2 beta^2 |c1| |c2|`. Peaks at `beta^2` when `|c1| = 1/sqrt(2)`.
pub fn concurrence_atom_reservoir_closed(
    params: &PhysicalParams,
    t: f64,
) -> Result<ConcurrenceValue> {
    let (p1, p2) = populations(params, t)?;
    let beta = params.beta();
    let value = 2.0 * beta * beta * (p1 * p2).sqrt();
    Ok(ConcurrenceValue::at(value, Pair::A1R1.label(), t))
}

/// `sigma_y (x) sigma_y` in the computational basis.
fn spin_flip() -> CMatrix {
    let z = Complex64::new(0.0, 0.0);
    let p = Complex64::new(1.0, 0.0);
    CMatrix::from_row_slice(4, 4, &[z, z, z, -p, z, z, p, z, z, p, z, z, -p, z, z, z])
}

fn check_two_qubit(m: &CMatrix) -> Result<()> {
    if m.nrows() != 4 || m.ncols() != 4 {
        return Err(Error::InvalidDensityMatrix(format!(
            "two-qubit state expected, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::InvalidDensityMatrix(format!(
            "not Hermitian (defect {defect:e})"
        )));
    }
    let trace = m.trace();
    if (trace - 1.0).norm() > TRACE_TOL {
        return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
    }
    Ok(())
}

/// Eigenvalues of `rho (sigma_y x sigma_y) rho* (sigma_y x sigma_y)` in
/// descending order, from the general Hessenberg-QR eigensolver.
///
/// Negative values above `-PSD_TOL` are clamped to zero.
pub fn wootters_spectrum(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let m = rho.matrix();
    check_two_qubit(m)?;
    let y = spin_flip();
    let flipped = &y * m.map(|z| z.conj()) * &y;
    let ev = eigenvalues(&(m * flipped))?;
    let mut mu = [0.0; 4];
    for (slot, z) in mu.iter_mut().zip(&ev) {
        if z.re < -PSD_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "rho rho~ has negative eigenvalue {:e}",
                z.re
            )));
        }
        *slot = z.re.max(0.0);
    }
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok(mu)
}

/// `max{0, s1 - s2 - s3 - s4}` for `s` sorted descending.
fn wootters_combination(s: &[f64]) -> f64 {
    let mut s = s.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s.resize(4, 0.0);
    (s[0] - s[1] - s[2] - s[3]).max(0.0)
}

/// Wootters concurrence from a factor `rho = M M^H` (`M` is `4 x r`).
///
/// The square roots of the eigenvalues of `rho rho~` are the singular values
/// of `M^T (sigma_y x sigma_y) M`, which avoids taking square roots of
/// eigenvalues that are zero up to rounding.
pub fn wootters_from_factor(factor: &CMatrix) -> Result<f64> {
    let tau = factor.transpose() * spin_flip() * factor;
    Ok(wootters_combination(&singular_values(&tau)?))
}

/// Wootters concurrence `max{0, sqrt(mu1) - sqrt(mu2) - sqrt(mu3) - sqrt(mu4)}`
/// of a two-qubit density matrix.
pub fn wootters_concurrence(rho: &DensityMatrix) -> Result<ConcurrenceValue> {
    let m = rho.matrix();
    check_two_qubit(m)?;
    let (values, vectors) = hermitian_eigen(m)?;
    let kept: Vec<usize> = (0..4).filter(|&k| values[k] > RANK_TOL).collect();
    let factor = CMatrix::from_fn(4, kept.len(), |r, c| {
        vectors[(r, kept[c])] * values[kept[c]].sqrt()
    });
    Ok(ConcurrenceValue {
        value: wootters_from_factor(&factor)?,
        label: "wootters".into(),
        t: None,
    })
}

/// Concurrence of `a1 (x) r2`, which has no closed form; computed with the
/// Wootters formula on the reduced state.
pub fn concurrence_cross_pair(params: &PhysicalParams, t: f64) -> Result<ConcurrenceValue> {
    let rho = reduced_pair(params, t, Pair::A1R2)?;
    let value = wootters_concurrence(&rho)?.value;
    Ok(ConcurrenceValue::at(value, Pair::A1R2.label(), t))
}

/// I-concurrence `sqrt(2 (1 - Tr rho_A^2))` of a bipartition of the pure
/// joint state.
pub fn i_concurrence(state: &JointState, partition: &Partition) -> ConcurrenceValue {
    ConcurrenceValue::at(
        (2.0 * linear_entropy(state, partition)).sqrt(),
        partition.to_string(),
        state.t,
    )
}

/// Multipartite concurrence of the four-qubit pure state,
/// `2^{1 - N/2} sqrt((2^N - 2) - sum_S Tr rho_S^2)` over all 14 nonempty
/// proper subsets `S`.
pub fn multipartite_concurrence(state: &JointState) -> ConcurrenceValue {
    const N: i32 = 4;
    // (2^N - 2) - sum_S Tr rho_S^2 = sum_S (1 - Tr rho_S^2)
    let slack: f64 = Partition::all_subsets()
        .map(|s| linear_entropy(state, &s))
        .sum();
    ConcurrenceValue::at(
        2f64.powf(1.0 - N as f64 / 2.0) * slack.sqrt(),
        "C_N",
        state.t,
    )
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use approx::assert_abs_diff_eq;

    use super::*;
    use crate::states::{build_joint_state, partial_trace, Qubit};

    fn params(ratio: f64, alpha: f64) -> PhysicalParams {
        PhysicalParams::from_ratio(ratio, alpha).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_forms_at_start() {
        for alpha in [0.1, 0.3, 0.6, 0.9] {
            let p = params(0.2, alpha);
            let expected = 2.0 * alpha * p.beta();
            assert_abs_diff_eq!(
                concurrence_atoms_closed(&p, 0.0).unwrap().value,
                expected,
                epsilon = 1e-15
            );
            assert_eq!(concurrence_reservoirs_closed(&p, 0.0).unwrap().value, 0.0);
            assert_eq!(
                concurrence_atom_reservoir_closed(&p, 0.0).unwrap().value,
                0.0
            );
            assert_eq!(concurrence_cross_pair(&p, 0.0).unwrap().value, 0.0);
        }
    }

    #[test]
    fn closed_forms_at_long_times() {
        let p = params(0.2, 0.3);
        let t = 60.0 / p.lambda();
        assert!(concurrence_atoms_closed(&p, t).unwrap().value < 1e-12);
        assert_abs_diff_eq!(
            concurrence_reservoirs_closed(&p, t).unwrap().value,
            2.0 * 0.3 * p.beta(),
            epsilon = 1e-12
        );
        let alpha = 1.0 / 10f64.sqrt();
        let q = params(0.1, alpha);
        assert!(concurrence_cross_pair(&q, 50.0 / q.lambda()).unwrap().value < 1e-10);
    }

    #[test]
    fn death_window_at_population_peak() {
        // alpha = 1/4, lambda/W = 0.2, t = 2 pi / d: both brackets negative.
        let p = params(0.2, 0.25);
        let t = 2.0 * PI / p.d().unwrap();
        assert_eq!(concurrence_atoms_closed(&p, t).unwrap().value, 0.0);
        assert_eq!(concurrence_reservoirs_closed(&p, t).unwrap().value, 0.0);
        for pair in [Pair::A1A2, Pair::R1R2] {
            let rho = reduced_pair(&p, t, pair).unwrap();
            assert!(wootters_concurrence(&rho).unwrap().value < 1e-12);
        }
    }

    #[test]
    fn atom_reservoir_maximum() {
        let alpha = 1.0 / 10f64.sqrt();
        let p = params(0.1, alpha);
        // First crossing of |c1|^2 = 1/2 by bisection on the closed form.
        let (mut lo, mut hi) = (0.0, 1.5);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if crate::amplitudes::c1_closed(&p, mid).unwrap().norm_sqr() > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let v = concurrence_atom_reservoir_closed(&p, lo).unwrap().value;
        assert_abs_diff_eq!(v, 0.9, epsilon = 1e-12);
    }

    #[test]
    fn wootters_reference_states() {
        let h = 1.0 / 2f64.sqrt();
        let bell =
            DensityMatrix::from_pure(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        assert_abs_diff_eq!(
            wootters_concurrence(&bell).unwrap().value,
            1.0,
            epsilon = 1e-14
        );
        let singlet =
            DensityMatrix::from_pure(&[c(0.0, 0.0), c(h, 0.0), c(0.0, -h), c(0.0, 0.0)]).unwrap();
        assert_abs_diff_eq!(
            wootters_concurrence(&singlet).unwrap().value,
            1.0,
            epsilon = 1e-14
        );
        let mixed = DensityMatrix::new(CMatrix::identity(4, 4) * c(0.25, 0.0)).unwrap();
        assert_abs_diff_eq!(wootters_concurrence(&mixed).unwrap().value, 0.0);
        let product =
            DensityMatrix::from_pure(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0), c(0.0, 0.0)])
                .unwrap();
        assert!(wootters_concurrence(&product).unwrap().value < 1e-14);
    }

    #[test]
    fn wootters_werner_family() {
        // p |Bell><Bell| + (1-p) I/4 has C = max(0, (3p - 1)/2).
        let h = 1.0 / 2f64.sqrt();
        let v = nalgebra::DVector::from_vec(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let m =
                &v * v.adjoint() * c(p, 0.0) + CMatrix::identity(4, 4) * c((1.0 - p) / 4.0, 0.0);
            let rho = DensityMatrix::new(m).unwrap();
            let expected = ((3.0 * p - 1.0) / 2.0).max(0.0);
            assert_abs_diff_eq!(
                wootters_concurrence(&rho).unwrap().value,
                expected,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn wootters_rejects_bad_input() {
        let rho = DensityMatrix::new(CMatrix::identity(2, 2) * c(0.5, 0.0)).unwrap();
        assert!(wootters_concurrence(&rho).is_err());
        assert!(wootters_spectrum(&rho).is_err());
    }

    #[test]
    fn spectrum_route_agrees_with_factor_route() {
        let p = params(0.2, 0.5);
        for t in [0.3, 1.1, 2.9, 7.5] {
            for pair in Pair::ALL {
                let rho = reduced_pair(&p, t, pair).unwrap();
                let mu = wootters_spectrum(&rho).unwrap();
                let s: Vec<f64> = mu.iter().map(|m| m.sqrt()).collect();
                let via_spectrum = wootters_combination(&s);
                let via_factor = wootters_concurrence(&rho).unwrap().value;
                // Square roots of rounding-level eigenvalues limit this route.
                assert_abs_diff_eq!(via_spectrum, via_factor, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn cross_pair_baselines() {
        // Frozen from an independent numpy evaluation of the Wootters formula.
        let p = params(0.1, 1.0 / 10f64.sqrt());
        let d = p.d().unwrap();
        assert!(concurrence_cross_pair(&p, 2.0 * PI / d).unwrap().value < 1e-12);
        assert_abs_diff_eq!(
            concurrence_cross_pair(&p, 2.0).unwrap().value,
            0.010_820_998_253_152_08,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            concurrence_cross_pair(&p, 5.0).unwrap().value,
            0.049_846_368_673_491_38,
            epsilon = 1e-10
        );
    }

    #[test]
    fn cross_pair_matches_hand_reduction() {
        // The a1 r2 reduction is an X state: C = 2 beta |c1 c2| max(0, alpha - beta |c1 c2|).
        for alpha in [0.2, 1.0 / 10f64.sqrt(), 0.5, 0.7] {
            let p = params(0.1, alpha);
            for k in 0..60 {
                let t = 0.37 * k as f64;
                let s = amplitude_state(&p, t).unwrap();
                let x = s.c1.norm() * s.c2;
                let expected = 2.0 * p.beta() * x * (alpha - p.beta() * x).max(0.0);
                assert_abs_diff_eq!(
                    concurrence_cross_pair(&p, t).unwrap().value,
                    expected,
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn i_concurrence_examples() {
        let mut amplitudes = [c(0.0, 0.0); 16];
        amplitudes[0] = c(1.0, 0.0);
        let product = JointState { t: 0.0, amplitudes };
        for part in Partition::all_subsets() {
            assert_eq!(i_concurrence(&product, &part).value, 0.0);
        }
        assert_eq!(multipartite_concurrence(&product).value, 0.0);

        let alpha = 1.0 / 10f64.sqrt();
        let p = params(0.1, alpha);
        let split = Partition::new(&[Qubit::A1, Qubit::R1]).unwrap();
        let atoms_vs_res = Partition::new(&[Qubit::A1, Qubit::A2]).unwrap();
        for t in [0.0, 1.3, 4.4, 20.0] {
            let s = build_joint_state(&p, t).unwrap();
            assert_abs_diff_eq!(i_concurrence(&s, &split).value, 0.6, epsilon = 1e-12);
            let a = i_concurrence(&s, &split).value;
            let b = i_concurrence(&s, &split.complement()).value;
            assert_abs_diff_eq!(a, b, epsilon = 1e-12);
        }
        let s0 = build_joint_state(&p, 0.0).unwrap();
        assert_abs_diff_eq!(
            i_concurrence(&s0, &atoms_vs_res).value,
            0.0,
            epsilon = 1e-12
        );
        // Single-qubit cuts are bounded by one.
        for t in [0.0, 2.0, 5.0] {
            let s = build_joint_state(&p, t).unwrap();
            for q in Qubit::ALL {
                let v = i_concurrence(&s, &Partition::new(&[q]).unwrap()).value;
                assert!(v <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn multipartite_at_start() {
        let p = params(0.1, 1.0 / 10f64.sqrt());
        let s = build_joint_state(&p, 0.0).unwrap();
        assert_abs_diff_eq!(multipartite_concurrence(&s).value, 0.6, epsilon = 1e-12);
        let late = build_joint_state(&p, 50.0 / p.lambda()).unwrap();
        assert_abs_diff_eq!(multipartite_concurrence(&late).value, 0.6, epsilon = 1e-4);
    }

    #[test]
    fn subsystem_swap_symmetry() {
        // Relabel 1 <-> 2: swap bits (a1, r1) with (a2, r2).
        let p = params(0.2, 0.45);
        for t in [0.5, 3.0, 11.0] {
            let s = build_joint_state(&p, t).unwrap();
            let mut swapped = s.clone();
            for (i, a) in s.amplitudes.iter().enumerate() {
                let j = ((i & 0b0011) << 2) | ((i & 0b1100) >> 2);
                swapped.amplitudes[j] = *a;
            }
            for part in Partition::all_subsets() {
                let mirrored = Partition::from_mask(
                    ((part.mask() & 0b0011) << 2) | ((part.mask() & 0b1100) >> 2),
                )
                .unwrap();
                assert_abs_diff_eq!(
                    i_concurrence(&s, &part).value,
                    i_concurrence(&swapped, &mirrored).value,
                    epsilon = 1e-14
                );
            }
            assert_abs_diff_eq!(
                multipartite_concurrence(&s).value,
                multipartite_concurrence(&swapped).value,
                epsilon = 1e-14
            );
            let a2r1 = partial_trace(&s, &Partition::new(&[Qubit::R1, Qubit::A2]).unwrap());
            let a1r2 = partial_trace(&s, &Partition::new(&[Qubit::A1, Qubit::R2]).unwrap());
            assert_abs_diff_eq!(
                wootters_concurrence(&a2r1).unwrap().value,
                wootters_concurrence(&a1r2).unwrap().value,
                epsilon = 1e-12
            );
        }
    }
}
