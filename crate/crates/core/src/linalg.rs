//! Dense eigen- and singular-value routines for the small complex matrices
//! that appear here (dimension at most 16).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const MAX_SWEEPS: usize = 60;

/// Largest entry of `A - A^H`, in modulus.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in descending order and the matching eigenvectors as
/// columns.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix expected");
    let mut m = a.clone();
    // Symmetrize the input so rounding asymmetry does not accumulate.
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n, n);
    let scale = m
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    let tiny = 1e-18 * scale;
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= tiny {
                    continue;
                }
                rotated = true;
                let phase = apq / mag;
                let zeta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // J = [[c, s e^{i phi}], [-s e^{-i phi}, c]] on (p, q); M <- J^H M J.
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = mkp * c + mkq * jqp;
                    m[(k, q)] = mkp * jpq + mkq * c;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = mpk * c + mqk * jqp.conj();
                    m[(q, k)] = mpk * jpq.conj() + mqk * c;
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * jqp;
                    v[(k, q)] = vkp * jpq + vkq * c;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Singular values of a general complex matrix by one-sided Jacobi, in
/// descending order.
///
/// Small singular values come out with absolute accuracy of order
/// `eps * ||A||`, which is what the concurrence needs near rank deficiency.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    let (rows, cols) = a.shape();
    let mut u = a.clone();
    let mut converged = cols < 2;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for k in 0..rows {
                    alpha += u[(k, p)].norm_sqr();
                    beta += u[(k, q)].norm_sqr();
                    gamma += u[(k, p)].conj() * u[(k, q)];
                }
                let g = gamma.norm();
                if g <= 1e-300 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..rows {
                    let up = u[(k, p)];
                    let uq = u[(k, q)] * phase.conj();
                    u[(k, p)] = up * c - uq * s;
                    u[(k, q)] = (up * s + uq * c) * phase;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }
    let mut sv: Vec<f64> = (0..cols).map(|j| u.column(j).norm()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Householder reduction to upper Hessenberg form.
fn hessenberg(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * norm;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2 v v^H / (v^H v)
        for j in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            let f = 2.0 * dot / vnorm2;
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * f;
            }
        }
        for i in 0..n {
            let dot: Complex64 = v
                .iter()
                .enumerate()
                .map(|(j, vj)| h[(i, k + 1 + j)] * vj)
                .sum();
            let f = 2.0 * dot / vnorm2;
            for (j, vj) in v.iter().enumerate() {
                h[(i, k + 1 + j)] -= f * vj.conj();
            }
        }
    }
    h
}

/// Givens rotation `(c, s)` with `[c, s; -conj(s), c] [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (1.0, ZERO);
    }
    if a.norm() == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let c = a.norm() / r;
    let s = (a / a.norm()) * b.conj() / r;
    (c, s)
}

/// Eigenvalue of the trailing 2x2 block closer to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = 0.5 * (a + d);
    let disc = (0.25 * (a - d) * (a - d) + b * c).sqrt();
    let l1 = tr + disc;
    let l2 = tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvalues of a general complex matrix: Hessenberg reduction followed by
/// single-shift QR iteration with deflation.
///
/// Returned in descending order of real part, ties broken by imaginary part.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix expected");
    let mut h = hessenberg(a);
    let mut out = Vec::with_capacity(n);
    let max_iter = 100 * n.max(1);

    let mut hi = n;
    let mut iter = 0;
    while hi > 0 {
        if hi == 1 {
            out.push(h[(0, 0)]);
            break;
        }
        // Locate the start of the unreduced trailing block.
        let mut lo = hi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if sub <= f64::EPSILON * diag || sub < 1e-300 {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi - 1 {
            out.push(h[(hi - 1, hi - 1)]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence(max_iter));
        }

        let mu = if iter % 11 == 0 {
            // Exceptional shift to break cycles.
            h[(hi - 1, hi - 1)] + Complex64::new(h[(hi - 1, hi - 2)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 2, hi - 2)],
                h[(hi - 2, hi - 1)],
                h[(hi - 1, hi - 2)],
                h[(hi - 1, hi - 1)],
            )
        };

        // Explicit shifted QR step on the active block lo..hi.
        for k in lo..hi {
            h[(k, k)] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo - 1);
        for k in lo..hi - 1 {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in lo..hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rots.push((c, s));
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let k = lo + idx;
            for i in lo..hi {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..hi {
            h[(k, k)] += mu;
        }
    }

    out.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(n: usize, seed: &[f64]) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let k = (i * n + j) * 2;
            c(seed[k % seed.len()], seed[(k + 1) % seed.len()])
        })
    }

    #[test]
    fn hermitian_known_spectrum() {
        // Pauli-y has eigenvalues +-1.
        let y =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)]);
        let (vals, vecs) = hermitian_eigen(&y).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-15 && (vals[1] + 1.0).abs() < 1e-15);
        let recon = &vecs
            * CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
                vals.iter().map(|&v| c(v, 0.0)).collect(),
            ))
            * vecs.adjoint();
        assert!((recon - y).norm() < 1e-14);
    }

    #[test]
    fn general_eigenvalues_of_triangular() {
        let a = CMatrix::from_row_slice(
            3,
            3,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(3.0, -1.0),
                c(0.0, 0.0),
                c(-2.0, 0.5),
                c(1.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(4.0, 0.0),
            ],
        );
        let ev = eigenvalues(&a).unwrap();
        assert!((ev[0] - c(4.0, 0.0)).norm() < 1e-12);
        assert!((ev[1] - c(1.0, 1.0)).norm() < 1e-12);
        assert!((ev[2] - c(-2.0, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn general_eigenvalues_of_rotation() {
        // [[0, -1], [1, 0]] has eigenvalues +-i and defeats unshifted QR.
        let a =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let ev = eigenvalues(&a).unwrap();
        assert!((ev[0] - c(0.0, 1.0)).norm() < 1e-14);
        assert!((ev[1] - c(0.0, -1.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_values_of_rank_one() {
        let u =
            nalgebra::DVector::from_vec(vec![c(1.0, 0.5), c(0.0, -2.0), c(0.3, 0.3), c(1.0, 0.0)]);
        let v =
            nalgebra::DVector::from_vec(vec![c(0.2, 0.0), c(1.0, 1.0), c(-0.5, 0.1), c(0.0, 0.7)]);
        let a = &u * v.adjoint();
        let sv = singular_values(&a).unwrap();
        assert!((sv[0] - u.norm() * v.norm()).abs() < 1e-14);
        assert!(sv[1..].iter().all(|&s| s < 1e-15));
    }

    proptest! {
        #[test]
        fn trace_and_determinant_preserved(seed in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let a = random_matrix(4, &seed);
            let ev = eigenvalues(&a).unwrap();
            let tr: Complex64 = ev.iter().sum();
            let det: Complex64 = ev.iter().product();
            prop_assert!((tr - a.trace()).norm() < 1e-11);
            prop_assert!((det - a.clone().determinant()).norm() < 1e-10);
        }

        #[test]
        fn hermitian_reconstructs(seed in proptest::collection::vec(-1.0f64..1.0, 72)) {
            let b = random_matrix(6, &seed);
            let a = &b + b.adjoint();
            let (vals, vecs) = hermitian_eigen(&a).unwrap();
            let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vals.iter().map(|&v| c(v, 0.0)).collect()));
            prop_assert!((&vecs * d * vecs.adjoint() - &a).norm() < 1e-12);
            prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        }

        #[test]
        fn singular_values_square_to_gram_spectrum(seed in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let a = random_matrix(4, &seed);
            let sv = singular_values(&a).unwrap();
            let (gram, _) = hermitian_eigen(&(a.adjoint() * &a)).unwrap();
            for (s, g) in sv.iter().zip(&gram) {
                prop_assert!((s * s - g).abs() < 1e-12);
            }
        }
    }
}
