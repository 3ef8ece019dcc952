//! Joint four-qubit state of the two atoms and their effective reservoir
//! qubits, with partial traces and purities.
//!
//! Basis order is `(a1, r1, a2, r2)` with `a1` the most significant bit and
//! `1` meaning excited atom or one reservoir exciton. Reduced matrices keep
//! the same relative order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::amplitudes::{amplitude_state, PhysicalParams};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, hermiticity_defect, CMatrix};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues above `-PSD_TOL` are accepted as rounding noise.
pub const PSD_TOL: f64 = 1e-10;

/// One of the four effective qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    A1,
    R1,
    A2,
    R2,
}

impl Qubit {
    pub const ALL: [Qubit; 4] = [Qubit::A1, Qubit::R1, Qubit::A2, Qubit::R2];

    /// Bit of this qubit in a basis index.
    pub const fn bit(self) -> u8 {
        match self {
            Qubit::A1 => 0b1000,
            Qubit::R1 => 0b0100,
            Qubit::A2 => 0b0010,
            Qubit::R2 => 0b0001,
        }
    }

    pub const fn label(self) -> &'static str {
        match self {
            Qubit::A1 => "a1",
            Qubit::R1 => "r1",
            Qubit::A2 => "a2",
            Qubit::R2 => "r2",
        }
    }
}

const FULL: u8 = 0b1111;

/// A bipartition of `{a1, r1, a2, r2}`, stored by the subset that is kept
/// on the `A` side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Partition {
    mask: u8,
}

impl Partition {
    /// Builds the partition `subset | complement`.
    pub fn new(subset: &[Qubit]) -> Result<Self> {
        let mask = subset.iter().fold(0u8, |m, q| m | q.bit());
        Self::from_mask(mask)
    }

    /// Builds a partition from a bit mask over the basis index.
    pub fn from_mask(mask: u8) -> Result<Self> {
        if mask == 0 || mask & FULL == FULL || mask & !FULL != 0 {
            return Err(Error::InvalidPartition(format!(
                "subset mask {mask:#06b} must be a nonempty proper subset"
            )));
        }
        Ok(Self { mask })
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: FULL & !self.mask,
        }
    }

    /// The representative whose `A` side contains `a1`.
    pub fn canonical(&self) -> Self {
        if self.mask & Qubit::A1.bit() != 0 {
            *self
        } else {
            self.complement()
        }
    }

    /// Kept qubits in basis order.
    pub fn qubits(&self) -> impl Iterator<Item = Qubit> + '_ {
        Qubit::ALL.into_iter().filter(|q| self.mask & q.bit() != 0)
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All 14 nonempty proper subsets, by increasing mask.
    pub fn all_subsets() -> impl Iterator<Item = Partition> {
        (1..FULL).map(|mask| Partition { mask })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        for q in c.qubits() {
            f.write_str(q.label())?;
        }
        f.write_str("|")?;
        for q in c.complement().qubits() {
            f.write_str(q.label())?;
        }
        Ok(())
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The four two-qubit reductions with closed-form or plotted concurrences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    A1A2,
    R1R2,
    A1R1,
    A1R2,
}

impl Pair {
    pub const ALL: [Pair; 4] = [Pair::A1A2, Pair::R1R2, Pair::A1R1, Pair::A1R2];

    pub fn qubits(self) -> [Qubit; 2] {
        match self {
            Pair::A1A2 => [Qubit::A1, Qubit::A2],
            Pair::R1R2 => [Qubit::R1, Qubit::R2],
            Pair::A1R1 => [Qubit::A1, Qubit::R1],
            Pair::A1R2 => [Qubit::A1, Qubit::R2],
        }
    }

    pub fn partition(self) -> Partition {
        Partition::new(&self.qubits()).expect("two qubits form a proper subset")
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::A1A2 => "a1a2",
            Pair::R1R2 => "r1r2",
            Pair::A1R1 => "a1r1",
            Pair::A1R2 => "a1r2",
        }
    }
}

impl FromStr for Pair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pair::ALL
            .into_iter()
            .find(|p| p.label() == s)
            .ok_or_else(|| Error::InvalidPartition(format!("unknown pair label `{s}`")))
    }
}

/// Pure state of `(a1, r1, a2, r2)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub t: f64,
    pub amplitudes: [Complex64; 16],
}

impl JointState {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Coefficient matrix `M` with rows indexed by the kept qubits and
    /// columns by the rest, so that the reduced state is `M M^H`.
    pub fn coefficient_matrix(&self, keep: &Partition) -> CMatrix {
        let kept: Vec<u8> = keep.qubits().map(Qubit::bit).collect();
        let traced: Vec<u8> = keep.complement().qubits().map(Qubit::bit).collect();
        let mut m = CMatrix::zeros(1 << kept.len(), 1 << traced.len());
        for (index, amp) in self.amplitudes.iter().enumerate() {
            let index = index as u8;
            let row = compress(index, &kept);
            let col = compress(index, &traced);
            m[(row, col)] = *amp;
        }
        m
    }
}

/// Packs the selected bits of `index` into a dense index, first bit most
/// significant.
fn compress(index: u8, bits: &[u8]) -> usize {
    bits.iter()
        .fold(0usize, |acc, &b| (acc << 1) | usize::from(index & b != 0))
}

/// `alpha |0000> + beta (c1|10> + c2|01>) (x) (c1|10> + c2|01>)` over
/// `(a1, r1, a2, r2)`.
pub fn build_joint_state(params: &PhysicalParams, t: f64) -> Result<JointState> {
    let s = amplitude_state(params, t)?;
    let alpha = params.alpha();
    let beta = params.beta();
    let c1 = s.c1;
    let c2 = Complex64::new(s.c2, 0.0);

    let mut amplitudes = [Complex64::new(0.0, 0.0); 16];
    amplitudes[0b0000] = Complex64::new(alpha, 0.0);
    amplitudes[0b1010] = beta * c1 * c1;
    amplitudes[0b1001] = beta * c1 * c2;
    amplitudes[0b0110] = beta * c2 * c1;
    amplitudes[0b0101] = beta * c2 * c2;
    Ok(JointState { t, amplitudes })
}

/// Hermitian, unit-trace, positive semidefinite matrix on 1 to 4 qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || !matches!(n, 2 | 4 | 8 | 16) {
            return Err(Error::InvalidDensityMatrix(format!(
                "shape {}x{} is not a qubit register",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::InvalidDensityMatrix("non-finite entry".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > HERMITIAN_TOL {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (defect {defect:e})"
            )));
        }
        let trace = matrix.trace();
        if (trace - 1.0).norm() > TRACE_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace} != 1")));
        }
        let (values, _) = hermitian_eigen(&matrix)?;
        if let Some(&min) = values.last() {
            if min < -PSD_TOL {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(Self { matrix })
    }

    /// Projector onto a (normalized) pure state.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        Self::new(&v * v.adjoint())
    }

    /// `M M^H`, Hermitian and PSD by construction.
    fn from_factor(m: &CMatrix) -> Self {
        Self {
            matrix: m * m.adjoint(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.matrix)?.0)
    }
}

/// Reduced state of the qubits on the `A` side of `keep`.
pub fn partial_trace(state: &JointState, keep: &Partition) -> DensityMatrix {
    DensityMatrix::from_factor(&state.coefficient_matrix(keep))
}

/// `Tr(rho^2)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let m = rho.matrix();
    let n = m.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += m[(i, j)] * m[(j, i)];
        }
    }
    acc.re
}

/// Linear entropy `1 - Tr(rho_keep^2)` of a bipartition of the pure state.
///
/// Evaluated as twice the sum of squared 2x2 minors of the coefficient
/// matrix, which avoids cancelling against 1 when the reduction is nearly
/// pure.
pub fn linear_entropy(state: &JointState, keep: &Partition) -> f64 {
    let m = state.coefficient_matrix(keep);
    let (rows, cols) = m.shape();
    let mut acc = 0.0;
    for i in 0..rows {
        for j in i + 1..rows {
            for k in 0..cols {
                for l in k + 1..cols {
                    acc += (m[(i, k)] * m[(j, l)] - m[(i, l)] * m[(j, k)]).norm_sqr();
                }
            }
        }
    }
    let norm = state.norm_sqr();
    2.0 * acc / (norm * norm)
}

/// Two-qubit reduction of the joint state at time `t`.
pub fn reduced_pair(params: &PhysicalParams, t: f64, pair: Pair) -> Result<DensityMatrix> {
    let state = build_joint_state(params, t)?;
    Ok(partial_trace(&state, &pair.partition()))
}
