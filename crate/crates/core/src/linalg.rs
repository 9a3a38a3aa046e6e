//! Small-dimension complex linear algebra.
//!
//! Everything here works on dimensions 2, 3 and 4 only: single qubits,
//! single qutrits and qubit pairs. States are dense amplitude vectors and
//! operators are dense row-major matrices. Unitarity is a predicate rather
//! than a construction invariant so that deliberately imperfect gates can be
//! represented and studied.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Complex amplitude used for state entries and matrix elements.
pub type Amplitude = Complex64;

/// Tolerance for checks that are exact in closed form.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for values produced by accumulated floating-point work.
pub const ACCUM_TOL: f64 = 1e-9;

pub const ZERO: Amplitude = Complex64::new(0.0, 0.0);
pub const ONE: Amplitude = Complex64::new(1.0, 0.0);
pub const I: Amplitude = Complex64::new(0.0, 1.0);

pub(crate) fn c(re: f64, im: f64) -> Amplitude {
    Complex64::new(re, im)
}

fn check_dim(dim: usize) -> Result<()> {
    if matches!(dim, 2..=4) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

fn check_finite(values: &[Amplitude]) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Pure state of a qubit, qutrit or qubit pair.
///
/// Constructors enforce unit norm within [`EXACT_TOL`]. The one exception is
/// [`apply`], which returns the raw matrix-vector product so that the effect
/// of a non-unitary operator stays observable.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct StateVector {
    amps: Vec<Amplitude>,
}

impl StateVector {
    /// Builds a state from amplitudes that must already be normalized.
    pub fn new(amps: Vec<Amplitude>) -> Result<Self> {
        check_dim(amps.len())?;
        check_finite(&amps)?;
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > EXACT_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amps })
    }

    /// Builds a state by normalizing arbitrary non-zero amplitudes.
    pub fn normalized(amps: Vec<Amplitude>) -> Result<Self> {
        check_dim(amps.len())?;
        check_finite(&amps)?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        Ok(Self {
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { amps })
    }

    pub(crate) fn from_raw(amps: Vec<Amplitude>) -> Self {
        debug_assert!(matches!(amps.len(), 2..=4));
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Multiplies every amplitude by a unit-modulus phase.
    pub fn with_phase(&self, phase: Amplitude) -> Self {
        Self {
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Largest entrywise `|self − other|`; infinite on a dimension mismatch.
    pub fn max_diff(&self, other: &Self) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        max_residual(&self.amps, &other.amps, ONE)
    }

    /// Born probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Dense square operator of dimension 2, 3 or 4, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl OperatorMatrix {
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    /// Builds an operator from rows; every row must have the same length as
    /// the number of rows.
    pub fn from_rows<R: AsRef<[Amplitude]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(dim, entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![ONE; dim])
    }

    pub fn diagonal(diag: &[Amplitude]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![ZERO; dim * dim];
        for (i, d) in diag.iter().enumerate() {
            entries[i * dim + i] = *d;
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn column(&self, col: usize) -> Vec<Amplitude> {
        (0..self.dim).map(|row| self.get(row, col)).collect()
    }

    pub fn scale(&self, factor: Amplitude) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[c * n + r] = self.get(r, c).conj();
            }
        }
        Self { dim: n, entries }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                entries[r * n + c] = (0..n).map(|k| self.get(r, k) * rhs.get(k, c)).sum();
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Kronecker product of two single-qubit operators.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let dim = self.dim * rhs.dim;
        check_dim(dim)?;
        let entries = kron_raw_matrix(&self.entries, self.dim, &rhs.entries, rhs.dim);
        Ok(Self { dim, entries })
    }

    /// Largest entrywise modulus of `self − rhs`.
    pub fn max_abs_diff(&self, rhs: &Self) -> Result<f64> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(max_residual(&self.entries, &rhs.entries, ONE))
    }
}

/// Kronecker product of two raw amplitude vectors, without normalization.
pub fn kron_raw(a: &[Amplitude], b: &[Amplitude]) -> Vec<Amplitude> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

fn kron_raw_matrix(a: &[Amplitude], na: usize, b: &[Amplitude], nb: usize) -> Vec<Amplitude> {
    let n = na * nb;
    let mut out = vec![ZERO; n * n];
    for ar in 0..na {
        for ac in 0..na {
            let x = a[ar * na + ac];
            for br in 0..nb {
                for bc in 0..nb {
                    out[(ar * nb + br) * n + ac * nb + bc] = x * b[br * nb + bc];
                }
            }
        }
    }
    out
}

/// Kronecker product of two states. Only products of dimension ≤ 4 are
/// supported, i.e. qubit pairs.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = a.dim() * b.dim();
    if dim > 4 {
        return Err(Error::UnsupportedDimension(dim));
    }
    Ok(StateVector::from_raw(kron_raw(&a.amps, &b.amps)))
}

/// Matrix-vector product. The result is not renormalized.
pub fn apply(op: &OperatorMatrix, state: &StateVector) -> Result<StateVector> {
    if op.dim != state.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim,
            right: state.dim(),
        });
    }
    let n = op.dim;
    let amps = (0..n)
        .map(|r| (0..n).map(|c| op.get(r, c) * state.amps[c]).sum())
        .collect();
    Ok(StateVector::from_raw(amps))
}

/// `⟨a|b⟩`, conjugate-linear in the first argument.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Amplitude> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Squared overlap `|⟨a|b⟩|²`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner(a, b)?.norm_sqr())
}

/// True when every entry of `op†·op − 1` is within `tol`.
pub fn is_unitary(op: &OperatorMatrix, tol: f64) -> bool {
    let n = op.dim;
    let adj = op.adjoint();
    for r in 0..n {
        for c in 0..n {
            let v: Amplitude = (0..n).map(|k| adj.get(r, k) * op.get(k, c)).sum();
            let target = if r == c { ONE } else { ZERO };
            if (v - target).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Result of comparing two objects up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseMatch {
    pub matched: bool,
    /// Unit phase `φ` with `a ≈ φ·b`; meaningful only when `matched`.
    pub phase: Amplitude,
    /// Largest entrywise `|a − φ·b|`.
    pub residual: f64,
}

/// Anything that is a flat list of amplitudes with a dimension.
pub trait Amplitudes {
    fn dim(&self) -> usize;
    fn raw(&self) -> &[Amplitude];
}

impl Amplitudes for StateVector {
    fn dim(&self) -> usize {
        self.amps.len()
    }
    fn raw(&self) -> &[Amplitude] {
        &self.amps
    }
}

impl Amplitudes for OperatorMatrix {
    fn dim(&self) -> usize {
        self.dim
    }
    fn raw(&self) -> &[Amplitude] {
        &self.entries
    }
}

fn max_residual(a: &[Amplitude], b: &[Amplitude], phase: Amplitude) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max)
}

/// Decides whether `a = φ·b` for some unit phase `φ`.
///
/// The phase is read off the entry where `b` has the largest modulus (first
/// such entry on ties), so it never divides by a near-zero value.
pub fn equal_up_to_global_phase<T: Amplitudes>(a: &T, b: &T, tol: f64) -> Result<PhaseMatch> {
    if a.dim() != b.dim() || a.raw().len() != b.raw().len() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let (ra, rb) = (a.raw(), b.raw());
    let pivot = |v: &[Amplitude]| {
        v.iter()
            .enumerate()
            .fold((0, 0.0), |best, (i, z)| if z.norm() > best.1 { (i, z.norm()) } else { best })
    };
    let (_, ma) = pivot(ra);
    let (ib, mb) = pivot(rb);
    if ma == 0.0 && mb == 0.0 {
        return Err(Error::DegenerateInput);
    }
    let no_match = |residual| PhaseMatch {
        matched: false,
        phase: ONE,
        residual,
    };
    if mb == 0.0 || ra[ib].norm() == 0.0 {
        return Ok(no_match(ma.max(mb)));
    }
    let ratio = ra[ib] / rb[ib];
    let phase = ratio / ratio.norm();
    let residual = max_residual(ra, rb, phase);
    if residual <= tol {
        Ok(PhaseMatch {
            matched: true,
            phase,
            residual,
        })
    } else {
        Ok(no_match(residual))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn ket(v: &[(f64, f64)]) -> StateVector {
        StateVector::normalized(v.iter().map(|&(r, i)| c(r, i)).collect()).unwrap()
    }

    fn close(a: &[Amplitude], b: &[Amplitude]) -> bool {
        max_residual(a, b, ONE) < EXACT_TOL
    }

    #[test]
    fn tensor_basis_and_superpositions() {
        let zero = StateVector::basis(2, 0).unwrap();
        let plus = ket(&[(1.0, 0.0), (1.0, 0.0)]);
        assert!(close(tensor(&zero, &zero).unwrap().amplitudes(), &[ONE, ZERO, ZERO, ZERO]));
        let h = c(FRAC_1_SQRT_2, 0.0);
        assert!(close(tensor(&plus, &zero).unwrap().amplitudes(), &[h, ZERO, h, ZERO]));

        let plus_i = ket(&[(1.0, 0.0), (0.0, 1.0)]);
        let minus_i = ket(&[(1.0, 0.0), (0.0, -1.0)]);
        let got = tensor(&plus_i, &minus_i).unwrap();
        let want = [c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)];
        assert!(close(got.amplitudes(), &want));
    }

    #[test]
    fn tensor_rejects_qutrit_pairs() {
        let q = StateVector::basis(3, 0).unwrap();
        assert_eq!(tensor(&q, &q), Err(Error::UnsupportedDimension(9)));
        let b = StateVector::basis(2, 0).unwrap();
        assert_eq!(tensor(&q, &b), Err(Error::UnsupportedDimension(6)));
    }

    #[test]
    fn apply_identity_and_mismatch() {
        let one = StateVector::basis(2, 1).unwrap();
        let id = OperatorMatrix::identity(2).unwrap();
        assert_eq!(apply(&id, &one).unwrap(), one);
        let id4 = OperatorMatrix::identity(4).unwrap();
        assert!(matches!(apply(&id4, &one), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn apply_does_not_renormalize() {
        let op = OperatorMatrix::diagonal(&[ONE, c(2.0, 0.0)]).unwrap();
        let out = apply(&op, &StateVector::basis(2, 1).unwrap()).unwrap();
        assert!((out.norm_sqr() - 4.0).abs() < EXACT_TOL);
    }

    #[test]
    fn inner_and_fidelity() {
        let zero = StateVector::basis(2, 0).unwrap();
        let one = StateVector::basis(2, 1).unwrap();
        assert_eq!(inner(&zero, &one).unwrap(), ZERO);
        let phi = ket(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let phi_i = ket(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0)]);
        assert!((inner(&phi, &phi).unwrap() - ONE).norm() < EXACT_TOL);
        assert!((inner(&phi, &phi_i).unwrap() - c(0.5, 0.5)).norm() < EXACT_TOL);
        assert!((fidelity(&phi, &phi_i).unwrap() - 0.5).abs() < EXACT_TOL);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < EXACT_TOL);
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!(inner(&zero, &phi).is_err());
    }

    #[test]
    fn unitarity_predicate() {
        let bad = OperatorMatrix::diagonal(&[ONE, c(2.0, 0.0)]).unwrap();
        assert!(!is_unitary(&bad, EXACT_TOL));
        assert!(is_unitary(&OperatorMatrix::identity(3).unwrap(), EXACT_TOL));
    }

    #[test]
    fn phase_matching() {
        let one = StateVector::basis(2, 1).unwrap();
        let i_one = one.with_phase(I);
        let m = equal_up_to_global_phase(&one, &i_one, EXACT_TOL).unwrap();
        assert!(m.matched);
        assert!((m.phase - c(0.0, -1.0)).norm() < EXACT_TOL);

        let h = c(FRAC_1_SQRT_2, 0.0);
        let had = OperatorMatrix::from_rows(&[[h, h], [h, -h]]).unwrap();
        let id = OperatorMatrix::identity(2).unwrap();
        assert!(!equal_up_to_global_phase(&had, &id, EXACT_TOL).unwrap().matched);
    }

    #[test]
    fn phase_matching_degenerate_and_zero_pivot() {
        let z = OperatorMatrix::new(2, vec![ZERO; 4]).unwrap();
        assert_eq!(
            equal_up_to_global_phase(&z, &z, EXACT_TOL),
            Err(Error::DegenerateInput)
        );
        let id = OperatorMatrix::identity(2).unwrap();
        assert!(!equal_up_to_global_phase(&z, &id, EXACT_TOL).unwrap().matched);
        assert!(!equal_up_to_global_phase(&id, &z, EXACT_TOL).unwrap().matched);
    }

    #[test]
    fn constructors_validate() {
        assert!(matches!(
            StateVector::new(vec![ONE, ONE]),
            Err(Error::NotNormalized { .. })
        ));
        assert_eq!(StateVector::new(vec![ONE]), Err(Error::UnsupportedDimension(1)));
        assert_eq!(
            StateVector::new(vec![c(f64::NAN, 0.0), ZERO]),
            Err(Error::NonFinite)
        );
        assert!(StateVector::normalized(vec![ZERO, ZERO]).is_err());
        assert!(OperatorMatrix::from_rows(&[vec![ONE, ZERO], vec![ONE]]).is_err());
        assert!(OperatorMatrix::identity(5).is_err());
    }

    #[test]
    fn kron_of_operators_matches_raw() {
        let a = OperatorMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]]).unwrap();
        let b = OperatorMatrix::diagonal(&[ONE, I]).unwrap();
        let k = a.kron(&b).unwrap();
        // (A ⊗ D)|00⟩ = |1⟩ ⊗ |0⟩ = |10⟩
        let s = apply(&k, &StateVector::basis(4, 0).unwrap()).unwrap();
        assert!(close(s.amplitudes(), &[ZERO, ZERO, ONE, ZERO]));
        assert!(a.kron(&OperatorMatrix::identity(3).unwrap()).is_err());
    }
}
