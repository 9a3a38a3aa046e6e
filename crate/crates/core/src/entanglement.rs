//! Entangled pairs: the `|00⟩ + k|11⟩` family, imperfect-gate diagnostics,
//! the Bell basis and its ±i extension, dense coding over either quadruple,
//! and density matrices for the pure-versus-mixed comparison.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{entangler, group_element, hadamard4, imperfect_entangler, GroupLabel};
use crate::linalg::{
    apply, c, fidelity, Amplitude, OperatorMatrix, StateVector, ACCUM_TOL, EXACT_TOL, ONE,
    ZERO,
};
use crate::measure::{born_probabilities, sample_index};

/// `(|00⟩ + k|11⟩)/√(1+|k|²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntangledFamily {
    pub k: Amplitude,
}

impl EntangledFamily {
    pub fn state(&self) -> Result<StateVector> {
        family_state(self.k)
    }
}

pub fn family_state(k: Amplitude) -> Result<StateVector> {
    StateVector::normalized(vec![ONE, ZERO, ZERO, k])
}

/// Pure-state concurrence `2|ad − bc|` of a two-qubit state `(a, b, c, d)`.
pub fn concurrence(s: &StateVector) -> Result<f64> {
    if s.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: s.dim(),
        });
    }
    let [a, b, cc, d] = [0, 1, 2, 3].map(|i| s.amplitudes()[i]);
    Ok(2.0 * (a * d - b * cc).norm())
}

/// `|00⟩` as a two-qubit state.
pub fn ket00() -> StateVector {
    StateVector::basis(4, 0).expect("dimension 4")
}

/// Overlap of the imperfect entangler's output with `Φ⁺`. Only `θ₁` enters
/// because `|00⟩` never touches the `θ₂` block.
pub fn entangler_fidelity(theta1: f64) -> f64 {
    let out = apply(&imperfect_entangler(theta1, 0.0), &ket00()).expect("dimension 4");
    let target = apply(&entangler(), &ket00()).expect("dimension 4");
    fidelity(&out, &target).expect("dimension 4")
}

/// Born probabilities over `00, 01, 10, 11` after applying `H₄` to `s`.
pub fn hadamard_diagnostic(s: &StateVector) -> Result<[f64; 4]> {
    let rotated = apply(&hadamard4(), s)?;
    let p = rotated.probabilities();
    Ok([p[0], p[1], p[2], p[3]])
}

/// `P(01) + P(10)` of a diagnostic distribution: zero for a correctly
/// prepared `Φ⁺`.
pub fn error_signal(dist: &[f64; 4]) -> f64 {
    dist[1] + dist[2]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BellFlavor {
    /// `Φ⁺, Φ⁻, Ψ⁺, Ψ⁻`.
    Standard,
    /// `|00⟩±i|11⟩, |01⟩±i|10⟩`.
    IBasis,
}

impl BellFlavor {
    pub fn other(self) -> Self {
        match self {
            BellFlavor::Standard => BellFlavor::IBasis,
            BellFlavor::IBasis => BellFlavor::Standard,
        }
    }

    /// Local operator applied to the first qubit for messages 00, 01, 10, 11.
    pub fn encoders(self) -> [GroupLabel; 4] {
        use GroupLabel::*;
        match self {
            BellFlavor::Standard => [I, B, A, C],
            BellFlavor::IBasis => [D, F, E, G],
        }
    }

    pub fn state_names(self) -> [&'static str; 4] {
        match self {
            BellFlavor::Standard => ["Phi+", "Phi-", "Psi+", "Psi-"],
            BellFlavor::IBasis => ["|00>+i|11>", "|00>-i|11>", "|01>+i|10>", "|01>-i|10>"],
        }
    }

    /// The orthonormal quadruple of this flavor, in message order.
    pub fn basis(self) -> BellBasis {
        let w = match self {
            BellFlavor::Standard => ONE,
            BellFlavor::IBasis => crate::linalg::I,
        };
        let h = FRAC_1_SQRT_2;
        let s = |v: [Amplitude; 4]| StateVector::new(v.map(|z| z * h).to_vec()).expect("unit");
        BellBasis {
            flavor: self,
            states: [
                s([ONE, ZERO, ZERO, w]),
                s([ONE, ZERO, ZERO, -w]),
                s([ZERO, ONE, w, ZERO]),
                s([ZERO, ONE, -w, ZERO]),
            ],
        }
    }
}

impl fmt::Display for BellFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BellFlavor::Standard => "standard",
            BellFlavor::IBasis => "i-basis",
        })
    }
}

impl FromStr for BellFlavor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" | "bell" => Ok(BellFlavor::Standard),
            "i-basis" | "i" | "ibasis" => Ok(BellFlavor::IBasis),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Four mutually orthonormal two-qubit states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BellBasis {
    pub flavor: BellFlavor,
    pub states: [StateVector; 4],
}

/// Both quadruples: standard Bell states first, then the ±i states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtendedBellSet {
    pub states: Vec<StateVector>,
    pub labels: Vec<&'static str>,
}

impl ExtendedBellSet {
    pub fn new() -> Self {
        let mut states = Vec::with_capacity(8);
        let mut labels = Vec::with_capacity(8);
        for flavor in [BellFlavor::Standard, BellFlavor::IBasis] {
            states.extend(flavor.basis().states);
            labels.extend(flavor.state_names());
        }
        Self { states, labels }
    }

    /// Squared overlaps between every pair of states.
    pub fn overlap_matrix(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                m[i][j] = fidelity(a, b).expect("dimension 4");
            }
        }
        m
    }
}

impl Default for ExtendedBellSet {
    fn default() -> Self {
        Self::new()
    }
}

/// A two-bit dense-coding message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Message(u8);

impl Message {
    pub const ALL: [Message; 4] = [Message(0), Message(1), Message(2), Message(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value < 4 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!("message {value} exceeds two bits")))
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02b}", self.0)
    }
}

impl FromStr for Message {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "00" => Ok(Self(0)),
            "01" => Ok(Self(1)),
            "10" => Ok(Self(2)),
            "11" => Ok(Self(3)),
            _ => Err(Error::InvalidParameter(format!("`{s}` is not a two-bit message"))),
        }
    }
}

impl Serialize for Message {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Message {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Applies the flavor's encoder for `msg` to the first qubit of `Φ⁺`.
pub fn extended_encode(msg: Message, flavor: BellFlavor) -> StateVector {
    let local = group_element(flavor.encoders()[msg.index()]).matrix;
    let op = local
        .kron(&OperatorMatrix::identity(2).expect("dimension 2"))
        .expect("dimension 4");
    let phi_plus = BellFlavor::Standard.basis().states[0].clone();
    apply(&op, &phi_plus).expect("dimension 4")
}

/// Outcome probabilities of measuring `s` in the flavor's quadruple.
pub fn decode_distribution(s: &StateVector, flavor: BellFlavor) -> Result<[f64; 4]> {
    if s.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: s.dim(),
        });
    }
    if s.norm_sqr() < ACCUM_TOL {
        return Err(Error::InvalidState);
    }
    let basis = flavor.basis();
    let p = born_probabilities(s, &basis.states)?;
    Ok([p[0], p[1], p[2], p[3]])
}

/// Projective measurement in the flavor's quadruple. Deterministic when `s`
/// is one of the quadruple's states up to phase.
pub fn extended_decode<R: Rng + ?Sized>(
    s: &StateVector,
    flavor: BellFlavor,
    rng: &mut R,
) -> Result<Message> {
    let dist = decode_distribution(s, flavor)?;
    if let Some(k) = dist.iter().position(|&p| (p - 1.0).abs() <= EXACT_TOL) {
        return Ok(Message(k as u8));
    }
    Ok(Message(sample_index(&dist, rng) as u8))
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Amplitude>,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace at 1e-12 and eigenvalues ≥ −1e-9.
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        let op = OperatorMatrix::new(dim, entries)?;
        let rho = Self {
            dim,
            entries: op.entries().to_vec(),
        };
        if op.max_abs_diff(&op.adjoint())? > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix("not Hermitian".into()));
        }
        let tr = rho.trace();
        if (tr - ONE).norm() > EXACT_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < -ACCUM_TOL {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalue {min}")));
        }
        Ok(rho)
    }

    pub fn pure(s: &StateVector) -> Self {
        density_from_ensemble(&[(s.clone(), 1.0)]).expect("single unit-weight member")
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let w = 1.0 / dim as f64;
        let diag = vec![c(w, 0.0); dim];
        Self::new(dim, OperatorMatrix::diagonal(&diag)?.entries().to_vec())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn trace(&self) -> Amplitude {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = DMatrix::from_row_slice(self.dim, self.dim, &self.entries);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `ρ ↦ U ρ U†`.
    pub fn conjugate_by(&self, op: &OperatorMatrix) -> Result<Self> {
        let rho = OperatorMatrix::new(self.dim, self.entries.clone())?;
        let out = op.matmul(&rho)?.matmul(&op.adjoint())?;
        Ok(Self {
            dim: self.dim,
            entries: out.entries().to_vec(),
        })
    }

    /// Diagonal in the computational basis, i.e. measurement probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }
}

/// `Σ wᵢ |ψᵢ⟩⟨ψᵢ|`.
pub fn density_from_ensemble(members: &[(StateVector, f64)]) -> Result<DensityMatrix> {
    let Some((first, _)) = members.first() else {
        return Err(Error::InvalidWeights("empty ensemble".into()));
    };
    let dim = first.dim();
    if members.iter().any(|(_, w)| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("negative or non-finite weight".into()));
    }
    let total: f64 = members.iter().map(|(_, w)| w).sum();
    if (total - 1.0).abs() > ACCUM_TOL {
        return Err(Error::InvalidWeights(format!("weights sum to {total}")));
    }
    let mut entries = vec![ZERO; dim * dim];
    for (s, w) in members {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: s.dim(),
            });
        }
        let a = s.amplitudes();
        for r in 0..dim {
            for col in 0..dim {
                entries[r * dim + col] += a[r] * a[col].conj() * *w;
            }
        }
    }
    Ok(DensityMatrix { dim, entries })
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    let n = rho.dim;
    let mut acc = ZERO;
    for r in 0..n {
        for k in 0..n {
            acc += rho.get(r, k) * rho.get(k, r);
        }
    }
    acc.re
}

/// Pair emission model for a post-selected photon-pair source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceModel {
    /// Probability that a trial emits at least one pair.
    pub pair_prob: f64,
    /// Probability that a trial emits two pairs.
    pub double_pair_prob: f64,
}

impl SourceModel {
    pub fn new(pair_prob: f64, double_pair_prob: f64) -> Result<Self> {
        let in_range = |p: f64| (0.0..=1.0).contains(&p);
        if !in_range(pair_prob) || !in_range(double_pair_prob) {
            return Err(Error::InvalidParameter("probabilities must lie in [0, 1]".into()));
        }
        if double_pair_prob > pair_prob {
            return Err(Error::InvalidParameter(
                "double-pair probability exceeds pair probability".into(),
            ));
        }
        Ok(Self {
            pair_prob,
            double_pair_prob,
        })
    }
}

impl Default for SourceModel {
    fn default() -> Self {
        Self {
            pair_prob: 1e-4,
            double_pair_prob: 1e-8,
        }
    }
}

/// Two-qubit sources compared in the mixedness experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorrelationSource {
    /// `Φ⁺`.
    PureBell,
    /// `|00⟩` or `|11⟩` with probability 1/2 each.
    ClassicalMixture,
}

impl CorrelationSource {
    pub fn density_matrix(self) -> DensityMatrix {
        let phi = BellFlavor::Standard.basis().states[0].clone();
        match self {
            CorrelationSource::PureBell => DensityMatrix::pure(&phi),
            CorrelationSource::ClassicalMixture => density_from_ensemble(&[
                (ket00(), 0.5),
                (StateVector::basis(4, 3).expect("dimension 4"), 0.5),
            ])
            .expect("valid ensemble"),
        }
    }
}

impl fmt::Display for CorrelationSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CorrelationSource::PureBell => "pure-bell",
            CorrelationSource::ClassicalMixture => "classical-mixture",
        })
    }
}

impl FromStr for CorrelationSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "pure-bell" | "pure" => Ok(CorrelationSource::PureBell),
            "classical-mixture" | "mixture" | "mixed" => Ok(CorrelationSource::ClassicalMixture),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// Joint outcome probabilities when both qubits are measured in the
/// `(|0⟩±|1⟩)/√2` basis, ordered `++, +−, −+, −−`.
pub fn rotated_outcome_probabilities(rho: &DensityMatrix) -> Result<[f64; 4]> {
    let d = rho.conjugate_by(&hadamard4())?.diagonal();
    if d.len() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: d.len(),
        });
    }
    Ok([d[0], d[1], d[2], d[3]].map(|p| p.max(0.0)))
}

/// `E[(−1)^{a⊕b}]` in the rotated basis, computed exactly.
pub fn analytic_correlation(source: CorrelationSource) -> f64 {
    let p = rotated_outcome_probabilities(&source.density_matrix()).expect("dimension 4");
    p[0] - p[1] - p[2] + p[3]
}

/// Empirical rotated-basis correlation over `shots` samples.
pub fn correlation_experiment<R: Rng + ?Sized>(
    source: CorrelationSource,
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidParameter("shots must be at least 1".into()));
    }
    let probs = rotated_outcome_probabilities(&source.density_matrix())?;
    let mut sum: i64 = 0;
    for _ in 0..shots {
        let k = sample_index(&probs, rng);
        let parity = (k >> 1) ^ (k & 1);
        sum += if parity == 0 { 1 } else { -1 };
    }
    Ok(sum as f64 / shots as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{equal_up_to_global_phase, I};
    use crate::measure::rng_from_seed;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn family_examples() {
        let phi = BellFlavor::Standard.basis().states[0].clone();
        assert!((fidelity(&family_state(ONE).unwrap(), &phi).unwrap() - 1.0).abs() < EXACT_TOL);
        assert_eq!(family_state(ZERO).unwrap(), ket00());
        let ib = BellFlavor::IBasis.basis().states[0].clone();
        assert!((fidelity(&family_state(I).unwrap(), &ib).unwrap() - 1.0).abs() < EXACT_TOL);
        let fam = EntangledFamily { k: c(2.0, 0.0) };
        assert!((fam.state().unwrap().norm_sqr() - 1.0).abs() < EXACT_TOL);
    }

    #[test]
    fn concurrence_examples() {
        let phi = BellFlavor::Standard.basis().states[0].clone();
        assert!((concurrence(&phi).unwrap() - 1.0).abs() < EXACT_TOL);
        assert_eq!(concurrence(&ket00()).unwrap(), 0.0);
        let half = family_state(c(0.5, 0.0)).unwrap();
        assert!((concurrence(&half).unwrap() - 0.8).abs() < EXACT_TOL);
        assert!(concurrence(&StateVector::basis(2, 0).unwrap()).is_err());
    }

    #[test]
    fn concurrence_peaks_at_unit_modulus() {
        for i in 0..=400 {
            let m = i as f64 * 0.01;
            let got = concurrence(&family_state(c(m, 0.0)).unwrap()).unwrap();
            assert!((got - 2.0 * m / (1.0 + m * m)).abs() < ACCUM_TOL);
            assert!(got <= 1.0 + EXACT_TOL);
        }
        for k in [ONE, -ONE, I, -I] {
            assert!((concurrence(&family_state(k).unwrap()).unwrap() - 1.0).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn entangler_fidelity_examples() {
        assert!((entangler_fidelity(0.0) - 1.0).abs() < EXACT_TOL);
        assert!(entangler_fidelity(PI).abs() < EXACT_TOL);
        assert!((entangler_fidelity(FRAC_PI_2) - 0.5).abs() < EXACT_TOL);
    }

    #[test]
    fn diagnostic_examples() {
        let phi = BellFlavor::Standard.basis().states[0].clone();
        let d = hadamard_diagnostic(&phi).unwrap();
        for (g, w) in d.iter().zip([0.5, 0.0, 0.0, 0.5]) {
            assert!((g - w).abs() < EXACT_TOL);
        }
        let s = apply(&imperfect_entangler(FRAC_PI_2, 0.3), &ket00()).unwrap();
        assert!((error_signal(&hadamard_diagnostic(&s).unwrap()) - 0.5).abs() < EXACT_TOL);
        let s = apply(&imperfect_entangler(0.0, 0.3), &ket00()).unwrap();
        assert!(error_signal(&hadamard_diagnostic(&s).unwrap()).abs() < EXACT_TOL);
    }

    #[test]
    fn encode_examples() {
        let got = extended_encode("00".parse().unwrap(), BellFlavor::IBasis);
        assert!(got.max_diff(&BellFlavor::IBasis.basis().states[0]) < EXACT_TOL);

        let got = extended_encode("10".parse().unwrap(), BellFlavor::IBasis);
        let m = equal_up_to_global_phase(&got, &BellFlavor::IBasis.basis().states[2], EXACT_TOL)
            .unwrap();
        assert!(m.matched);

        let got = extended_encode("01".parse().unwrap(), BellFlavor::Standard);
        assert!(got.max_diff(&BellFlavor::Standard.basis().states[1]) < EXACT_TOL);
    }

    #[test]
    fn decode_round_trip_and_cross_flavor() {
        let mut rng = rng_from_seed(3);
        for flavor in [BellFlavor::Standard, BellFlavor::IBasis] {
            for m in Message::ALL {
                let s = extended_encode(m, flavor);
                assert_eq!(extended_decode(&s, flavor, &mut rng).unwrap(), m);
            }
        }
        let phi = BellFlavor::Standard.basis().states[0].clone();
        assert_eq!(
            extended_decode(&phi, BellFlavor::Standard, &mut rng).unwrap().to_string(),
            "00"
        );
        let d = decode_distribution(&BellFlavor::IBasis.basis().states[0], BellFlavor::Standard)
            .unwrap();
        for (g, w) in d.iter().zip([0.5, 0.5, 0.0, 0.0]) {
            assert!((g - w).abs() < EXACT_TOL);
        }
    }

    #[test]
    fn decode_rejects_zero_state() {
        let zero = StateVector::from_raw(vec![ZERO; 4]);
        let mut rng = rng_from_seed(0);
        assert_eq!(
            extended_decode(&zero, BellFlavor::Standard, &mut rng),
            Err(Error::InvalidState)
        );
    }

    #[test]
    fn ensembles() {
        let phi = BellFlavor::Standard.basis().states[0].clone();
        let pure = density_from_ensemble(&[(phi.clone(), 1.0)]).unwrap();
        assert!((purity(&pure) - 1.0).abs() < EXACT_TOL);

        let mix = CorrelationSource::ClassicalMixture.density_matrix();
        assert!((purity(&mix) - 0.5).abs() < EXACT_TOL);
        let phi_minus = BellFlavor::Standard.basis().states[1].clone();
        let other = density_from_ensemble(&[(phi, 0.5), (phi_minus, 0.5)]).unwrap();
        for (a, b) in mix.entries().iter().zip(other.entries()) {
            assert!((a - b).norm() < EXACT_TOL);
        }
        let want = [0.5, 0.0, 0.0, 0.5];
        for (g, w) in mix.diagonal().iter().zip(want) {
            assert!((g - w).abs() < EXACT_TOL);
        }

        let mm = DensityMatrix::maximally_mixed(4).unwrap();
        assert!((purity(&mm) - 0.25).abs() < EXACT_TOL);
    }

    #[test]
    fn ensemble_weight_errors() {
        let s = ket00();
        assert!(matches!(
            density_from_ensemble(&[(s.clone(), 0.7)]),
            Err(Error::InvalidWeights(_))
        ));
        assert!(density_from_ensemble(&[(s.clone(), 1.5), (s, -0.5)]).is_err());
        assert!(density_from_ensemble(&[]).is_err());
    }

    #[test]
    fn density_validation() {
        let bad = vec![c(0.5, 0.0), c(0.7, 0.0), c(0.7, 0.0), c(0.5, 0.0)];
        assert!(matches!(
            DensityMatrix::new(2, bad),
            Err(Error::InvalidDensityMatrix(_))
        ));
        let not_herm = vec![c(0.5, 0.0), c(0.0, 0.1), c(0.0, 0.1), c(0.5, 0.0)];
        assert!(DensityMatrix::new(2, not_herm).is_err());
        let ok = vec![c(0.5, 0.0), c(0.0, 0.2), c(0.0, -0.2), c(0.5, 0.0)];
        assert!(DensityMatrix::new(2, ok).is_ok());
    }

    #[test]
    fn correlations() {
        assert!((analytic_correlation(CorrelationSource::PureBell) - 1.0).abs() < EXACT_TOL);
        assert!(analytic_correlation(CorrelationSource::ClassicalMixture).abs() < EXACT_TOL);
        let mut rng = rng_from_seed(9);
        let one = correlation_experiment(CorrelationSource::PureBell, 1, &mut rng).unwrap();
        assert_eq!(one, 1.0);
        assert!(correlation_experiment(CorrelationSource::PureBell, 0, &mut rng).is_err());
    }

    #[test]
    fn source_model_bounds() {
        assert!(SourceModel::new(1e-4, 1e-3).is_err());
        assert!(SourceModel::new(1.5, 0.0).is_err());
        assert_eq!(SourceModel::default().pair_prob, 1e-4);
    }
}
