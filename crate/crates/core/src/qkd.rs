//! Seeded BB84-style sessions over three state sets: the usual Z/X set, the
//! all-superposition X/Y set, and nine qutrit directions measured in six
//! frames.
//!
//! Every variant is described by a list of preparable states and a list of
//! complete measurement bases. The first two vectors of a basis are the
//! in-frame outcomes (bits 0 and 1); qutrit bases carry a third,
//! out-of-frame vector. A round is kept when Alice's state is one of the two
//! in-frame vectors of Bob's basis and Bob's outcome is in-frame.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::entanglement::SourceModel;
use crate::error::{Error, Result};
use crate::frames::{nine_directions, six_frames, Frame};
use crate::linalg::{c, equal_up_to_global_phase, StateVector, EXACT_TOL};
use crate::measure::{born_probabilities, rng_from_seed, sample_index};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProtocolVariant {
    /// `|0⟩, |1⟩` and `(|0⟩±|1⟩)/√2`.
    StandardZx,
    /// `(|0⟩±|1⟩)/√2` and `(|0⟩±i|1⟩)/√2`.
    SuperpositionXy,
    /// Nine qutrit directions, six frames.
    QutritNine,
}

impl ProtocolVariant {
    pub const ALL: [ProtocolVariant; 3] = [
        ProtocolVariant::StandardZx,
        ProtocolVariant::SuperpositionXy,
        ProtocolVariant::QutritNine,
    ];
}

impl fmt::Display for ProtocolVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProtocolVariant::StandardZx => "standard_zx",
            ProtocolVariant::SuperpositionXy => "superposition_xy",
            ProtocolVariant::QutritNine => "qutrit_nine",
        })
    }
}

impl FromStr for ProtocolVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "standard_zx" | "standard" | "zx" => Ok(ProtocolVariant::StandardZx),
            "superposition_xy" | "superposition" | "xy" => Ok(ProtocolVariant::SuperpositionXy),
            "qutrit_nine" | "qutrit" | "nine" => Ok(ProtocolVariant::QutritNine),
            _ => Err(Error::UnknownLabel(s.to_string())),
        }
    }
}

/// A complete orthonormal measurement basis. The first two vectors are the
/// in-frame outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    pub name: String,
    pub vectors: Vec<StateVector>,
}

impl MeasurementBasis {
    fn from_frame(frame: &Frame) -> Self {
        Self {
            name: frame.label.to_string(),
            vectors: frame.measurement_basis().to_vec(),
        }
    }
}

/// States, bases and the membership table of one variant.
#[derive(Debug, Clone)]
pub struct ProtocolSetup {
    pub variant: ProtocolVariant,
    pub states: Vec<StateVector>,
    pub state_names: Vec<String>,
    pub bases: Vec<MeasurementBasis>,
    /// `membership[state][basis]` is the bit Alice's state encodes in that
    /// basis, if the state is one of its in-frame vectors.
    membership: Vec<Vec<Option<u8>>>,
}

fn qubit(a: (f64, f64), b: (f64, f64)) -> StateVector {
    StateVector::from_raw(vec![c(a.0, a.1), c(b.0, b.1)])
}

impl ProtocolSetup {
    pub fn new(variant: ProtocolVariant) -> Self {
        let h = FRAC_1_SQRT_2;
        let z = [qubit((1.0, 0.0), (0.0, 0.0)), qubit((0.0, 0.0), (1.0, 0.0))];
        let x = [qubit((h, 0.0), (h, 0.0)), qubit((h, 0.0), (-h, 0.0))];
        let y = [qubit((h, 0.0), (0.0, h)), qubit((h, 0.0), (0.0, -h))];
        let basis = |name: &str, v: &[StateVector; 2]| MeasurementBasis {
            name: name.to_string(),
            vectors: v.to_vec(),
        };
        let (states, state_names, bases): (Vec<StateVector>, Vec<String>, Vec<MeasurementBasis>) =
            match variant {
                ProtocolVariant::StandardZx => (
                    z.iter().chain(&x).cloned().collect(),
                    names(&["0", "1", "+", "-"]),
                    vec![basis("Z", &z), basis("X", &x)],
                ),
                ProtocolVariant::SuperpositionXy => (
                    x.iter().chain(&y).cloned().collect(),
                    names(&["+", "-", "+i", "-i"]),
                    vec![basis("X", &x), basis("Y", &y)],
                ),
                ProtocolVariant::QutritNine => (
                    nine_directions(),
                    names(&["0", "1", "2", "0+1", "0-1", "0+2", "0-2", "1+2", "1-2"]),
                    six_frames().iter().map(MeasurementBasis::from_frame).collect(),
                ),
            };
        let membership = states
            .iter()
            .map(|s| {
                bases
                    .iter()
                    .map(|b| {
                        b.vectors[..2].iter().position(|v| same_ray(v, s)).map(|p| p as u8)
                    })
                    .collect()
            })
            .collect();
        Self {
            variant,
            states,
            state_names,
            bases,
            membership,
        }
    }

    /// Bit encoded by state `state` in basis `basis`, if it belongs to it.
    pub fn bit_in(&self, state: usize, basis: usize) -> Option<u8> {
        self.membership[state][basis]
    }

    /// First basis containing `state`.
    pub fn home_basis(&self, state: usize) -> usize {
        (0..self.bases.len())
            .find(|&b| self.membership[state][b].is_some())
            .expect("every state belongs to some basis")
    }

    /// Resolves a symbolic state name to an index into `states`.
    ///
    /// Polarization angles are accepted for the Z/X set: `0` and `+90` are
    /// the computational pair, `+45` and `-45` the diagonal pair.
    pub fn named_state(&self, name: &str) -> Result<usize> {
        let key = name
            .trim()
            .trim_end_matches('°')
            .trim_end_matches("deg")
            .trim_start_matches('|')
            .trim_end_matches('>')
            .to_ascii_lowercase();
        let alias = match (self.variant, key.as_str()) {
            (ProtocolVariant::StandardZx, "90" | "+90") => "1",
            (ProtocolVariant::StandardZx, "45" | "+45") => "+",
            (ProtocolVariant::StandardZx, "-45") => "-",
            (_, other) => other,
        };
        self.state_names
            .iter()
            .position(|n| n == alias)
            .ok_or_else(|| Error::UnknownLabel(name.to_string()))
    }
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn same_ray(a: &StateVector, b: &StateVector) -> bool {
    equal_up_to_global_phase(a, b, EXACT_TOL)
        .map(|m| m.matched)
        .unwrap_or(false)
}

/// How Eve picks her measurement basis each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "basis")]
pub enum EveStrategy {
    /// Uniform over the variant's bases.
    Uniform,
    /// Always the given basis index.
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    /// Probability of swapping Bob's two in-frame outcomes.
    pub flip_prob: f64,
    pub eve: Option<EveStrategy>,
}

impl ChannelModel {
    pub fn noiseless() -> Self {
        Self {
            flip_prob: 0.0,
            eve: None,
        }
    }

    pub fn new(flip_prob: f64, eve: Option<EveStrategy>) -> Result<Self> {
        if !(0.0..=1.0).contains(&flip_prob) {
            return Err(Error::InvalidParameter(format!(
                "flip probability {flip_prob} outside [0, 1]"
            )));
        }
        Ok(Self { flip_prob, eve })
    }
}

impl Default for ChannelModel {
    fn default() -> Self {
        Self::noiseless()
    }
}

/// What Eve did in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct EveAction {
    pub basis_index: usize,
    pub outcome: usize,
    pub forwarded: StateVector,
}

/// Measures `state` in a basis chosen by `strategy` and resends the
/// collapsed basis vector.
pub fn eve_intercept_resend<R: Rng + ?Sized>(
    strategy: EveStrategy,
    setup: &ProtocolSetup,
    state: &StateVector,
    rng: &mut R,
) -> Result<EveAction> {
    let basis_index = match strategy {
        EveStrategy::Uniform => rng.random_range(0..setup.bases.len() as u32) as usize,
        EveStrategy::Fixed(k) if k < setup.bases.len() => k,
        EveStrategy::Fixed(k) => {
            return Err(Error::InvalidParameter(format!("no basis with index {k}")))
        }
    };
    let basis = &setup.bases[basis_index];
    let probs = born_probabilities(state, &basis.vectors)?;
    let outcome = sample_index(&probs, rng);
    Ok(EveAction {
        basis_index,
        outcome,
        forwarded: basis.vectors[outcome].clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QutritOutcome {
    First,
    Second,
    OutOfFrame,
}

impl QutritOutcome {
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Born probabilities of the three outcomes of a frame measurement.
pub fn qutrit_probabilities(s: &StateVector, frame: &Frame) -> Result<[f64; 3]> {
    let p = born_probabilities(s, &frame.measurement_basis())?;
    Ok([p[0], p[1], p[2]])
}

pub fn qutrit_measure<R: Rng + ?Sized>(
    s: &StateVector,
    frame: &Frame,
    rng: &mut R,
) -> Result<QutritOutcome> {
    let p = qutrit_probabilities(s, frame)?;
    Ok(match sample_index(&p, rng) {
        0 => QutritOutcome::First,
        1 => QutritOutcome::Second,
        _ => QutritOutcome::OutOfFrame,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundRecord {
    pub alice_state_index: usize,
    /// Basis in which Alice's bit is read: Bob's basis when her state lies
    /// in it, otherwise the first basis containing her state.
    pub alice_basis_index: usize,
    pub bob_basis_index: usize,
    /// 0 and 1 are in-frame, 2 is out-of-frame.
    pub bob_outcome: usize,
    pub kept: bool,
    pub alice_bit: Option<u8>,
    pub bob_bit: Option<u8>,
    pub eve_basis_index: Option<usize>,
    pub eve_outcome: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SessionSummary {
    pub sent: u64,
    pub sifted: u64,
    pub errors: u64,
    /// `errors / sifted`; absent when nothing was sifted.
    pub qber: Option<f64>,
    pub sift_rate: f64,
}

impl SessionSummary {
    fn from_rounds(rounds: &[RoundRecord]) -> Self {
        let sent = rounds.len() as u64;
        let sifted = rounds.iter().filter(|r| r.kept).count() as u64;
        let errors = rounds
            .iter()
            .filter(|r| r.kept && r.alice_bit != r.bob_bit)
            .count() as u64;
        Self {
            sent,
            sifted,
            errors,
            qber: (sifted > 0).then(|| errors as f64 / sifted as f64),
            sift_rate: if sent > 0 {
                sifted as f64 / sent as f64
            } else {
                0.0
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProtocolTranscript {
    pub variant: ProtocolVariant,
    pub seed: u64,
    pub channel: ChannelModel,
    pub rounds: Vec<RoundRecord>,
    pub summary: SessionSummary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub variant: ProtocolVariant,
    pub n_rounds: u64,
    pub channel: ChannelModel,
    pub seed: u64,
    /// Restricts Alice to a single preparation (index into the variant's
    /// state list).
    pub alice_state: Option<usize>,
}

pub fn run_session(
    variant: ProtocolVariant,
    n_rounds: u64,
    channel: ChannelModel,
    seed: u64,
) -> Result<ProtocolTranscript> {
    run_session_with(&SessionConfig {
        variant,
        n_rounds,
        channel,
        seed,
        alice_state: None,
    })
}

pub fn run_session_with(config: &SessionConfig) -> Result<ProtocolTranscript> {
    if config.n_rounds == 0 {
        return Err(Error::InvalidParameter("n_rounds must be at least 1".into()));
    }
    let setup = ProtocolSetup::new(config.variant);
    if let Some(k) = config.alice_state {
        if k >= setup.states.len() {
            return Err(Error::InvalidParameter(format!("no state with index {k}")));
        }
    }
    let channel = ChannelModel::new(config.channel.flip_prob, config.channel.eve)?;
    let mut rng = rng_from_seed(config.seed);
    let n_states = setup.states.len() as u32;
    let n_bases = setup.bases.len() as u32;
    let mut rounds = Vec::with_capacity(config.n_rounds as usize);
    for _ in 0..config.n_rounds {
        let a = match config.alice_state {
            Some(k) => k,
            None => rng.random_range(0..n_states) as usize,
        };
        let b = rng.random_range(0..n_bases) as usize;

        let mut in_flight = setup.states[a].clone();
        let mut eve_basis_index = None;
        let mut eve_outcome = None;
        if let Some(strategy) = channel.eve {
            let act = eve_intercept_resend(strategy, &setup, &in_flight, &mut rng)?;
            eve_basis_index = Some(act.basis_index);
            eve_outcome = Some(act.outcome);
            in_flight = act.forwarded;
        }

        let probs = born_probabilities(&in_flight, &setup.bases[b].vectors)?;
        let mut outcome = sample_index(&probs, &mut rng);
        let flip = rng.random::<f64>() < channel.flip_prob;
        if flip && outcome < 2 {
            outcome ^= 1;
        }

        let alice_bit = setup.bit_in(a, b);
        let kept = alice_bit.is_some() && outcome < 2;
        rounds.push(RoundRecord {
            alice_state_index: a,
            alice_basis_index: if alice_bit.is_some() { b } else { setup.home_basis(a) },
            bob_basis_index: b,
            bob_outcome: outcome,
            kept,
            alice_bit: kept.then(|| alice_bit.expect("kept")),
            bob_bit: kept.then_some(outcome as u8),
            eve_basis_index,
            eve_outcome,
        });
    }
    let summary = SessionSummary::from_rounds(&rounds);
    Ok(ProtocolTranscript {
        variant: config.variant,
        seed: config.seed,
        channel,
        rounds,
        summary,
    })
}

/// Alice's and Bob's bits for every kept round.
pub fn sift(transcript: &ProtocolTranscript) -> Vec<(u8, u8)> {
    transcript
        .rounds
        .iter()
        .filter(|r| r.kept)
        .map(|r| (r.alice_bit.expect("kept"), r.bob_bit.expect("kept")))
        .collect()
}

/// Exact per-round statistics obtained by enumerating every preparation,
/// basis choice, Eve action and outcome with its Born weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactStatistics {
    pub sift_rate: f64,
    /// Probability that a round is kept and its bits disagree.
    pub error_per_round: f64,
    /// `error_per_round / sift_rate`.
    pub qber: f64,
}

pub fn exact_statistics(variant: ProtocolVariant, channel: ChannelModel) -> Result<ExactStatistics> {
    let setup = ProtocolSetup::new(variant);
    let n_states = setup.states.len() as f64;
    let n_bases = setup.bases.len();
    let mut kept = 0.0;
    let mut wrong = 0.0;
    for (a, state) in setup.states.iter().enumerate() {
        // (weight, forwarded state) pairs after Eve
        let arrivals: Vec<(f64, StateVector)> = match channel.eve {
            None => vec![(1.0, state.clone())],
            Some(strategy) => {
                let eve_bases: Vec<(usize, f64)> = match strategy {
                    EveStrategy::Uniform => (0..n_bases).map(|e| (e, 1.0 / n_bases as f64)).collect(),
                    EveStrategy::Fixed(k) if k < n_bases => vec![(k, 1.0)],
                    EveStrategy::Fixed(k) => {
                        return Err(Error::InvalidParameter(format!("no basis with index {k}")))
                    }
                };
                let mut out = Vec::new();
                for (e, we) in eve_bases {
                    let vecs = &setup.bases[e].vectors;
                    let probs = born_probabilities(state, vecs)?;
                    for (v, p) in vecs.iter().zip(probs) {
                        if p > 0.0 {
                            out.push((we * p, v.clone()));
                        }
                    }
                }
                out
            }
        };
        for b in 0..n_bases {
            let Some(bit) = setup.bit_in(a, b) else {
                continue;
            };
            let w = 1.0 / (n_states * n_bases as f64);
            for (wa, arrived) in &arrivals {
                let p = born_probabilities(arrived, &setup.bases[b].vectors)?;
                let (p_same, p_other) = (p[bit as usize], p[1 - bit as usize]);
                let f = channel.flip_prob;
                let right = p_same * (1.0 - f) + p_other * f;
                let bad = p_other * (1.0 - f) + p_same * f;
                kept += w * wa * (right + bad);
                wrong += w * wa * bad;
            }
        }
    }
    Ok(ExactStatistics {
        sift_rate: kept,
        error_per_round: wrong,
        qber: if kept > 0.0 { wrong / kept } else { 0.0 },
    })
}

/// Source throughput over a number of trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Throughput {
    pub trials: u64,
    /// Binomial mean `n·p` of post-selected trials.
    pub expected_pairs: f64,
    /// Binomial standard deviation `√(n·p·(1−p))`.
    pub std_dev: f64,
    /// Simulated trials that emitted at least one pair.
    pub post_selected: u64,
    pub double_pairs: u64,
}

pub fn source_throughput<R: Rng + ?Sized>(
    source: &SourceModel,
    trials: u64,
    rng: &mut R,
) -> Result<Throughput> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1".into()));
    }
    let source = SourceModel::new(source.pair_prob, source.double_pair_prob)?;
    let p = source.pair_prob;
    let mut post_selected = 0;
    let mut double_pairs = 0;
    for _ in 0..trials {
        let u: f64 = rng.random();
        if u < source.double_pair_prob {
            double_pairs += 1;
            post_selected += 1;
        } else if u < p {
            post_selected += 1;
        }
    }
    let n = trials as f64;
    Ok(Throughput {
        trials,
        expected_pairs: n * p,
        std_dev: (n * p * (1.0 - p)).sqrt(),
        post_selected,
        double_pairs,
    })
}
