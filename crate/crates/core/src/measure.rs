//! Born-rule probabilities and sampling, plus seeded random streams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{inner, StateVector, ACCUM_TOL};

/// Random stream used by every sampling routine.
pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed for item `index` of a batch run under `master`.
///
/// SplitMix64 finalizer applied to `master + (index + 1)·γ`, so streams of
/// different items are decorrelated and independent of evaluation order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `|⟨bᵢ|s⟩|²` for every vector of an orthonormal basis.
///
/// Fails when the probabilities do not sum to one, i.e. when `basis` is not
/// complete for `s`.
pub fn born_probabilities(state: &StateVector, basis: &[StateVector]) -> Result<Vec<f64>> {
    let probs = basis
        .iter()
        .map(|b| inner(b, state).map(|z| z.norm_sqr()))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > ACCUM_TOL {
        return Err(Error::NotNormalized { norm_sqr: total });
    }
    Ok(probs)
}

/// Draws an index from a discrete distribution.
///
/// Outcomes with probability exactly zero are never returned, even when
/// rounding leaves the cumulative sum slightly below one.
pub fn sample_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = i;
        if u < acc {
            return i;
        }
    }
    last
}
