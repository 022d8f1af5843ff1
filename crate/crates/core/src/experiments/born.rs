//! Outcome sampling with probabilities `|c±|²`.
//!
//! The Born weights are applied as a postulate here; nothing in this module
//! derives them from the unitary dynamics.
//!
//! Trial `i` of a run with seed `s` reads one `u64` at word offset `2i` of
//! the ChaCha20 stream keyed by `ChaCha20Rng::seed_from_u64(s)`, maps it to
//! `u ∈ [0, 1)` with 53 random bits, and records `+` when `u < |c₊|²`. The
//! draw for a trial depends only on `(s, i)`, so any partition of the trials
//! into chunks gives the same counts.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::ExperimentError;

/// Note attached to every sampling report.
pub const BORN_NOTE: &str =
    "outcome probabilities |c+|^2, |c-|^2 are imposed as a postulate; they are not derived from unitary evolution";

const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub trials: u64,
    pub count_plus: u64,
    pub frequency_plus: f64,
    pub expected: f64,
    /// `(frequency - expected) / sqrt(expected (1 - expected) / trials)`;
    /// absent when the outcome is certain.
    pub z_score: Option<f64>,
    pub note: String,
}

/// Uniform `[0, 1)` draw for trial `index` of stream `seed`.
pub fn trial_uniform(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * index as u128);
    to_unit(rng.next_u64())
}

fn to_unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Number of `+` outcomes among trials `start..end`.
fn count_range(seed: u64, p_plus: f64, start: u64, end: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_word_pos(2 * start as u128);
    (start..end).filter(|_| to_unit(rng.next_u64()) < p_plus).count() as u64
}

pub fn born_sample(config: &ScenarioConfig) -> Result<SampleStats, ExperimentError> {
    config.validate()?;
    let norm_sqr = config.c_plus.norm_sqr() + config.c_minus.norm_sqr();
    let expected = config.c_plus.norm_sqr() / norm_sqr;
    let trials = config.trials;

    let count_plus: u64 = (0..trials.div_ceil(CHUNK))
        .map(|chunk| {
            let start = chunk * CHUNK;
            count_range(config.seed, expected, start, (start + CHUNK).min(trials))
        })
        .sum();

    let frequency_plus = count_plus as f64 / trials as f64;
    let z_score = (expected > 0.0 && expected < 1.0)
        .then(|| (frequency_plus - expected) / (expected * (1.0 - expected) / trials as f64).sqrt());
    Ok(SampleStats {
        trials,
        count_plus,
        frequency_plus,
        expected,
        z_score,
        note: BORN_NOTE.to_string(),
    })
}
