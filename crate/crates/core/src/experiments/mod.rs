//! Scenario runners built on [`crate::decoherence`].
//!
//! Each runner is exposed as a free function and as an [`Experiment`] in the
//! [`ExperimentRegistry`], which is how the CLI selects them by name.

mod born;
mod config;
mod curve;
pub(crate) mod float_text;
mod registry;
mod scenario;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decoherence::DecoherenceError;
use crate::hilbert::HilbertError;

pub use born::{born_sample, trial_uniform, SampleStats, BORN_NOTE};
pub use config::{NSweep, Scenario, ScenarioConfig};
pub use curve::{decoherence_curve, CurvePoint};
pub use registry::{
    BornSampling, DecoherenceCurve, Experiment, ExperimentRegistry, MacroscopicSuperposition,
    QubitMeasurement,
};
pub use scenario::{
    run_macroscopic_superposition, run_qubit_measurement, ScenarioReport, DECOHERED_OVERLAP,
    DENSE_CHECK_MAX_N,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("experiment `{0}` is already registered")]
    DuplicateExperiment(String),
    #[error(transparent)]
    Decoherence(#[from] DecoherenceError),
}

impl From<HilbertError> for ExperimentError {
    fn from(err: HilbertError) -> Self {
        ExperimentError::Decoherence(err.into())
    }
}

/// Output of one experiment run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    Scenario(ScenarioReport),
    Curve(Vec<CurvePoint>),
    Sample(SampleStats),
}
