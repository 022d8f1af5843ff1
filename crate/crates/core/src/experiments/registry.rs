use std::collections::BTreeMap;

use super::born::born_sample;
use super::curve::decoherence_curve;
use super::scenario::{run_macroscopic_superposition, run_qubit_measurement};
use super::{ExperimentError, Payload, ScenarioConfig};

/// A runnable experiment selected by name at runtime.
pub trait Experiment: Send + Sync {
    /// Registry key; also the CLI subcommand.
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn run(&self, config: &ScenarioConfig) -> Result<Payload, ExperimentError>;
}

pub struct QubitMeasurement;

impl Experiment for QubitMeasurement {
    fn name(&self) -> &'static str {
        "qubit"
    }

    fn summary(&self) -> &'static str {
        "spin measured by an N-particle apparatus: reduced qubit matrix, purity, pointer overlap"
    }

    fn run(&self, config: &ScenarioConfig) -> Result<Payload, ExperimentError> {
        run_qubit_measurement(config).map(Payload::Scenario)
    }
}

pub struct MacroscopicSuperposition;

impl Experiment for MacroscopicSuperposition {
    fn name(&self) -> &'static str {
        "macro"
    }

    fn summary(&self) -> &'static str {
        "object at x1/x2 scattering an N-particle environment: reduced position matrix"
    }

    fn run(&self, config: &ScenarioConfig) -> Result<Payload, ExperimentError> {
        run_macroscopic_superposition(config).map(Payload::Scenario)
    }
}

pub struct DecoherenceCurve;

impl Experiment for DecoherenceCurve {
    fn name(&self) -> &'static str {
        "curve"
    }

    fn summary(&self) -> &'static str {
        "overlap, off-diagonal and purity over a sweep of N"
    }

    fn run(&self, config: &ScenarioConfig) -> Result<Payload, ExperimentError> {
        decoherence_curve(config).map(Payload::Curve)
    }
}

pub struct BornSampling;

impl Experiment for BornSampling {
    fn name(&self) -> &'static str {
        "sample"
    }

    fn summary(&self) -> &'static str {
        "seeded outcome sampling with probabilities |c+|^2, |c-|^2"
    }

    fn run(&self, config: &ScenarioConfig) -> Result<Payload, ExperimentError> {
        born_sample(config).map(Payload::Sample)
    }
}

/// Name-keyed set of experiments.
#[derive(Default)]
pub struct ExperimentRegistry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registry holding `qubit`, `macro`, `curve` and `sample`.
    pub fn builtin() -> Self {
        let mut registry = Self::new();
        for experiment in [
            Box::new(QubitMeasurement) as Box<dyn Experiment>,
            Box::new(MacroscopicSuperposition),
            Box::new(DecoherenceCurve),
            Box::new(BornSampling),
        ] {
            registry.register(experiment).expect("builtin names are distinct");
        }
        registry
    }

    pub fn register(&mut self, experiment: Box<dyn Experiment>) -> Result<(), ExperimentError> {
        let name = experiment.name();
        if self.entries.contains_key(name) {
            return Err(ExperimentError::DuplicateExperiment(name.to_string()));
        }
        self.entries.insert(name, experiment);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(Box::as_ref)
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }

    pub fn run(&self, name: &str, config: &ScenarioConfig) -> Result<Payload, ExperimentError> {
        self.get(name)
            .ok_or_else(|| ExperimentError::UnknownExperiment(name.to_string()))?
            .run(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_names() {
        let r = ExperimentRegistry::builtin();
        assert_eq!(r.names().collect::<Vec<_>>(), vec!["curve", "macro", "qubit", "sample"]);
    }

    #[test]
    fn duplicate_and_unknown() {
        let mut r = ExperimentRegistry::builtin();
        assert!(matches!(r.register(Box::new(BornSampling)), Err(ExperimentError::DuplicateExperiment(_))));
        assert!(matches!(
            r.run("collapse", &ScenarioConfig::default()),
            Err(ExperimentError::UnknownExperiment(_))
        ));
    }

    #[test]
    fn dispatch_returns_matching_payload() {
        let r = ExperimentRegistry::builtin();
        let cfg = ScenarioConfig::default();
        assert!(matches!(r.run("qubit", &cfg).unwrap(), Payload::Scenario(_)));
        assert!(matches!(r.run("sample", &cfg).unwrap(), Payload::Sample(_)));
    }
}
