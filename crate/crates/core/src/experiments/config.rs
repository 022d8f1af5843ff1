use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use super::ExperimentError;
use crate::decoherence::PointerModel;
use crate::tolerance;
use crate::C64;

/// Which physical reading the two branches carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// Spin `±` recorded by an apparatus in pointer states `M±`.
    QubitMeasurement,
    /// Object at `x₁`/`x₂` scattering an environment into `E₁`/`E₂`.
    MacroscopicSuperposition,
}

impl Scenario {
    pub fn branch_labels(self) -> [&'static str; 2] {
        match self {
            Scenario::QubitMeasurement => ["+", "-"],
            Scenario::MacroscopicSuperposition => ["x1", "x2"],
        }
    }

    pub fn environment_label(self) -> &'static str {
        match self {
            Scenario::QubitMeasurement => "M",
            Scenario::MacroscopicSuperposition => "E",
        }
    }
}

/// Inclusive range of particle counts for a decay curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NSweep {
    pub n_min: usize,
    pub n_max: usize,
}

impl NSweep {
    pub fn iter(self) -> impl Iterator<Item = usize> {
        self.n_min..=self.n_max
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub n_particles: usize,
    /// Branch-conditional rotation angle in radians, within `[0, π]`.
    pub theta: f64,
    pub c_plus: C64,
    pub c_minus: C64,
    pub n_sweep: Option<NSweep>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::QubitMeasurement,
            n_particles: 3,
            theta: FRAC_PI_2,
            c_plus: C64::new(FRAC_1_SQRT_2, 0.0),
            c_minus: C64::new(FRAC_1_SQRT_2, 0.0),
            n_sweep: None,
            trials: 10_000,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        let norm_sqr = self.c_plus.norm_sqr() + self.c_minus.norm_sqr();
        if !norm_sqr.is_finite() || (norm_sqr - 1.0).abs() > tolerance::NORMALIZATION {
            return Err(ExperimentError::InvalidConfig(format!(
                "amplitudes must satisfy |c+|^2 + |c-|^2 = 1 within {:e}, got {norm_sqr}",
                tolerance::NORMALIZATION
            )));
        }
        if !(0.0..=PI).contains(&self.theta) {
            return Err(ExperimentError::InvalidConfig(format!(
                "theta must lie in [0, pi] radians, got {}",
                self.theta
            )));
        }
        if self.n_particles == 0 {
            return Err(ExperimentError::InvalidConfig("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(ExperimentError::InvalidConfig("trials must be at least 1".into()));
        }
        if let Some(sweep) = self.n_sweep {
            if sweep.n_min == 0 || sweep.n_min > sweep.n_max {
                return Err(ExperimentError::InvalidConfig(format!(
                    "sweep needs 1 <= n-min <= n-max, got {}..{}",
                    sweep.n_min, sweep.n_max
                )));
            }
        }
        Ok(())
    }

    pub fn pointer_model(&self) -> Result<PointerModel, ExperimentError> {
        Ok(PointerModel::symmetric(self.n_particles, self.theta)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ScenarioConfig::default().validate().unwrap();
    }

    #[test]
    fn rejects_out_of_range_inputs() {
        let bad = |f: fn(&mut ScenarioConfig)| {
            let mut cfg = ScenarioConfig::default();
            f(&mut cfg);
            cfg.validate().unwrap_err().to_string()
        };
        assert!(bad(|c| c.c_plus = C64::new(1.0, 0.0)).contains("|c+|^2 + |c-|^2 = 1"));
        assert!(bad(|c| c.theta = -0.1).contains("theta"));
        assert!(bad(|c| c.theta = 3.5).contains("theta"));
        assert!(bad(|c| c.n_particles = 0).contains("n must"));
        assert!(bad(|c| c.trials = 0).contains("trials"));
        assert!(bad(|c| c.n_sweep = Some(NSweep { n_min: 4, n_max: 2 })).contains("sweep"));
    }

    #[test]
    fn labels_per_scenario() {
        assert_eq!(Scenario::QubitMeasurement.branch_labels(), ["+", "-"]);
        assert_eq!(Scenario::MacroscopicSuperposition.environment_label(), "E");
    }
}
