use serde::{Deserialize, Serialize};

use super::config::{Scenario, ScenarioConfig};
use super::ExperimentError;
use crate::decoherence::{self, OverlapReport};
use crate::tolerance;
use crate::C64;

/// Largest particle count for which the dense cross-check is run.
pub const DENSE_CHECK_MAX_N: usize = 11;

/// Overlap magnitude below which the reduced matrix is reported as the
/// diagonal mixture of the two outcomes.
pub const DECOHERED_OVERLAP: f64 = 1e-6;

/// Result of a single qubit-measurement or macroscopic-superposition run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: Scenario,
    pub branch_labels: [String; 2],
    pub environment_label: String,
    pub n_particles: usize,
    pub theta: f64,
    /// Row-major reduced 2×2 matrix over the branch labels.
    pub reduced_density: [[C64; 2]; 2],
    pub purity: f64,
    /// `<M₋|M₊>` (or `<E₂|E₁>`).
    pub overlap: C64,
    pub overlap_magnitude: f64,
    #[serde(with = "super::float_text")]
    pub log_overlap: f64,
    pub offdiag_magnitude: f64,
    /// Max entrywise gap between the closed form and the dense partial trace,
    /// present when `n_particles <= 11`.
    pub dense_deviation: Option<f64>,
    /// Overlap magnitude is below `1e-6` and the reduced matrix has been
    /// checked against the diagonal mixture.
    pub decohered: bool,
}

/// Spin measured by an `N`-particle apparatus.
pub fn run_qubit_measurement(config: &ScenarioConfig) -> Result<ScenarioReport, ExperimentError> {
    run(Scenario::QubitMeasurement, config)
}

/// Object in a two-location superposition scattering an `N`-particle environment.
pub fn run_macroscopic_superposition(config: &ScenarioConfig) -> Result<ScenarioReport, ExperimentError> {
    run(Scenario::MacroscopicSuperposition, config)
}

fn run(scenario: Scenario, config: &ScenarioConfig) -> Result<ScenarioReport, ExperimentError> {
    config.validate()?;
    let model = config.pointer_model()?;
    let (c_plus, c_minus) = (config.c_plus, config.c_minus);

    let overlap: OverlapReport = decoherence::pointer_overlap(&model);
    let rho = decoherence::reduced_system_density(c_plus, c_minus, &model)?;

    let dense_deviation = if config.n_particles <= DENSE_CHECK_MAX_N {
        let dense = decoherence::dense_reduced_system_density(c_plus, c_minus, &model)?;
        let deviation = rho.max_abs_diff(&dense)?;
        if deviation > tolerance::STRUCTURAL {
            return Err(ExperimentError::InvariantViolation(format!(
                "closed-form and dense reduced matrices differ by {deviation:e}"
            )));
        }
        Some(deviation)
    } else {
        None
    };

    let overlap_magnitude = overlap.magnitude();
    let decohered = overlap_magnitude < DECOHERED_OVERLAP;
    if decohered {
        let gap = rho.get(0, 1).norm().max(rho.get(1, 0).norm());
        if gap > DECOHERED_OVERLAP {
            return Err(ExperimentError::InvariantViolation(format!(
                "overlap {overlap_magnitude:e} is negligible but off-diagonal is {gap:e}"
            )));
        }
    }

    let labels = scenario.branch_labels();
    Ok(ScenarioReport {
        scenario,
        branch_labels: labels.map(String::from),
        environment_label: scenario.environment_label().to_string(),
        n_particles: config.n_particles,
        theta: config.theta,
        reduced_density: [[rho.get(0, 0), rho.get(0, 1)], [rho.get(1, 0), rho.get(1, 1)]],
        purity: rho.purity(),
        overlap: overlap.overlap,
        overlap_magnitude,
        log_overlap: overlap.log_magnitude,
        offdiag_magnitude: rho.get(0, 1).norm(),
        dense_deviation,
        decohered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn cfg(n: usize, theta: f64) -> ScenarioConfig {
        ScenarioConfig { n_particles: n, theta, ..ScenarioConfig::default() }
    }

    #[test]
    fn orthogonal_pointers_give_half_mixture() {
        let r = run_qubit_measurement(&cfg(3, FRAC_PI_2)).unwrap();
        assert!((r.reduced_density[0][0].re - 0.5).abs() < 1e-10);
        assert!((r.reduced_density[1][1].re - 0.5).abs() < 1e-10);
        assert!(r.reduced_density[0][1].norm() < 1e-10);
        assert!((r.purity - 0.5).abs() < 1e-10);
        assert!(r.decohered);
        assert!(r.dense_deviation.unwrap() < 1e-10);
    }

    #[test]
    fn single_branch_stays_pure() {
        let config = ScenarioConfig {
            c_plus: C64::new(1.0, 0.0),
            c_minus: C64::new(0.0, 0.0),
            ..cfg(6, 1.2)
        };
        let r = run_qubit_measurement(&config).unwrap();
        assert_eq!(r.reduced_density[0][0], C64::new(1.0, 0.0));
        assert_eq!(r.reduced_density[1][1], C64::new(0.0, 0.0));
        assert!((r.purity - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_decoherence_values() {
        let r = run_qubit_measurement(&cfg(2, FRAC_PI_3)).unwrap();
        assert!((r.offdiag_magnitude - 0.125).abs() < 1e-12);
        assert!((r.purity - 0.53125).abs() < 1e-12);
        assert!(!r.decohered);
    }

    #[test]
    fn macro_labels_and_limits() {
        let r = run_macroscopic_superposition(&cfg(5, FRAC_PI_2)).unwrap();
        assert_eq!(r.branch_labels, ["x1".to_string(), "x2".to_string()]);
        assert_eq!(r.environment_label, "E");
        assert!((r.purity - 0.5).abs() < 1e-10);

        let r = run_macroscopic_superposition(&cfg(5, 0.0)).unwrap();
        assert!((r.purity - 1.0).abs() < 1e-12);

        let r = run_macroscopic_superposition(&cfg(10, FRAC_PI_3)).unwrap();
        assert!((r.overlap_magnitude - 2f64.powi(-10)).abs() < 1e-15);
        assert!(r.dense_deviation.is_some());
    }

    #[test]
    fn large_n_skips_dense_check() {
        let r = run_qubit_measurement(&cfg(400, 0.3)).unwrap();
        assert!(r.dense_deviation.is_none());
        assert!((r.log_overlap - 400.0 * 0.3f64.cos().ln()).abs() < 1e-12);
    }
}
