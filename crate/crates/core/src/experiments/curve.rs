use serde::{Deserialize, Serialize};

use super::config::ScenarioConfig;
use super::ExperimentError;
use crate::decoherence::{self, PointerModel};

/// One row of a decoherence-vs-N curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub overlap_magnitude: f64,
    pub offdiag_magnitude: f64,
    pub purity: f64,
    #[serde(with = "super::float_text")]
    pub log_overlap: f64,
}

/// Closed-form overlap, off-diagonal and purity for every `N` in the sweep,
/// in ascending `N`.
pub fn decoherence_curve(config: &ScenarioConfig) -> Result<Vec<CurvePoint>, ExperimentError> {
    config.validate()?;
    let sweep = config
        .n_sweep
        .ok_or_else(|| ExperimentError::InvalidConfig("curve needs an n-min..n-max sweep".into()))?;
    sweep
        .iter()
        .map(|n| {
            let model = PointerModel::symmetric(n, config.theta)?;
            let overlap = decoherence::pointer_overlap(&model);
            let rho = decoherence::reduced_system_density(config.c_plus, config.c_minus, &model)?;
            Ok(CurvePoint {
                n,
                overlap_magnitude: overlap.magnitude(),
                offdiag_magnitude: rho.get(0, 1).norm(),
                purity: rho.purity(),
                log_overlap: overlap.log_magnitude,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::config::NSweep;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn sweep(theta: f64, n_min: usize, n_max: usize) -> ScenarioConfig {
        ScenarioConfig {
            theta,
            n_sweep: Some(NSweep { n_min, n_max }),
            ..ScenarioConfig::default()
        }
    }

    #[test]
    fn geometric_overlaps() {
        let points = decoherence_curve(&sweep(FRAC_PI_3, 1, 3)).unwrap();
        let got: Vec<f64> = points.iter().map(|p| p.overlap_magnitude).collect();
        for (g, e) in got.iter().zip([0.5, 0.25, 0.125]) {
            assert!((g - e).abs() < 1e-15);
        }
        assert_eq!(points.iter().map(|p| p.n).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn zero_angle_is_flat() {
        for p in decoherence_curve(&sweep(0.0, 1, 30)).unwrap() {
            assert_eq!(p.overlap_magnitude, 1.0);
            assert!((p.purity - 1.0).abs() < 1e-15);
            assert_eq!(p.log_overlap, 0.0);
        }
    }

    #[test]
    fn orthogonal_angle_is_fully_mixed() {
        for p in decoherence_curve(&sweep(FRAC_PI_2, 1, 8)).unwrap() {
            assert_eq!(p.overlap_magnitude, 0.0);
            assert_eq!(p.offdiag_magnitude, 0.0);
            assert_eq!(p.purity, 0.5);
            assert_eq!(p.log_overlap, f64::NEG_INFINITY);
        }
    }

    #[test]
    fn missing_sweep_is_rejected() {
        let cfg = ScenarioConfig::default();
        assert!(matches!(decoherence_curve(&cfg), Err(ExperimentError::InvalidConfig(_))));
    }
}
