//! Randomized invariant suite behind `decolab selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decoherence::{self, PointerModel};
use crate::experiments::{born_sample, ScenarioConfig};
use crate::hilbert::{self, CompositeSpace, DensityMatrix, Operator};
use crate::random::{random_amplitudes, random_hermitian, random_state, random_unitary};
use crate::{tolerance, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    /// Worst observed deviation or other summary figure.
    pub detail: String,
}

impl CheckOutcome {
    fn bound(name: &str, worst: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: worst <= limit,
            detail: format!("worst {worst:.3e} (limit {limit:.0e})"),
        }
    }
}

type Check = fn(&mut ChaCha8Rng) -> CheckOutcome;

const CHECKS: &[Check] = &[
    index_round_trip,
    partial_trace_structure,
    product_state_reduces_to_pure,
    entangled_reduction_is_mixed,
    evolution_unitarity,
    evolution_composition_and_linearity,
    closed_form_matches_dense,
    exponential_decay_slope,
    purity_interpolation,
    common_unitary_preserves_overlap,
    diagonal_is_model_independent,
    born_coverage,
];

/// Runs every invariant check with a fixed seed.
pub fn run_all(seed: u64) -> Vec<CheckOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    CHECKS.iter().map(|check| check(&mut rng)).collect()
}

fn index_round_trip(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut failures = 0usize;
    for _ in 0..20 {
        let dims: Vec<usize> = (0..rng.random_range(1..5)).map(|_| rng.random_range(1..5)).collect();
        let space = CompositeSpace::new(dims).expect("positive dims");
        for flat in 0..space.total_dim() {
            let multi = space.multi_index(flat).expect("in range");
            if space.flat_index(&multi) != Ok(flat) {
                failures += 1;
            }
        }
    }
    CheckOutcome::bound("index round trip", failures as f64, 0.0)
}

fn random_density(rng: &mut ChaCha8Rng, space: &CompositeSpace) -> DensityMatrix {
    let k = rng.random_range(1..4);
    let states: Vec<_> = (0..k).map(|_| random_state(rng, space.clone())).collect();
    let mut weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let parts: Vec<(f64, &_)> = weights.iter().copied().zip(states.iter()).collect();
    DensityMatrix::mixture(&parts).expect("valid mixture")
}

fn partial_trace_structure(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let dims: Vec<usize> = (0..rng.random_range(2..4)).map(|_| rng.random_range(2..4)).collect();
        let space = CompositeSpace::new(dims.clone()).expect("positive dims");
        let rho = random_density(rng, &space);
        let keep: Vec<usize> = (0..dims.len()).filter(|_| rng.random_bool(0.5)).collect();
        let keep = if keep.is_empty() { vec![0] } else { keep };
        let red = rho.partial_trace(&keep).expect("valid keep");
        worst = worst.max((red.trace() - 1.0).abs()).max(red.hermitian_deviation());
    }
    CheckOutcome::bound("partial trace keeps trace and Hermiticity", worst, tolerance::STRUCTURAL)
}

fn product_state_reduces_to_pure(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (da, db) = (rng.random_range(2..5), rng.random_range(2..5));
        let a = random_state(rng, CompositeSpace::single(da).unwrap());
        let b = random_state(rng, CompositeSpace::single(db).unwrap());
        let rho = hilbert::outer_product(&hilbert::tensor_product(&a, &b)).unwrap();
        let red = hilbert::partial_trace(&rho, &[0]).unwrap();
        let expected = hilbert::outer_product(&a).unwrap();
        worst = worst.max(red.max_abs_diff(&expected).unwrap());
    }
    CheckOutcome::bound("unentangled factor reduces to its projector", worst, tolerance::STRUCTURAL)
}

fn entangled_reduction_is_mixed(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut highest: f64 = 0.0;
    for _ in 0..30 {
        let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let (cp, cm) = (half, half);
        let n = rng.random_range(1..6);
        let theta = rng.random_range(0.05..std::f64::consts::PI - 0.05);
        let model = PointerModel::symmetric(n, theta).unwrap();
        let red = decoherence::dense_reduced_system_density(cp, cm, &model).unwrap();
        highest = highest.max(red.purity());
    }
    CheckOutcome {
        name: "entangled reduction has purity < 1".into(),
        passed: highest < 1.0 - tolerance::SPECTRAL,
        detail: format!("highest purity {highest:.6}"),
    }
}

fn evolution_unitarity(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let space = CompositeSpace::single(rng.random_range(2..17)).unwrap();
        let h = random_hermitian(rng, space.clone());
        let t = rng.random_range(-5.0..5.0);
        let u = h.propagator(t).unwrap();
        let psi = random_state(rng, space);
        let out = hilbert::evolve(&h, t, &psi).unwrap();
        worst = worst.max(u.unitarity_deviation()).max((out.norm() - 1.0).abs());
    }
    CheckOutcome::bound("propagators are unitary and norm preserving", worst, tolerance::STRUCTURAL)
}

fn evolution_composition_and_linearity(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let space = CompositeSpace::single(rng.random_range(2..9)).unwrap();
        let h = random_hermitian(rng, space.clone());
        let (t1, t2) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let psi = random_state(rng, space.clone());
        let stepped = hilbert::evolve(&h, t1, &hilbert::evolve(&h, t2, &psi).unwrap()).unwrap();
        let direct = hilbert::evolve(&h, t1 + t2, &psi).unwrap();
        worst = worst.max(stepped.max_abs_diff(&direct).unwrap());

        let phi = random_state(rng, space);
        let (alpha, beta) = (C64::new(0.3, -1.2), C64::new(-0.7, 0.4));
        let combo = psi.scale(alpha).add(&phi.scale(beta)).unwrap();
        let lhs = hilbert::evolve(&h, t1, &combo).unwrap();
        let rhs = hilbert::evolve(&h, t1, &psi)
            .unwrap()
            .scale(alpha)
            .add(&hilbert::evolve(&h, t1, &phi).unwrap().scale(beta))
            .unwrap();
        worst = worst.max(lhs.max_abs_diff(&rhs).unwrap());
    }
    CheckOutcome::bound("evolution composes and is linear", worst, 1e-9)
}

fn closed_form_matches_dense(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let n = rng.random_range(1..10);
        let theta = rng.random_range(1e-3..std::f64::consts::PI);
        let (cp, cm) = random_amplitudes(rng);
        let model = PointerModel::symmetric(n, theta).unwrap();
        let analytic = decoherence::reduced_system_density(cp, cm, &model).unwrap();
        let dense = decoherence::dense_reduced_system_density(cp, cm, &model).unwrap();
        worst = worst.max(analytic.max_abs_diff(&dense).unwrap());
    }
    CheckOutcome::bound("closed-form reduced matrix matches dense partial trace", worst, tolerance::STRUCTURAL)
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn exponential_decay_slope(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let theta = rng.random_range(0.01..std::f64::consts::FRAC_PI_2 - 0.01);
        let xs: Vec<f64> = (1..=20).map(f64::from).collect();
        let ys: Vec<f64> = (1..=20)
            .map(|n| decoherence::pointer_overlap(&PointerModel::symmetric(n, theta).unwrap()).log_magnitude)
            .collect();
        worst = worst.max((fit_slope(&xs, &ys) - theta.cos().ln()).abs());
    }
    CheckOutcome::bound("ln|overlap| slope equals ln cos(theta)", worst, 1e-9)
}

fn purity_interpolation(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..30 {
        let (cp, cm) = random_amplitudes(rng);
        let (p, q) = (cp.norm_sqr(), cm.norm_sqr());
        let n = rng.random_range(1..40);
        for theta in [0.0, std::f64::consts::FRAC_PI_2, rng.random_range(0.0..std::f64::consts::PI)] {
            let model = PointerModel::symmetric(n, theta).unwrap();
            let r = decoherence::pointer_overlap(&model).magnitude();
            let rho = decoherence::reduced_system_density(cp, cm, &model).unwrap();
            let closed = p * p + q * q + 2.0 * p * q * r * r;
            worst = worst.max((rho.purity() - closed).abs());
            if theta == 0.0 {
                worst = worst.max((rho.purity() - 1.0).abs());
            }
        }
    }
    CheckOutcome::bound("purity follows |c+|^4 + |c-|^4 + 2|c+|^2|c-|^2|r|^2", worst, tolerance::STRUCTURAL)
}

fn common_unitary_preserves_overlap(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(1..12);
        let theta = rng.random_range(0.0..std::f64::consts::PI);
        let (a, b) = decoherence::pointer_states(&PointerModel::symmetric(n, theta).unwrap());
        let us: Vec<Operator> = (0..n).map(|_| random_unitary(rng, CompositeSpace::single(2).unwrap())).collect();
        let (a2, b2) = decoherence::apply_common_unitary((&a, &b), &us).unwrap();
        let before = a.inner(&b).unwrap().norm();
        let after = a2.inner(&b2).unwrap().norm();
        worst = worst.max((before - after).abs());
    }
    CheckOutcome::bound("common unitaries leave |<E1|E2>| unchanged", worst, 1e-12)
}

fn diagonal_is_model_independent(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (cp, cm) = random_amplitudes(rng);
        let model = PointerModel::symmetric(rng.random_range(1..200), rng.random_range(0.0..3.0)).unwrap();
        let rho = decoherence::reduced_system_density(cp, cm, &model).unwrap();
        worst = worst
            .max((rho.get(0, 0).re - cp.norm_sqr()).abs())
            .max((rho.get(1, 1).re - cm.norm_sqr()).abs());
    }
    CheckOutcome::bound("diagonal is (|c+|^2, |c-|^2) for every model", worst, tolerance::STRUCTURAL)
}

fn born_coverage(rng: &mut ChaCha8Rng) -> CheckOutcome {
    let base: u64 = rng.random();
    let runs = 200;
    let outside = (0..runs)
        .filter(|i| {
            let cfg = ScenarioConfig { trials: 10_000, seed: base.wrapping_add(*i), ..ScenarioConfig::default() };
            born_sample(&cfg).unwrap().z_score.unwrap().abs() > 1.96
        })
        .count();
    let fraction = outside as f64 / runs as f64;
    CheckOutcome {
        name: "Born sampling |z| > 1.96 rate".into(),
        passed: (0.01..=0.11).contains(&fraction),
        detail: format!("{fraction:.3} of {runs} runs (accepted 0.01..0.11)"),
    }
}
