//! Branch-conditional pointer states and the premeasurement map.
//!
//! Each of `N` apparatus/environment particles ends up in `e⁺ᵢ` or `e⁻ᵢ`
//! depending on the system branch, so the two pointer states are product
//! states `M± = e±₁ ⊗ … ⊗ e±_N`. Their overlap is the product of the
//! one-particle overlaps and never needs the `2^N`-dimensional vector.
//!
//! In the symmetric model every particle uses
//! `e± = cos(θ/2)|0> ± sin(θ/2)|1>`, giving `<e⁻|e⁺> = cos θ` and a pointer
//! overlap `(cos θ)^N = exp(-N ln sec θ)`.
//!
//! The same engine serves the apparatus reading (`+`/`−`, `M±`) and the
//! macroscopic object in an environment (`x₁`/`x₂`, `E₁,₂`); only the labels
//! differ.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{CompositeSpace, DensityMatrix, HilbertError, Operator, StateVector};
use crate::tolerance;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecoherenceError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("pointer model needs at least one particle")]
    NoParticles,
    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),
    #[error("branch amplitudes must satisfy |c+|^2 + |c-|^2 = 1, got {norm_sqr}")]
    AmplitudesNotNormalized { norm_sqr: f64 },
    #[error("conditional state of particle {particle} has norm {norm}")]
    ConditionalNotNormalized { particle: usize, norm: f64 },
    #[error("conditional states of particle {particle} must share one factor of dimension >= 2")]
    ConditionalDimension { particle: usize },
    #[error(
        "{n_particles} particles give dense dimension {dim} above the cap of {cap}; \
         use the product-form/closed-form path"
    )]
    DenseCapExceeded { n_particles: usize, dim: usize, cap: usize },
    #[error("expected {expected} per-particle entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operator for particle {particle} is not unitary: max |U^dag U - I| = {deviation:e}")]
    NotUnitary { particle: usize, deviation: f64 },
    #[error("operator for particle {particle} has dimension {got}, particle has {expected}")]
    OperatorDimension { particle: usize, expected: usize, got: usize },
}

/// Product state `φ₁ ⊗ … ⊗ φ_N` kept factor by factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    factors: Vec<StateVector>,
}

impl ProductState {
    pub fn new(factors: Vec<StateVector>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[StateVector] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// `<self|other>` as the product of one-factor inner products.
    pub fn inner(&self, other: &ProductState) -> Result<C64, DecoherenceError> {
        Ok(self.factor_inners(other)?.into_iter().product())
    }

    /// `<selfᵢ|otherᵢ>` for every factor.
    pub fn factor_inners(&self, other: &ProductState) -> Result<Vec<C64>, DecoherenceError> {
        if self.len() != other.len() {
            return Err(DecoherenceError::LengthMismatch { expected: self.len(), got: other.len() });
        }
        self.factors
            .iter()
            .zip(&other.factors)
            .map(|(a, b)| a.inner(b).map_err(DecoherenceError::from))
            .collect()
    }

    pub fn dense_dim(&self) -> Option<usize> {
        self.factors.iter().try_fold(1usize, |acc, f| acc.checked_mul(f.dim()))
    }

    /// Expands to a dense vector. Only sensible for small `N`.
    pub fn to_dense(&self) -> Option<StateVector> {
        let mut iter = self.factors.iter();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, f| acc.tensor(f)))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum PointerKind {
    Symmetric { n_particles: usize, theta: f64 },
    General { conditional_states: Vec<(StateVector, StateVector)> },
}

/// `N` particles with branch-conditional one-particle states `(e⁺ᵢ, e⁻ᵢ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointerModel {
    kind: PointerKind,
}

impl PointerModel {
    /// Every particle rotated by `±θ/2` about the same axis.
    pub fn symmetric(n_particles: usize, theta: f64) -> Result<Self, DecoherenceError> {
        if n_particles == 0 {
            return Err(DecoherenceError::NoParticles);
        }
        if !theta.is_finite() {
            return Err(DecoherenceError::NonFiniteAngle(theta));
        }
        Ok(Self { kind: PointerKind::Symmetric { n_particles, theta } })
    }

    /// Arbitrary per-particle pairs `(e⁺ᵢ, e⁻ᵢ)`.
    pub fn general(conditional_states: Vec<(StateVector, StateVector)>) -> Result<Self, DecoherenceError> {
        if conditional_states.is_empty() {
            return Err(DecoherenceError::NoParticles);
        }
        for (particle, (plus, minus)) in conditional_states.iter().enumerate() {
            let dims = plus.space().factor_dims();
            if dims.len() != 1 || dims[0] < 2 || minus.space().factor_dims() != dims {
                return Err(DecoherenceError::ConditionalDimension { particle });
            }
            for s in [plus, minus] {
                let norm = s.norm();
                if (norm - 1.0).abs() > tolerance::STRUCTURAL {
                    return Err(DecoherenceError::ConditionalNotNormalized { particle, norm });
                }
            }
        }
        Ok(Self { kind: PointerKind::General { conditional_states } })
    }

    pub fn n_particles(&self) -> usize {
        match &self.kind {
            PointerKind::Symmetric { n_particles, .. } => *n_particles,
            PointerKind::General { conditional_states } => conditional_states.len(),
        }
    }

    pub fn symmetric_angle(&self) -> Option<f64> {
        match self.kind {
            PointerKind::Symmetric { theta, .. } => Some(theta),
            PointerKind::General { .. } => None,
        }
    }

    /// Dimension of each particle factor.
    pub fn particle_dims(&self) -> Vec<usize> {
        match &self.kind {
            PointerKind::Symmetric { n_particles, .. } => vec![2; *n_particles],
            PointerKind::General { conditional_states } => {
                conditional_states.iter().map(|(p, _)| p.dim()).collect()
            }
        }
    }

    /// `(e⁺ᵢ, e⁻ᵢ)` for particle `i`.
    pub fn conditional_pair(&self, particle: usize) -> Option<(StateVector, StateVector)> {
        match &self.kind {
            PointerKind::Symmetric { n_particles, theta } => {
                (particle < *n_particles).then(|| symmetric_pair(*theta))
            }
            PointerKind::General { conditional_states } => conditional_states.get(particle).cloned(),
        }
    }

    /// `<e⁻ᵢ|e⁺ᵢ>` for every particle.
    fn per_particle_overlaps(&self) -> Vec<C64> {
        match &self.kind {
            PointerKind::Symmetric { n_particles, theta } => {
                vec![C64::new(symmetric_overlap(*theta), 0.0); *n_particles]
            }
            PointerKind::General { conditional_states } => conditional_states
                .iter()
                .map(|(plus, minus)| minus.inner(plus).expect("pair shares a space"))
                .collect(),
        }
    }
}

/// `cos θ`, returning exactly zero when `|cos θ|` is below the rounding
/// error of `θ` itself (so `θ = π/2` in floating point means orthogonal).
pub fn symmetric_overlap(theta: f64) -> f64 {
    let cos = theta.cos();
    if cos.abs() <= f64::EPSILON * theta.abs().max(1.0) {
        0.0
    } else {
        cos
    }
}

fn symmetric_pair(theta: f64) -> (StateVector, StateVector) {
    let (s, c) = (theta / 2.0).sin_cos();
    let plus = StateVector::from_real(&[c, s]).expect("2-dim");
    let minus = StateVector::from_real(&[c, -s]).expect("2-dim");
    (plus, minus)
}

/// The two pointer states `(M₊, M₋)` as product forms.
pub fn pointer_states(model: &PointerModel) -> (ProductState, ProductState) {
    let (plus, minus): (Vec<_>, Vec<_>) = (0..model.n_particles())
        .map(|i| model.conditional_pair(i).expect("index in range"))
        .unzip();
    (ProductState::new(plus), ProductState::new(minus))
}

/// `<M₋|M₊>` with its per-particle factorization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapReport {
    pub overlap: C64,
    /// `ln|overlap|`; `-inf` when a factor vanishes.
    pub log_magnitude: f64,
    pub per_particle_factors: Vec<C64>,
}

impl OverlapReport {
    pub fn magnitude(&self) -> f64 {
        self.overlap.norm()
    }
}

/// Pointer overlap `<M₋|M₊> = Πᵢ <e⁻ᵢ|e⁺ᵢ>`.
///
/// For symmetric models the overlap is `(cos θ)^N` and the log magnitude is
/// `N ln|cos θ|`, both evaluated in closed form.
pub fn pointer_overlap(model: &PointerModel) -> OverlapReport {
    let per_particle_factors = model.per_particle_overlaps();
    let (overlap, log_magnitude) = match model.symmetric_angle() {
        Some(theta) => {
            let n = model.n_particles();
            let cos = symmetric_overlap(theta);
            let overlap = match i32::try_from(n) {
                Ok(k) => cos.powi(k),
                Err(_) => cos.signum().powf(n as f64 % 2.0) * cos.abs().powf(n as f64),
            };
            (C64::new(overlap, 0.0), n as f64 * cos.abs().ln())
        }
        None => {
            let overlap = per_particle_factors.iter().product();
            let log = per_particle_factors.iter().map(|f| f.norm().ln()).sum();
            (overlap, log)
        }
    };
    OverlapReport { overlap, log_magnitude, per_particle_factors }
}

/// Outcome label of a branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchLabel {
    Plus,
    Minus,
}

impl BranchLabel {
    /// Basis index of the system factor.
    pub fn index(self) -> usize {
        match self {
            BranchLabel::Plus => 0,
            BranchLabel::Minus => 1,
        }
    }
}

/// One term `c |label> ⊗ |environment>` of the post-measurement state.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchState {
    pub label: BranchLabel,
    pub amplitude: C64,
    pub environment: ProductState,
}

/// Validates `|c₊|² + |c₋|² = 1` within tolerance and returns the exact sum.
pub(crate) fn amplitude_norm_sqr(c_plus: C64, c_minus: C64) -> Result<f64, DecoherenceError> {
    let norm_sqr = c_plus.norm_sqr() + c_minus.norm_sqr();
    if (norm_sqr - 1.0).abs() > tolerance::NORMALIZATION || !norm_sqr.is_finite() {
        return Err(DecoherenceError::AmplitudesNotNormalized { norm_sqr });
    }
    Ok(norm_sqr)
}

/// The two branches `c₊|+>⊗M₊` and `c₋|−>⊗M₋`.
///
/// Amplitudes accepted within the normalization tolerance are rescaled to
/// unit norm.
pub fn branches(
    c_plus: C64,
    c_minus: C64,
    model: &PointerModel,
) -> Result<[BranchState; 2], DecoherenceError> {
    let scale = amplitude_norm_sqr(c_plus, c_minus)?.sqrt().recip();
    let (c_plus, c_minus) = (c_plus * scale, c_minus * scale);
    let (m_plus, m_minus) = pointer_states(model);
    Ok([
        BranchState { label: BranchLabel::Plus, amplitude: c_plus, environment: m_plus },
        BranchState { label: BranchLabel::Minus, amplitude: c_minus, environment: m_minus },
    ])
}

/// Dense `c₊|+>⊗|M₊> + c₋|−>⊗|M₋>` with the system as factor 0.
pub fn premeasure(c_plus: C64, c_minus: C64, model: &PointerModel) -> Result<StateVector, DecoherenceError> {
    amplitude_norm_sqr(c_plus, c_minus)?;
    let n_particles = model.n_particles();
    let dim = model
        .particle_dims()
        .iter()
        .try_fold(2usize, |acc, &d| acc.checked_mul(d))
        .unwrap_or(usize::MAX);
    if dim > tolerance::MAX_DENSE_DIM {
        return Err(DecoherenceError::DenseCapExceeded {
            n_particles,
            dim,
            cap: tolerance::MAX_DENSE_DIM,
        });
    }
    let system = CompositeSpace::single(2)?.with_labels([Some("system")])?;
    let mut total = None;
    for branch in branches(c_plus, c_minus, model)? {
        let ket = StateVector::basis(system.clone(), branch.label.index())?;
        let env = branch.environment.to_dense().expect("n_particles >= 1");
        let term = ket.tensor(&env).scale(branch.amplitude);
        total = Some(match total {
            None => term,
            Some(acc) => term.add(&acc)?,
        });
    }
    Ok(total.expect("two branches"))
}

/// Reduced system matrix from the closed-form overlap `r = <M₋|M₊>`:
///
/// ```text
/// [ |c₊|²        c₊ c₋* r ]
/// [ c₋ c₊* r*    |c₋|²    ]
/// ```
///
/// valid for any `N`. Entries are divided by `|c₊|² + |c₋|²` so the trace is
/// one to roundoff.
pub fn reduced_system_density(
    c_plus: C64,
    c_minus: C64,
    model: &PointerModel,
) -> Result<DensityMatrix, DecoherenceError> {
    let r = pointer_overlap(model).overlap;
    reduced_from_overlap(c_plus, c_minus, r)
}

pub(crate) fn reduced_from_overlap(c_plus: C64, c_minus: C64, r: C64) -> Result<DensityMatrix, DecoherenceError> {
    let norm_sqr = amplitude_norm_sqr(c_plus, c_minus)?;
    let off = c_plus * c_minus.conj() * r / norm_sqr;
    let entries = DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(c_plus.norm_sqr() / norm_sqr, 0.0),
            off,
            off.conj(),
            C64::new(c_minus.norm_sqr() / norm_sqr, 0.0),
        ],
    );
    let space = CompositeSpace::single(2).expect("2-dim");
    Ok(DensityMatrix::from_trusted(space, entries))
}

/// Same reduced matrix by brute force: dense premeasurement, outer product,
/// partial trace over all particles.
pub fn dense_reduced_system_density(
    c_plus: C64,
    c_minus: C64,
    model: &PointerModel,
) -> Result<DensityMatrix, DecoherenceError> {
    let psi = premeasure(c_plus, c_minus, model)?;
    let rho = DensityMatrix::from_pure(&psi)?;
    Ok(rho.partial_trace(&[0])?)
}

/// Applies `unitaries[i]` to particle `i` of both branches.
pub fn apply_common_unitary(
    branches: (&ProductState, &ProductState),
    unitaries: &[Operator],
) -> Result<(ProductState, ProductState), DecoherenceError> {
    let (first, second) = branches;
    for state in [first, second] {
        if state.len() != unitaries.len() {
            return Err(DecoherenceError::LengthMismatch { expected: state.len(), got: unitaries.len() });
        }
    }
    for (particle, u) in unitaries.iter().enumerate() {
        let deviation = u.unitarity_deviation();
        if deviation > tolerance::STRUCTURAL {
            return Err(DecoherenceError::NotUnitary { particle, deviation });
        }
        for state in [first, second] {
            let expected = state.factors[particle].dim();
            if u.dim() != expected {
                return Err(DecoherenceError::OperatorDimension { particle, expected, got: u.dim() });
            }
        }
    }
    let evolve = |state: &ProductState| -> Result<ProductState, DecoherenceError> {
        state
            .factors
            .iter()
            .zip(unitaries)
            .map(|(f, u)| {
                // one-factor operator spaces may differ only in labels
                let op = Operator::new(f.space().clone(), u.entries().clone())?;
                Ok(op.apply(f)?)
            })
            .collect::<Result<Vec<_>, DecoherenceError>>()
            .map(ProductState::new)
    };
    Ok((evolve(first)?, evolve(second)?))
}
