//! Dense complex linear algebra over small composite Hilbert spaces.
//!
//! Every value here is immutable after construction and every operation is
//! a pure function of its inputs.

mod density;
mod operator;
mod space;
mod state;

use thiserror::Error;

pub use density::DensityMatrix;
pub use operator::Operator;
pub use space::CompositeSpace;
pub use state::StateVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("composite space needs at least one factor")]
    EmptySpace,
    #[error("factor {0} has dimension 0")]
    ZeroDimension(usize),
    #[error("total dimension overflows usize")]
    DimensionOverflow,
    #[error("expected {expected} factor labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("multi-index has {got} entries, space has {expected} factors")]
    IndexArity { expected: usize, got: usize },
    #[error("basis index {index} out of range for factor {factor} of dimension {dim}")]
    BasisIndexOutOfRange { factor: usize, index: usize, dim: usize },
    #[error("flat index {index} out of range for total dimension {dim}")]
    FlatIndexOutOfRange { index: usize, dim: usize },
    #[error("expected {expected} amplitudes/rows, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("spaces do not match: {left:?} vs {right:?}")]
    SpaceMismatch { left: Vec<usize>, right: Vec<usize> },
    #[error("cannot normalize a zero vector")]
    ZeroNorm,
    #[error("state is not normalized: |psi| = {norm}")]
    NotNormalized { norm: f64 },
    #[error("matrix is not Hermitian: max |A - A^dag| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },
    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },
    #[error("density matrix has negative eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("partial trace needs at least one kept factor")]
    EmptyKeep,
    #[error("factor index {index} out of range for {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },
    #[error("expectation value has imaginary part {imag:e}")]
    ComplexExpectation { imag: f64 },
    #[error("total dimension {dim} exceeds the dense cap of {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },
}

/// `a ⊗ b`; the output space lists `a`'s factors first.
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

/// `|psi><psi|` for a normalized state.
pub fn outer_product(psi: &StateVector) -> Result<DensityMatrix, HilbertError> {
    DensityMatrix::from_pure(psi)
}

/// Reduced density matrix over the factors in `keep`, tracing out the rest.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix, HilbertError> {
    rho.partial_trace(keep)
}

/// `tr rho^2`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// `tr(O rho)` for a Hermitian observable.
pub fn expectation(obs: &Operator, rho: &DensityMatrix) -> Result<f64, HilbertError> {
    rho.expectation(obs)
}

/// `exp(-i h t) psi` via the spectral decomposition of `h` (hbar = 1).
pub fn evolve(h: &Operator, t: f64, psi: &StateVector) -> Result<StateVector, HilbertError> {
    h.propagator(t)?.apply(psi)
}
