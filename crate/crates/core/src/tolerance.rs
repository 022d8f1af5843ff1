//! Global numerical tolerances.

/// Structural checks: Hermiticity, unit trace, state norm.
pub const STRUCTURAL: f64 = 1e-10;

/// Spectral checks: positivity of eigenvalues, pure/mixed classification.
pub const SPECTRAL: f64 = 1e-8;

/// Accepted deviation of a caller-supplied norm (state vectors, amplitude
/// pairs) from one before the input is rejected.
pub const NORMALIZATION: f64 = 1e-8;

/// Largest total dimension handled by the dense path (12 qubits).
pub const MAX_DENSE_DIM: usize = 4096;
