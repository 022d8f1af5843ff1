use nalgebra::{DMatrix, SymmetricEigen};

use super::{CompositeSpace, HilbertError, StateVector};
use crate::tolerance;
use crate::C64;

/// Square complex matrix acting on a [`CompositeSpace`].
///
/// Hamiltonians are in units with hbar = 1, so `t` in [`Operator::propagator`]
/// carries inverse-energy units.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: CompositeSpace,
    entries: DMatrix<C64>,
}

impl Operator {
    pub fn new(space: CompositeSpace, entries: DMatrix<C64>) -> Result<Self, HilbertError> {
        let dim = space.total_dim();
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(HilbertError::LengthMismatch {
                expected: dim,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(Self { space, entries })
    }

    /// Row-major one-factor operator.
    pub fn from_rows(dim: usize, rows: &[C64]) -> Result<Self, HilbertError> {
        if rows.len() != dim * dim {
            return Err(HilbertError::LengthMismatch { expected: dim * dim, got: rows.len() });
        }
        Self::new(CompositeSpace::single(dim)?, DMatrix::from_row_slice(dim, dim, rows))
    }

    pub fn identity(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        Self { space, entries: DMatrix::identity(dim, dim) }
    }

    pub fn zero(space: CompositeSpace) -> Self {
        let dim = space.total_dim();
        Self { space, entries: DMatrix::zeros(dim, dim) }
    }

    pub fn pauli_x() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::from_rows(2, &[o, l, l, o]).expect("2x2")
    }

    pub fn pauli_y() -> Self {
        let o = C64::new(0.0, 0.0);
        Self::from_rows(2, &[o, C64::new(0.0, -1.0), C64::new(0.0, 1.0), o]).expect("2x2")
    }

    pub fn pauli_z() -> Self {
        let (o, l) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0));
        Self::from_rows(2, &[l, o, o, -l]).expect("2x2")
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { space: self.space.clone(), entries: self.entries.adjoint() }
    }

    /// `self ⊗ other` on the concatenated space.
    pub fn kron(&self, other: &Operator) -> Self {
        Self { space: self.space.concat(&other.space), entries: self.entries.kronecker(&other.entries) }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Operator) -> Result<Self, HilbertError> {
        self.check_space(&other.space)?;
        Ok(Self { space: self.space.clone(), entries: &self.entries * &other.entries })
    }

    /// `max |A - A^dag|` over entries.
    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= tolerance::STRUCTURAL
    }

    pub(crate) fn require_hermitian(&self) -> Result<(), HilbertError> {
        let deviation = self.hermitian_deviation();
        if deviation <= tolerance::STRUCTURAL {
            Ok(())
        } else {
            Err(HilbertError::NotHermitian { deviation })
        }
    }

    /// `max |U^dag U - I|` over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        let dim = self.dim();
        max_abs(&(self.entries.adjoint() * &self.entries - DMatrix::<C64>::identity(dim, dim)))
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_deviation() <= tolerance::STRUCTURAL
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector, HilbertError> {
        psi.check_space(&self.space)?;
        Ok(StateVector::from_parts(self.space.clone(), &self.entries * psi.amplitudes()))
    }

    /// `U(t) = exp(-i H t)` built from the eigendecomposition `H = V diag(λ) V^dag`.
    pub fn propagator(&self, t: f64) -> Result<Operator, HilbertError> {
        self.require_hermitian()?;
        let eigen = SymmetricEigen::new(self.hermitian_part());
        let phases = eigen.eigenvalues.map(|lambda| C64::new(0.0, -lambda * t).exp());
        let v = &eigen.eigenvectors;
        let mut scaled = v.clone();
        for (mut column, phase) in scaled.column_iter_mut().zip(phases.iter()) {
            column *= *phase;
        }
        Ok(Self { space: self.space.clone(), entries: scaled * v.adjoint() })
    }

    /// Eigenvalues of `(A + A^dag)/2` in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> =
            SymmetricEigen::new(self.hermitian_part()).eigenvalues.iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }

    fn hermitian_part(&self) -> DMatrix<C64> {
        (&self.entries + self.entries.adjoint()).map(|z| z * 0.5)
    }

    fn check_space(&self, other: &CompositeSpace) -> Result<(), HilbertError> {
        if self.space.factor_dims() != other.factor_dims() {
            return Err(HilbertError::SpaceMismatch {
                left: self.space.factor_dims().to_vec(),
                right: other.factor_dims().to_vec(),
            });
        }
        Ok(())
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
