use nalgebra::DMatrix;

use super::operator::max_abs;
use super::{CompositeSpace, HilbertError, Operator, StateVector};
use crate::tolerance;
use crate::C64;

/// Hermitian, unit-trace, positive-semidefinite matrix over a composite space.
///
/// [`DensityMatrix::from_entries`] checks all three properties. States built
/// by [`DensityMatrix::from_pure`], [`DensityMatrix::mixture`] and
/// [`DensityMatrix::partial_trace`] are positive by construction and skip the
/// eigenvalue check, which would dominate the cost at the dense cap.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: CompositeSpace,
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn from_entries(space: CompositeSpace, entries: DMatrix<C64>) -> Result<Self, HilbertError> {
        let dim = space.total_dim();
        check_dense_cap(dim)?;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(HilbertError::LengthMismatch {
                expected: dim,
                got: entries.nrows().max(entries.ncols()),
            });
        }
        let rho = Self { space, entries };
        let deviation = rho.hermitian_deviation();
        if deviation > tolerance::STRUCTURAL {
            return Err(HilbertError::NotHermitian { deviation });
        }
        let trace = rho.trace();
        if (trace - 1.0).abs() > tolerance::STRUCTURAL {
            return Err(HilbertError::BadTrace { trace });
        }
        let min_eigenvalue = rho.min_eigenvalue();
        if min_eigenvalue < -tolerance::SPECTRAL {
            return Err(HilbertError::NotPositive { min_eigenvalue });
        }
        Ok(rho)
    }

    /// `|psi><psi|`.
    pub fn from_pure(psi: &StateVector) -> Result<Self, HilbertError> {
        psi.require_normalized()?;
        check_dense_cap(psi.dim())?;
        let a = psi.amplitudes();
        Ok(Self { space: psi.space().clone(), entries: a * a.adjoint() })
    }

    /// `Σ p_k |psi_k><psi_k|` for a probability vector `p`.
    pub fn mixture(components: &[(f64, &StateVector)]) -> Result<Self, HilbertError> {
        let (_, first) = components.first().ok_or(HilbertError::EmptySpace)?;
        let space = first.space().clone();
        let dim = space.total_dim();
        check_dense_cap(dim)?;
        let mut entries = DMatrix::<C64>::zeros(dim, dim);
        let mut total = 0.0;
        for &(p, psi) in components {
            psi.check_space(&space)?;
            psi.require_normalized()?;
            if p < 0.0 {
                return Err(HilbertError::NotPositive { min_eigenvalue: p });
            }
            total += p;
            let a = psi.amplitudes();
            entries += (a * a.adjoint()).map(|z| z * p);
        }
        if (total - 1.0).abs() > tolerance::STRUCTURAL {
            return Err(HilbertError::BadTrace { trace: total });
        }
        Ok(Self { space, entries })
    }

    /// Caller guarantees Hermiticity, unit trace and positivity.
    pub(crate) fn from_trusted(space: CompositeSpace, entries: DMatrix<C64>) -> Self {
        debug_assert_eq!(space.total_dim(), entries.nrows());
        Self { space, entries }
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

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|z| z.re).sum()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        max_abs(&(&self.entries - self.entries.adjoint()))
    }

    /// `tr rho^2`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= tolerance::SPECTRAL
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let hermitian = Operator::new(self.space.clone(), self.entries.clone())
            .expect("density matrix is square over its space");
        hermitian.hermitian_eigenvalues().first().copied().unwrap_or(0.0)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64, HilbertError> {
        if self.space.factor_dims() != other.space.factor_dims() {
            return Err(HilbertError::SpaceMismatch {
                left: self.space.factor_dims().to_vec(),
                right: other.space.factor_dims().to_vec(),
            });
        }
        Ok(max_abs(&(&self.entries - &other.entries)))
    }

    /// `tr(O rho)`.
    pub fn expectation(&self, obs: &Operator) -> Result<f64, HilbertError> {
        if obs.space().factor_dims() != self.space.factor_dims() {
            return Err(HilbertError::SpaceMismatch {
                left: obs.space().factor_dims().to_vec(),
                right: self.space.factor_dims().to_vec(),
            });
        }
        obs.require_hermitian()?;
        let o = obs.entries();
        let value: C64 = o.iter().zip(self.entries.transpose().iter()).map(|(a, b)| a * b).sum();
        if value.im.abs() > tolerance::STRUCTURAL {
            return Err(HilbertError::ComplexExpectation { imag: value.im });
        }
        Ok(value.re)
    }

    /// Traces out every factor not listed in `keep`.
    ///
    /// Kept factors retain their original relative order, whatever order
    /// `keep` lists them in.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix, HilbertError> {
        let factors = self.space.num_factors();
        if keep.is_empty() {
            return Err(HilbertError::EmptyKeep);
        }
        if let Some(&index) = keep.iter().find(|&&i| i >= factors) {
            return Err(HilbertError::FactorOutOfRange { index, factors });
        }
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() == factors {
            return Ok(self.clone());
        }
        let traced: Vec<usize> = (0..factors).filter(|i| !kept.contains(i)).collect();

        let kept_space = self.space.select(&kept);
        let traced_space = self.space.select(&traced);
        let dk = kept_space.total_dim();

        // Full-space index of (kept k, traced r) is kept_offsets[k] + traced_offsets[r].
        let strides = self.space.strides();
        let kept_offsets = offsets(&kept_space, &kept, &strides);
        let traced_offsets = offsets(&traced_space, &traced, &strides);

        let entries = DMatrix::from_fn(dk, dk, |k1, k2| {
            traced_offsets
                .iter()
                .map(|&r| self.entries[(kept_offsets[k1] + r, kept_offsets[k2] + r)])
                .sum()
        });
        Ok(DensityMatrix { space: kept_space, entries })
    }
}

/// Full-space offset contributed by each basis index of a sub-space made of
/// `factors`.
fn offsets(sub: &CompositeSpace, factors: &[usize], strides: &[usize]) -> Vec<usize> {
    (0..sub.total_dim())
        .map(|flat| {
            let multi = sub.multi_index(flat).expect("flat < total_dim");
            multi.iter().zip(factors).map(|(&i, &f)| i * strides[f]).sum()
        })
        .collect()
}

fn check_dense_cap(dim: usize) -> Result<(), HilbertError> {
    if dim > tolerance::MAX_DENSE_DIM {
        Err(HilbertError::DenseCapExceeded { dim, cap: tolerance::MAX_DENSE_DIM })
    } else {
        Ok(())
    }
}
