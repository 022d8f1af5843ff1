use nalgebra::DVector;

use super::{CompositeSpace, HilbertError};
use crate::tolerance;
use crate::C64;

/// Complex amplitudes over a [`CompositeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: CompositeSpace,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(space: CompositeSpace, amplitudes: Vec<C64>) -> Result<Self, HilbertError> {
        let expected = space.total_dim();
        if amplitudes.len() != expected {
            return Err(HilbertError::LengthMismatch { expected, got: amplitudes.len() });
        }
        Ok(Self { space, amplitudes: DVector::from_vec(amplitudes) })
    }

    pub(crate) fn from_parts(space: CompositeSpace, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(space.total_dim(), amplitudes.len());
        Self { space, amplitudes }
    }

    /// One-factor state with the given amplitudes.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, HilbertError> {
        Self::new(CompositeSpace::single(amplitudes.len())?, amplitudes)
    }

    /// Real-amplitude one-factor state.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self, HilbertError> {
        Self::from_amplitudes(amplitudes.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis vector `|flat>`.
    pub fn basis(space: CompositeSpace, flat: usize) -> Result<Self, HilbertError> {
        let dim = space.total_dim();
        if flat >= dim {
            return Err(HilbertError::FlatIndexOutOfRange { index: flat, dim });
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[flat] = C64::new(1.0, 0.0);
        Ok(Self { space, amplitudes })
    }

    pub fn space(&self) -> &CompositeSpace {
        &self.space
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tolerance::NORMALIZATION
    }

    pub(crate) fn require_normalized(&self) -> Result<(), HilbertError> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(HilbertError::NotNormalized { norm: self.norm() })
        }
    }

    pub fn normalize(&self) -> Result<Self, HilbertError> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(HilbertError::ZeroNorm);
        }
        Ok(Self { space: self.space.clone(), amplitudes: self.amplitudes.unscale(norm) })
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64, HilbertError> {
        self.check_space(other.space())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { space: self.space.clone(), amplitudes: self.amplitudes.map(|a| a * factor) }
    }

    /// Plain vector sum; the result is not renormalized.
    pub fn add(&self, other: &StateVector) -> Result<Self, HilbertError> {
        self.check_space(other.space())?;
        Ok(Self { space: self.space.clone(), amplitudes: &self.amplitudes + &other.amplitudes })
    }

    pub fn tensor(&self, other: &StateVector) -> Self {
        let space = self.space.concat(&other.space);
        let inner = other.dim();
        let amplitudes = DVector::from_fn(self.dim() * inner, |k, _| {
            self.amplitudes[k / inner] * other.amplitudes[k % inner]
        });
        Self { space, amplitudes }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64, HilbertError> {
        self.check_space(other.space())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_space(&self, other: &CompositeSpace) -> Result<(), HilbertError> {
        if self.space.factor_dims() != other.factor_dims() {
            return Err(HilbertError::SpaceMismatch {
                left: self.space.factor_dims().to_vec(),
                right: other.factor_dims().to_vec(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn tensor_dims_and_basis_product() {
        let zero = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let zz = zero.tensor(&zero);
        assert_eq!(zz.space().factor_dims(), &[2, 2]);
        assert_eq!(zz.dim(), 4);
        assert_eq!(zz.amplitudes().as_slice(), &[c(1.0), c(0.0), c(0.0), c(0.0)]);
    }

    #[test]
    fn tensor_of_plus_and_zero() {
        let plus = StateVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let zero = StateVector::from_real(&[1.0, 0.0]).unwrap();
        let out = plus.tensor(&zero);
        let expected = [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
    }

    #[test]
    fn tensor_norm_is_product_of_norms() {
        let a = StateVector::from_real(&[3.0, 4.0]).unwrap();
        let b = StateVector::from_amplitudes(vec![C64::new(0.0, 2.0), c(1.0), c(-2.0)]).unwrap();
        assert!((a.tensor(&b).norm() - a.norm() * b.norm()).abs() < 1e-12);
    }

    #[test]
    fn normalize_rejects_zero_vector() {
        let z = StateVector::from_real(&[0.0, 0.0]).unwrap();
        assert_eq!(z.normalize(), Err(HilbertError::ZeroNorm));
        let v = StateVector::from_real(&[3.0, 4.0]).unwrap().normalize().unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inner_is_conjugate_linear_in_bra() {
        let a = StateVector::from_amplitudes(vec![C64::new(0.0, 1.0), c(0.0)]).unwrap();
        let b = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(a.inner(&b).unwrap(), C64::new(0.0, -1.0));
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let space = CompositeSpace::qubits(2).unwrap();
        assert!(matches!(
            StateVector::new(space, vec![c(1.0)]),
            Err(HilbertError::LengthMismatch { expected: 4, got: 1 })
        ));
    }
}
