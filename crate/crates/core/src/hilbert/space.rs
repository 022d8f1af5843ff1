use serde::{Deserialize, Serialize};

use super::HilbertError;

/// Ordered tensor factors of a composite Hilbert space.
///
/// Flattened basis indices put the leftmost factor in the most significant
/// position: `|i0>⊗|i1>⊗…` maps to `i0·d1·d2·… + i1·d2·… + …`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeSpace {
    factor_dims: Vec<usize>,
    labels: Vec<Option<String>>,
}

impl CompositeSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self, HilbertError> {
        if factor_dims.is_empty() {
            return Err(HilbertError::EmptySpace);
        }
        if let Some(i) = factor_dims.iter().position(|&d| d == 0) {
            return Err(HilbertError::ZeroDimension(i));
        }
        factor_dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(HilbertError::DimensionOverflow)?;
        let labels = vec![None; factor_dims.len()];
        Ok(Self { factor_dims, labels })
    }

    /// A single factor of dimension `dim`.
    pub fn single(dim: usize) -> Result<Self, HilbertError> {
        Self::new(vec![dim])
    }

    /// `n` qubit factors.
    pub fn qubits(n: usize) -> Result<Self, HilbertError> {
        Self::new(vec![2; n])
    }

    pub fn with_labels<I, S>(mut self, labels: I) -> Result<Self, HilbertError>
    where
        I: IntoIterator<Item = Option<S>>,
        S: Into<String>,
    {
        let labels: Vec<Option<String>> = labels.into_iter().map(|l| l.map(Into::into)).collect();
        if labels.len() != self.factor_dims.len() {
            return Err(HilbertError::LabelCount {
                expected: self.factor_dims.len(),
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn labels(&self) -> &[Option<String>] {
        &self.labels
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    /// Concatenation `self ⊗ other`.
    pub fn concat(&self, other: &CompositeSpace) -> CompositeSpace {
        let mut factor_dims = self.factor_dims.clone();
        factor_dims.extend_from_slice(&other.factor_dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        CompositeSpace { factor_dims, labels }
    }

    /// Sub-space made of the listed factors, in the order given.
    pub(crate) fn select(&self, factors: &[usize]) -> CompositeSpace {
        CompositeSpace {
            factor_dims: factors.iter().map(|&i| self.factor_dims[i]).collect(),
            labels: factors.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// Stride of each factor in the flattened index.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factor_dims.len()];
        for i in (0..self.factor_dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factor_dims[i + 1];
        }
        strides
    }

    pub fn flat_index(&self, multi: &[usize]) -> Result<usize, HilbertError> {
        if multi.len() != self.factor_dims.len() {
            return Err(HilbertError::IndexArity {
                expected: self.factor_dims.len(),
                got: multi.len(),
            });
        }
        let mut flat = 0;
        for (factor, (&i, &d)) in multi.iter().zip(&self.factor_dims).enumerate() {
            if i >= d {
                return Err(HilbertError::BasisIndexOutOfRange { factor, index: i, dim: d });
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    pub fn multi_index(&self, flat: usize) -> Result<Vec<usize>, HilbertError> {
        let total = self.total_dim();
        if flat >= total {
            return Err(HilbertError::FlatIndexOutOfRange { index: flat, dim: total });
        }
        let mut rest = flat;
        let mut multi = vec![0; self.factor_dims.len()];
        for (slot, &d) in multi.iter_mut().zip(&self.factor_dims).rev() {
            *slot = rest % d;
            rest /= d;
        }
        Ok(multi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_dims() {
        assert_eq!(CompositeSpace::new(vec![]), Err(HilbertError::EmptySpace));
        assert_eq!(CompositeSpace::new(vec![2, 0]), Err(HilbertError::ZeroDimension(1)));
    }

    #[test]
    fn leftmost_factor_is_most_significant() {
        let s = CompositeSpace::new(vec![2, 3, 4]).unwrap();
        assert_eq!(s.total_dim(), 24);
        assert_eq!(s.strides(), vec![12, 4, 1]);
        assert_eq!(s.flat_index(&[1, 2, 3]).unwrap(), 12 + 8 + 3);
        assert_eq!(s.multi_index(23).unwrap(), vec![1, 2, 3]);
        assert!(s.flat_index(&[0, 3, 0]).is_err());
        assert!(s.multi_index(24).is_err());
    }

    #[test]
    fn labels_follow_concat() {
        let a = CompositeSpace::single(2).unwrap().with_labels([Some("Q")]).unwrap();
        let b = CompositeSpace::qubits(2).unwrap();
        let ab = a.concat(&b);
        assert_eq!(ab.factor_dims(), &[2, 2, 2]);
        assert_eq!(ab.labels()[0].as_deref(), Some("Q"));
        assert!(ab.labels()[1].is_none());
    }
}
