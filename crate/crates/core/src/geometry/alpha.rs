use crate::error::{Error, Result};
use crate::linalg::check_dim;

const LOWER_MARGIN: f64 = 1e-12;
/// Purities computed from pure states can overshoot 1 by roundoff.
const UPPER_SLACK: f64 = 1e-10;

/// The shift parameter `α ∈ (1/N, 1]` of the `F_α` map for a given dimension.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaValue {
    value: f64,
    dim: usize,
}

impl AlphaValue {
    pub fn new(value: f64, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let lower = 1.0 / dim as f64;
        if !value.is_finite() || value <= lower + LOWER_MARGIN || value > 1.0 + UPPER_SLACK {
            return Err(Error::Alpha { value, lower, dim });
        }
        Ok(Self {
            value: value.min(1.0),
            dim,
        })
    }

    /// `α = 1`, valid in every dimension.
    pub fn one(dim: usize) -> Result<Self> {
        Self::new(1.0, dim)
    }

    /// `value` if admissible, otherwise `α = 1`.
    pub fn or_one(value: f64, dim: usize) -> Result<Self> {
        Self::new(value, dim).or_else(|_| Self::one(dim))
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.value
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// One `α_ij` per ordered pair `i ≠ j`; diagonal entries are unused.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaAssignment {
    dim: usize,
    values: Vec<AlphaValue>,
}

impl AlphaAssignment {
    pub fn uniform(alpha: AlphaValue) -> Self {
        let dim = alpha.dim();
        Self {
            dim,
            values: vec![alpha; dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Result<AlphaValue>) -> Result<Self> {
        check_dim(dim)?;
        let one = AlphaValue::one(dim)?;
        let mut values = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                values.push(if i == j { one } else { f(i, j)? });
            }
        }
        if let Some(a) = values.iter().find(|a| a.dim() != dim) {
            return Err(Error::DimensionMismatch(dim, a.dim()));
        }
        Ok(Self { dim, values })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> AlphaValue {
        self.values[i * self.dim + j]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_checks() {
        assert!(AlphaValue::new(0.5, 2).is_err());
        assert!(AlphaValue::new(0.5 + 1e-13, 2).is_err());
        assert!(AlphaValue::new(0.51, 2).is_ok());
        assert!(AlphaValue::new(1.0, 2).is_ok());
        assert!(AlphaValue::new(1.01, 2).is_err());
        assert!(AlphaValue::new(1.0 / 3.0, 3).is_err());
        assert!(AlphaValue::new(f64::NAN, 3).is_err());
        assert_eq!(AlphaValue::new(1.0 + 1e-12, 3).unwrap().value(), 1.0);
        assert_eq!(AlphaValue::or_one(0.2, 3).unwrap().value(), 1.0);
    }
}
