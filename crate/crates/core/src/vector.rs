use std::fmt;

use crate::error::{Error, Result};

/// A finite-dimensional real point with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { context: "vector entry" });
        }
        Ok(Self(entries))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    /// Unit coordinate vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        let mut v = vec![0.0; dim];
        if i >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: i + 1 });
        }
        v[i] = 1.0;
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &f64> {
        self.0.iter()
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch { expected, found: self.dim() });
        }
        Ok(())
    }

    pub fn dot(&self, other: &Vector) -> Result<f64> {
        other.check_dim(self.dim())?;
        Ok(self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `s * a + t * b`, componentwise.
    pub fn axpby(s: f64, a: &Vector, t: f64, b: &Vector) -> Result<Vector> {
        b.check_dim(a.dim())?;
        let out = a.0.iter().zip(&b.0).map(|(x, y)| s * x + t * y).collect();
        Vector::new(out).map_err(|_| Error::NonFinite { context: "axpby" })
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        Self::axpby(1.0, self, 1.0, other)
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        Self::axpby(1.0, self, -1.0, other)
    }

    pub fn scale(&self, s: f64) -> Result<Vector> {
        Vector::new(self.0.iter().map(|x| s * x).collect())
            .map_err(|_| Error::NonFinite { context: "scale" })
    }

    pub fn dist(&self, other: &Vector) -> Result<f64> {
        other.check_dim(self.dim())?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl TryFrom<Vec<f64>> for Vector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Vector::new(v)
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
