use std::fmt;

use crate::error::{Error, Result};

/// A validated Hölder pair `(p, q)` with `1/p + 1/q = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateExponents {
    p: f64,
    q: f64,
}

impl ConjugateExponents {
    /// Builds the pair from `p`; `q = p / (p - 1)`.
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidExponent(format!("p must be finite and > 1, got {p}")));
        }
        let q = p / (p - 1.0);
        if !q.is_finite() || q <= 1.0 {
            return Err(Error::InvalidExponent(format!("conjugate of p = {p} is not representable")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// The pair with the roles of `p` and `q` exchanged.
    pub fn swap(&self) -> Self {
        Self { p: self.q, q: self.p }
    }

    /// `|1/p + 1/q - 1|`, the representation defect of the pair.
    pub fn defect(&self) -> f64 {
        (1.0 / self.p + 1.0 / self.q - 1.0).abs()
    }
}

impl fmt::Display for ConjugateExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p={}, q={})", self.p, self.q)
    }
}
