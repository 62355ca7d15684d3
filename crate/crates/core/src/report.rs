//! Residual bookkeeping shared by the check routines.

use std::fmt;

/// Largest absolute residual seen by a check, with where it happened.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual<L> {
    pub max_abs: f64,
    pub at: Option<L>,
}

impl<L: Copy> Residual<L> {
    pub fn zero() -> Self {
        Self { max_abs: 0.0, at: None }
    }

    /// Record a new sample. NaN always wins so that it can't hide.
    pub fn observe(&mut self, value: f64, at: L) {
        if self.max_abs.is_nan() {
            return;
        }
        if self.at.is_none() || value.is_nan() || value > self.max_abs {
            self.max_abs = value;
            self.at = Some(at);
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if let Some(at) = other.at {
            self.observe(other.max_abs, at);
        }
        self
    }

    pub fn below(&self, tol: f64) -> bool {
        self.max_abs.is_finite() && self.max_abs < tol
    }
}

impl<L: Copy> Default for Residual<L> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<L: fmt::Debug> fmt::Display for Residual<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.at {
            Some(at) => write!(f, "{:.3e} at {:?}", self.max_abs, at),
            None => write!(f, "{:.3e}", self.max_abs),
        }
    }
}
