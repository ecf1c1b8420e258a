//! Floating point comparison policy.

use serde::{Deserialize, Serialize};

/// Relative tolerance with an absolute floor.
///
/// A difference `d` between quantities of magnitude `s` is accepted when
/// `d <= max(rel * s, abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-9, abs: 1e-12 }
    }
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    /// Same floor, different relative bound.
    pub const fn with_rel(self, rel: f64) -> Self {
        Self { rel, abs: self.abs }
    }

    /// Normalised residual: `diff / max(scale, abs / rel)`.
    ///
    /// The result is below `rel` exactly when the difference is accepted.
    pub fn residual(&self, diff: f64, scale: f64) -> f64 {
        diff / scale.max(self.abs / self.rel)
    }

    pub fn accepts(&self, diff: f64, scale: f64) -> bool {
        diff <= (self.rel * scale).max(self.abs)
    }

    pub fn close(&self, a: f64, b: f64) -> bool {
        self.accepts((a - b).abs(), a.abs().max(b.abs()))
    }
}
