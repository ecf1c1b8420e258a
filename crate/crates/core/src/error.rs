use thiserror::Error;

/// Failures of the domain-level operations.
///
/// Shape mismatches between forms (different ambient dimension or grade)
/// are programming errors and panic instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("metric is not symmetric positive-definite: {0}")]
    InvalidMetric(String),
    #[error("not a G2-structure: the bilinear form built from the 3-form is not definite")]
    NotG2Structure,
    #[error("degenerate induced structure: |1 - <F^2, *phi>/2| = {0:e}")]
    DegenerateInducedStructure(f64),
    #[error("precondition failed: F is not a dDT solution (residual {0:e})")]
    NotDdtSolution(f64),
    #[error("F has nonzero (0,2) part (J-anti-invariant norm {0:e})")]
    NotOneOne(f64),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("unknown suite '{0}'; valid suites: {valid}", valid = crate::campaign::SUITE_NAMES.join(", "))]
    UnknownSuite(String),
    #[error("contract violation: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
