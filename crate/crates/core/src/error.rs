use thiserror::Error;

/// Errors raised by the kernel, quadrature, potential and solver layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HeatError {
    /// Invalid configuration: orders, dimensions, domains, scenario fields.
    #[error("configuration error: {0}")]
    Config(String),
    /// A call argument lies outside the operation's precondition.
    #[error("argument error: {0}")]
    Argument(String),
    /// Evaluation requested outside the domain of definition (e.g. `s <= 0`).
    #[error("domain error: {0}")]
    Domain(String),
    /// A series did not reach its truncation tolerance within the term budget.
    #[error("series truncation failed: {terms} terms, last term {last_term:e} > tol {tol:e}")]
    Truncation {
        terms: usize,
        last_term: f64,
        tol: f64,
    },
    /// Linear solve or other numerical breakdown.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, HeatError>;
