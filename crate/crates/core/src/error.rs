use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("config line {line}: {msg}")]
    ConfigParse { line: usize, msg: String },
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("eigen-solver did not converge at xi = {xi}")]
    EigenNonConvergence { xi: f64 },
    #[error("eigenpair residual {residual:e} exceeds tolerance at xi = {xi}")]
    EigenResidual { xi: f64, residual: f64 },
    #[error("unstable case: {0}")]
    Unstable(String),
    #[error("case mismatch: {0}")]
    CaseMismatch(String),
    #[error("no purely imaginary eigenvalue at xi = {xi} (smallest |Re| = {gap:e})")]
    NoImaginaryEigenvalue { xi: f64, gap: f64 },
    #[error("certificate search failed: big_lambda cap reached, worst xi = {worst_xi}, eigenvalue = {eig:e}")]
    CertificateFailed { worst_xi: f64, eig: f64 },
    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },
    #[error("parameter out of range: {0}")]
    Range(String),
}

pub type Result<T> = std::result::Result<T, Error>;
