use thiserror::Error;

use crate::expr::{EvalError, ParseError};
use crate::jets::JetError;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric spec: {0}")]
    Spec(String),
    #[error("metric spec file: {0}")]
    SpecFile(String),
    #[error("{location}: {source}")]
    Expression { location: String, source: ParseError },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("a_ij is not positive definite at x = {x:?} (leading minor {minor} = {value:e})")]
    NotPositiveDefinite { x: Vec<f64>, minor: usize, value: f64 },
    #[error("fundamental tensor g_ij is not positive definite at x = {x:?}, y = {y:?}")]
    FundamentalTensor { x: Vec<f64>, y: Vec<f64> },
    #[error("Randers positivity fails at x = {x:?}: b = {b} >= 1")]
    NotStronglyConvex { x: Vec<f64>, b: f64 },
    #[error("direction y must be nonzero")]
    ZeroDirection,
    #[error("point x = {x:?} is outside the metric domain")]
    OutsideDomain { x: Vec<f64> },
    #[error("no admissible samples ({skipped} rejected)")]
    NoAdmissibleSamples { skipped: usize },
    #[error("metric generator gave up after {attempts} attempts")]
    GeneratorExhausted { attempts: usize },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
