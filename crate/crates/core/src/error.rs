use thiserror::Error;

use crate::exchange::ExchangeClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value encountered")]
    NonFinite,

    #[error("amplitude outside the unit disk: |a|^2 = {modulus_sq}")]
    AmplitudeOutOfDisk { modulus_sq: f64 },

    #[error("matrix entry ({row}, {col}) outside the unit disk: |a| = {modulus}")]
    EntryOutOfDisk { row: usize, col: usize, modulus: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("matrix size {n} exceeds the limit {max} for this kernel")]
    TooLarge { n: usize, max: usize },

    #[error("no amplitude-level rule exists for {0:?} particles")]
    NoAmplitude(ExchangeClass),

    #[error("row {row} squared moduli sum to {sum}, above 1")]
    RowNormExceeded { row: usize, sum: f64 },

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("outcome label {label:?} not found in {context}")]
    LabelMismatch { label: String, context: String },

    #[error("particle count mismatch: expected {expected}, found {found}")]
    ParticleCount { expected: usize, found: usize },

    #[error("final configuration of the first sequence does not match the initial configuration of the second")]
    JunctionMismatch,

    #[error("malformed sequence: {0}")]
    Sequence(String),

    #[error("coarse-graining family is malformed: {0}")]
    FamilyShape(String),

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("probabilities sum to {sum}, not 1")]
    Normalization { sum: f64 },

    #[error("oracle mismatch at n = {n}: kernel {kernel}, oracle {oracle}")]
    OracleMismatch { n: usize, kernel: String, oracle: String },
}
