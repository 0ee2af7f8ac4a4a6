use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A failed Hecke relation, reported by the first offending index pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeckeRelation {
    /// `a(mn) != a(m) a(n)` for coprime `m`, `n`.
    Multiplicative { m: u64, n: u64 },
    /// `a(p^(r+1)) != a(p) a(p^r) - p^(k-1) a(p^(r-1))`.
    PrimePower { p: u64, r: u32 },
}

impl std::fmt::Display for HeckeRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            HeckeRelation::Multiplicative { m, n } => write!(f, "({m},{n})"),
            HeckeRelation::PrimePower { p, r } => write!(f, "(p={p},r={r})"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("conductor mismatch: {from} does not divide {to}")]
    ConductorMismatch { from: u64, to: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eta product has non-integral leading exponent {numerator}/{denominator}")]
    NonIntegralLeadingExponent { numerator: i64, denominator: i64 },

    #[error("newform catalog incomplete: no complete set of newforms for level {level}, weight {weight} (have {have}, need {need})")]
    CatalogIncomplete { level: u64, weight: u32, have: usize, need: usize },

    #[error("newform {label} is not normalized: a(1) = {found}")]
    NotNormalized { label: String, found: String },

    #[error("Hecke relation violated at {0}")]
    HeckeViolation(HeckeRelation),

    #[error("insufficient precision: need {required}, have {available}")]
    InsufficientPrecision { required: usize, available: usize },

    #[error("series is not in the span of the basis at precision {precision}")]
    NotInSpan { precision: usize },

    #[error("basis matrix has rank {rank} < {atoms} atoms even at precision {precision}")]
    RankDeficient { rank: usize, atoms: usize, precision: usize },

    #[error("Galois trace mismatch at p = {p}: a(p) = {coefficient}, p + 1 - #E(F_p) = {trace}")]
    TraceMismatch { p: u64, coefficient: String, trace: i64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown newform {0}")]
    UnknownNewform(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }
}
