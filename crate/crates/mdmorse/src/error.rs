use thiserror::Error;

use crate::complex::Simplex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("face {face} of {simplex} is missing")]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(Simplex),
    #[error("{face} is not a free face with cofacet {cofacet}")]
    NotFreeFace { face: Simplex, cofacet: Simplex },

    #[error("{head} is not a cofacet of {tail}")]
    NotCofacet { tail: Simplex, head: Simplex },
    #[error("{head} is the image of more than one simplex")]
    NotInjective { head: Simplex },
    #[error("{0} is neither paired nor fixed")]
    CoverageGap(Simplex),
    #[error("{0} is assigned more than one role in the field")]
    Overlap(Simplex),
    #[error("field has a closed V-path through {}", fmt_path(.0))]
    CyclicField(Vec<Simplex>),

    #[error("set is not invariant")]
    NotInvariant,
    #[error("set is not an isolated invariant set")]
    NotIsolatedInvariant,
    #[error("blocks form a cycle: {0:?}")]
    CycleDetected(Vec<usize>),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("function has not passed validation")]
    NotValidated,
    #[error("lower vector is not strictly below upper vector")]
    OrderViolation,

    #[error("set is not closed under faces")]
    NotClosed,
    #[error("subcomplex is not contained in the complex")]
    NotNested,
    #[error("difference is not divisible by 1+t")]
    NotDivisible,

    #[error("fixed point {0} lies outside the target subcomplex")]
    FixedPointOutside(Simplex),
    #[error("set is not compatible with the field at {0}")]
    NotCompatible(Simplex),
    #[error("set is not a subcomplex: face of {0} missing")]
    NotSubcomplex(Simplex),
    #[error("flow restricted to the collapse region has a cycle")]
    CyclicRegion,
    #[error("{upper} and {lower} are joined by {paths} gradient paths, need exactly 1")]
    NotCancellable { upper: Simplex, lower: Simplex, paths: usize },

    #[error("critical components form an f-cycle: {}", fmt_path(.0))]
    FCycle(Vec<Simplex>),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    /// Stable variant name used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidSimplex(_) => "InvalidSimplex",
            Error::MissingFace { .. } => "MissingFace",
            Error::UnknownSimplex(_) => "UnknownSimplex",
            Error::NotFreeFace { .. } => "NotFreeFace",
            Error::NotCofacet { .. } => "NotCofacet",
            Error::NotInjective { .. } => "NotInjective",
            Error::CoverageGap(_) => "CoverageGap",
            Error::Overlap(_) => "Overlap",
            Error::CyclicField(_) => "CyclicField",
            Error::NotInvariant => "NotInvariant",
            Error::NotIsolatedInvariant => "NotIsolatedInvariant",
            Error::CycleDetected(_) => "CycleDetected",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::InvalidInput(_) => "InvalidInput",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::NotValidated => "NotValidated",
            Error::OrderViolation => "OrderViolation",
            Error::NotClosed => "NotClosed",
            Error::NotNested => "NotNested",
            Error::NotDivisible => "NotDivisible",
            Error::FixedPointOutside(_) => "FixedPointOutside",
            Error::NotCompatible(_) => "NotCompatible",
            Error::NotSubcomplex(_) => "NotSubcomplex",
            Error::CyclicRegion => "CyclicRegion",
            Error::NotCancellable { .. } => "NotCancellable",
            Error::FCycle(_) => "FCycle",
            Error::Parse { .. } => "ParseError",
        }
    }

    pub(crate) fn parse(line: usize, reason: impl Into<String>) -> Self {
        Error::Parse { line, reason: reason.into() }
    }
}

fn fmt_path(cells: &[Simplex]) -> String {
    cells.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}
