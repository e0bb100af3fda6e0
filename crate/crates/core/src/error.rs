//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// p was not an odd prime (p = 2 is rejected: odd residue characteristic
    /// is a standing assumption).
    BadCharacteristic(u64),
    /// Precision exponent outside the supported range.
    BadPrecision(u32),
    /// Ring contexts of the operands do not match (different p or precision
    /// family).
    RingMismatch,
    /// Inversion of a non-unit.
    NonUnit,
    /// A valuation comparison or product is not determined at the available
    /// precision.
    InsufficientPrecision,
    /// Operand failed the unitarity test.
    NotUnitary,
    /// Parameters of a special element violate its defining equation.
    ConstraintViolated(&'static str),
    /// Element failed a required subgroup membership test.
    NotInSubgroup,
    /// The trace of iota^{-1}gamma was a unit mod p; this would falsify the
    /// coset decomposition claim and must never happen.
    TraceObstruction,
    /// Iwahori factorization failed on a claimed member; a finding.
    NotFactorizable,
    /// Enumerated module larger than the exhaustive-enumeration guard.
    ModuleTooLarge(u64),
    /// Orbit or group enumeration exceeded its size guard.
    GuardExceeded { guard: u64, reached: u64 },
    /// A norm-one residue admitted no norm-one lift (must not happen).
    LiftFailed,
    /// Input rows do not span a full-rank module.
    RankDeficient,
    /// An oracle pipeline disagreed with the closed volume formula; the
    /// payload carries the full evidence line. Never reconciled silently.
    MismatchAgainstFormula(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadCharacteristic(p) => {
                write!(f, "p = {p} is not an odd prime (odd residue characteristic required)")
            }
            Error::BadPrecision(m) => write!(f, "unsupported precision exponent {m}"),
            Error::RingMismatch => write!(f, "ring contexts do not match"),
            Error::NonUnit => write!(f, "element is not a unit"),
            Error::InsufficientPrecision => {
                write!(f, "comparison not determined at the available precision")
            }
            Error::NotUnitary => write!(f, "matrix is not unitary"),
            Error::ConstraintViolated(what) => write!(f, "parameter constraint violated: {what}"),
            Error::NotInSubgroup => write!(f, "element is not in the required subgroup"),
            Error::TraceObstruction => {
                write!(f, "trace of iota^-1 gamma is a unit mod p (coset claim falsified)")
            }
            Error::NotFactorizable => write!(f, "Iwahori factorization failed on a member"),
            Error::ModuleTooLarge(n) => write!(f, "module of size {n} exceeds enumeration guard"),
            Error::GuardExceeded { guard, reached } => {
                write!(f, "enumeration guard {guard} exceeded (reached {reached})")
            }
            Error::LiftFailed => write!(f, "norm-one lift failed"),
            Error::RankDeficient => write!(f, "rows do not span a full-rank module"),
            Error::MismatchAgainstFormula(s) => write!(f, "oracle/formula mismatch: {s}"),
        }
    }
}

impl core::error::Error for Error {}
