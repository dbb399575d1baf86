use thiserror::Error;

use crate::diagnostic::DiagnosticBundle;

#[derive(Debug, Error)]
pub enum HyperError {
    #[error("carrier size {0} exceeds the cap of {cap}", cap = crate::CARRIER_CAP)]
    CarrierTooLarge(usize),
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("element index {index} out of range for carrier of size {size}")]
    ElementOutOfRange { index: usize, size: usize },
    #[error("table has {found} entries, expected {expected}")]
    TableShape { expected: usize, found: usize },
    #[error("hyperoperation entry ({0}, {1}) is empty")]
    EmptyEntry(usize, usize),
    #[error("not an abelian group: {0}")]
    NotAbelianGroup(String),
    #[error("relation is not an order: {0}")]
    NotAnOrder(String),
    #[error("a total order is required: {0} and {1} are incomparable")]
    PartialOrder(usize, usize),
    #[error("hyperideals are nonempty")]
    EmptyIdeal,
    #[error("invalid subgroup: {0}")]
    InvalidSubgroup(String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("maps are defined on different hypergroups")]
    DomainMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("axiom verification failed:\n{0}")]
    Verification(DiagnosticBundle),
}

pub type Result<T, E = HyperError> = std::result::Result<T, E>;
