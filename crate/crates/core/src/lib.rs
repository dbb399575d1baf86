//! Finite hyperstructures: canonical hypergroups, orders, hyperrings,
//! Krasner quotients and hypervaluations, with exhaustive axiom checks.

pub mod diagnostic;
pub mod dsl;
pub mod enumeration;
pub mod error;
pub mod hypergroup;
pub mod hyperring;
pub mod morphism;
pub mod finite_support;
pub mod order;
pub mod quotient;
pub mod rational;
pub mod report;
pub mod subset;
pub mod valuation;

pub use diagnostic::{Diagnostic, DiagnosticBundle, Verdict, Witness};
pub use error::{HyperError, Result};
pub use subset::SubsetMask;

pub type ElementId = usize;

/// Largest supported carrier; a [`SubsetMask`] is one `u32`.
pub const CARRIER_CAP: usize = 16;
