//! Desk-scale numerical laboratory for the Monge-Kantorovich problem on
//! normed and finite metric measure spaces.
//!
//! The crate computes exact optimal plans for discrete marginals, certifies
//! c-cyclical monotonicity with explicit violating cycles, estimates
//! twist-condition density ratios and non-branching constants by seeded Monte
//! Carlo, and probes the map-vs-plan uniqueness dichotomy.

pub mod conditions;
pub mod error;
pub mod measures;
pub mod monotonicity;
pub mod oracle;
pub mod spaces;
pub mod tol;
pub mod transport;

pub use error::{Error, Result};
