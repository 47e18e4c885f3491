//! Algebraic economics of provider/consumer business ecosystems.
//!
//! Every transaction between a provider and a consumer is described by its
//! gross values, transaction costs and an (optional) fee, all measured on one
//! common utility scale. On top of that unit cell the crate offers:
//!
//! - [`model`]: the ecosystem structure, per-edge surpluses, the Sigma
//!   operator and the ecosystem-wide internal feasibility check,
//! - [`bargaining`]: equal-split first-best fees for single edges and whole
//!   ecosystems,
//! - [`hub`]: hub-and-spoke fees with investment amortization, provider
//!   thresholds and the parametric welfare/utility optimum with its Lerner form,
//! - [`viability`]: the averaged `n` consumers / `m` providers condition, the
//!   `(n, m)` viability region and engagement preferences,
//! - [`extensions`]: federator fees, the Gaia-X vs data-space comparison and a
//!   structure classifier,
//! - [`oracle`]: brute-force grid maximizers used to cross-check the closed
//!   forms and root finders.
//!
//! The crate is `no_std` and only needs `alloc`. All operations are pure.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod bargaining;
pub mod error;
pub mod extensions;
pub mod hub;
pub mod model;
pub mod oracle;
pub mod response;
pub mod roots;
pub mod viability;

pub use error::{Error, Result};
pub use model::{Ecosystem, Edge, EdgeSurplus, Participant, Role, TransactionTerms};

/// Default feasibility tolerance: a margin counts as positive only when it
/// exceeds this value.
pub const EPS: f64 = 1e-9;
