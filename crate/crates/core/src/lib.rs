//! Variability-aware conformance checking for software product lines.
//!
//! Features are modeled as finite state machines with variability: guarded
//! transitions over finite-domain variables plus a global predicate
//! selecting the valid configurations. The crate checks per-feature
//! design-to-requirement conformance by prefix-closed language containment,
//! composes features with handshake synchronization and cross-feature
//! configuration constraints, and decides whole-SPL conformance by building
//! and solving a forall-exists Boolean formula, never constructing the
//! monolithic product-line state space.

pub mod composition;
pub mod containment;
pub mod error;
pub mod fsmv;
pub mod generator;
pub mod limits;
pub mod promela;
pub mod qbf;
pub mod report;
pub mod spl;
pub mod syntax;
pub mod varlang;

pub use error::{CapacityError, Error, ModelError, ParseError, Result};
pub use limits::Limits;
