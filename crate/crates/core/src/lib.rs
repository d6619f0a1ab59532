//! Group-invariant continuous extensions of functions on invariant closed sets.
//!
//! A compact group `G` acting linearly on `R^n` turns any continuous function
//! `psi` into an invariant one through the orbit infimum
//! `phi(x) = inf { psi(g x) : g in G }`. Combined with a Lipschitz
//! (McShane–Whitney) extension and an embedding that makes locally closed
//! domains closed, this yields invariant extensions of invariant data.
//!
//! All distances use the sup-norm `|x - y| = max_i |x_i - y_i|`.

// `!(a <= b)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod extension;
pub mod geometry;
pub mod groups;
pub mod parallel;
pub mod pipeline;
pub mod symmetrize;
pub mod zeroset;

pub use error::{Error, Result};
pub use extension::{estimate_lipschitz, mcshane_extend, LabeledSample, ScalarField};
pub use geometry::{sup_distance, ClosedSet, Point};
pub use groups::{sample_net, validate_finite_group, CompactGroup, EpsNet, GroupElement};
pub use parallel::Execution;
pub use pipeline::{embed, extend_invariant, invariant_frontier_gauge, InvariantExtension, LocallyClosedDomain};
pub use symmetrize::{symmetrize, SymmetrizedField, Witness};
pub use zeroset::{audit_zero_set, invariant_zero_function, ZeroSetAudit};
