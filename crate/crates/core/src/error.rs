use thiserror::Error;

use crate::symmetrize::Witness;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A finite group failed the identity, closure, inverse or invertibility checks.
    #[error("group validation failed: {0}")]
    GroupValidation(String),

    /// The operation needs metadata (Lipschitz constants, a frontier, a
    /// parameterized group) that the inputs do not carry.
    #[error("missing capability: {0}")]
    Capability(String),

    #[error("point is on the frontier at working precision (gauge = {gauge:e})")]
    FrontierProximity { gauge: f64 },

    #[error(
        "labeled data is not group-invariant: sample {point} mapped by net element {element} \
         {partner}, discrepancy {discrepancy:e}",
        partner = match .partner {
            Some(j) => format!("lands on sample {j}"),
            None => "lands on no sample".to_string(),
        }
    )]
    InvarianceViolation {
        point: usize,
        element: usize,
        partner: Option<usize>,
        discrepancy: f64,
    },

    #[error("refinement stopped after {halvings} halvings with bound {bound:e} above target {target:e}")]
    CappedRefinement {
        best: Box<Witness>,
        bound: f64,
        target: f64,
        halvings: usize,
    },
}
