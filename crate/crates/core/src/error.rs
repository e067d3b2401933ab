use thiserror::Error;

use crate::lweights::Site;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported Cartan type `{0}`")]
    UnsupportedType(String),

    #[error("node {node} out of range for rank {rank}")]
    InvalidNode { node: usize, rank: usize },

    #[error("{what} exceeds cap {cap}")]
    CapExceeded { what: String, cap: usize },

    #[error("monomial does not factor as anchor times A-monomials")]
    NotFactorable,

    #[error("Frenkel-Mukhin closure is inconsistent at {0}")]
    FmFailure(String),

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("stability parameter is not generic")]
    NonGenericTheta,

    #[error("stability parameter has coefficient >= 0 at node {node}")]
    ThetaNotNegative { node: usize },

    #[error("stability can only be decided over a finite field")]
    FieldNotFinite,

    #[error("point is not stable for the given parameter")]
    NotStable,

    #[error("Phi map at {site} is not surjective (rank {rank}, target dimension {target})")]
    NotSurjective { site: Site, rank: usize, target: usize },

    #[error("relation violated: {0}")]
    RelationViolated(String),

    #[error("dimension vector mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}
