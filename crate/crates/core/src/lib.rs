//! q-characters of fundamental modules, braid group operators on ℓ-weight
//! monomials, and reflection functors on graded (co)framed quiver
//! representations.

pub mod braid;
pub mod cartan;
pub mod error;
pub mod extremal;
pub mod linalg;
pub mod lweights;
pub mod qchar;
pub mod quiver;

pub use cartan::{CartanDatum, CartanType, WeightVector, WeylElement};
pub use error::{Error, Result};
pub use lweights::{AMonomialVector, LatticeVector, LaurentMonomial, Site};
pub use qchar::QChar;

/// Tag identifying the index conventions baked into every serialized
/// artifact. Bump whenever an output could change for the same input.
pub const CONVENTIONS: &str = "qcharlab-conv-1:a-transposed:s-shift-minus:phi-w-first";
