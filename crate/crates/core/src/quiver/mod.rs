//! Graded (co)framed quiver representations: relations, stability, and the
//! reflection functor at a node.
//!
//! The quiver has vertices `I × ℤ`, arrows `V_i^a → V_j^{a-d_ij}` for
//! `i = j` (the loop, of degree `-d_ii`) and for adjacent `i != j`, framing
//! `A_i^a : W_i^a → V_i^{a+d_i}` and coframing `B_i^a : V_i^{a-d_i} → W_i^a`.
//! Arrows between non-adjacent nodes are not part of the data.

pub mod json;
pub mod maps;
pub mod reflect;
pub mod relations;
pub mod rep;
pub mod search;
pub mod stability;

pub use json::{rep_from_json, rep_to_json, AnyRep};
pub use maps::{phi_domain, phi_map, psi_map, upsilon, PhiDomain, Summand};
pub use reflect::{chain_reflect, reflect, ReflectOptions, Reflected};
pub use relations::{framing_vector, validate_n, validate_relations, RelationKind, RelationViolation};
pub use rep::{GradedQuiverRep, MapKey, Space};
pub use search::{exhaustive_search, SearchOptions, SearchPoint, SearchResult};
pub use stability::{
    enumerate_subreps, generated_by, generated_by_a, is_stable_framed, pairing, stability_check,
    stability_witness, Destabilizing, StabilityOptions, Subrep,
};
