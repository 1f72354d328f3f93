//! Finite categories, functors, sieves, Grothendieck topologies, finite
//! spaces and comma categories.

mod category;
mod comma;
mod functor;
mod sieve;
mod site;
mod space;

use thiserror::Error;

pub use category::{Arrow, Cone, FinCategory, Mor, Obj};
pub(crate) use comma::lifted_category;
pub use comma::{comma_over, comma_sieve, CommaCategory};
pub use functor::FinFunctor;
pub use sieve::{Cover, Sieve};
pub use site::{Site, TopologyOrigin};
pub use space::FinSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("unknown object: {0}")]
    UnknownObject(String),
    #[error("unknown morphism: {0}")]
    UnknownMorphism(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("composite {g} ∘ {f} is missing")]
    MissingComposite { g: String, f: String },
    #[error("composite {g} ∘ {f} is given twice with different values")]
    ConflictingComposite { g: String, f: String },
    #[error("{g} ∘ {f} = {h} has the wrong domain or codomain")]
    BadComposite { g: String, f: String, h: String },
    #[error("{g} ∘ {f} is not composable")]
    NotComposable { g: String, f: String },
    #[error("associativity fails: ({h} ∘ {g}) ∘ {f} ≠ {h} ∘ ({g} ∘ {f})")]
    Associativity { h: String, g: String, f: String },
    #[error("relation is not transitive: {0} ≤ … ≤ {1}")]
    NotTransitive(String, String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("not a sieve: {0}")]
    NotASieve(String),
    #[error("not a cover: {0}")]
    NotACover(String),
    #[error("axiom {axiom} fails at {object}: {detail}")]
    Axiom { axiom: &'static str, object: String, detail: String },
    #[error("no fiber product for {0}")]
    MissingPullback(String),
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
}
