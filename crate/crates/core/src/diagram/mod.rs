//! Module-valued functors on finite categories: precosheaves (covariant),
//! presheaves (contravariant), their morphisms, finite limits and colimits,
//! Kan extensions, the pairing with a module and the quasi-projective cover.

mod kan;
mod limits;
mod pairing;
mod precosheaf;

use thiserror::Error;

use crate::fincat::CategoryError;
use crate::kmod::ModuleError;

pub use kan::{left_kan, lower_generator, nat_module, restrict, right_kan, right_kan_presheaf, upper_generator, NatModule};
pub use limits::{colim, h0_presheaf, h0_sieve, lim, lim_presheaf, Colimit, Limit};
pub use pairing::{pairing, quasiprojective_cover};
pub use precosheaf::{Precosheaf, PrecosheafMorphism, Presheaf, PresheafMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("not functorial: {0}")]
    NotFunctorial(String),
    #[error("not natural at object {0}")]
    NotNatural(String),
    #[error("diagrams live on different categories")]
    CategoryMismatch,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}
