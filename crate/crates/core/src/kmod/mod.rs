//! Finitely presented modules over ℤ, ℚ and 𝔽_p.
//!
//! Every module is `R^g / L` for a relation lattice `L`, stored by its
//! echelon basis. Elements and maps use the row-vector convention: a map
//! `M → N` is a `g_M × g_N` matrix whose `i`-th row is the image of the
//! `i`-th generator.

mod hom;
mod lattice;
mod matrix;
mod module;
mod ring;
mod snf;

use thiserror::Error;

pub use hom::{hom_module, HomModule};
pub use lattice::Lattice;
pub(crate) use matrix::int_vec;
pub use matrix::Matrix;
pub(crate) use module::{block_map, sign_of, subquotient};
pub use module::{direct_sum, homology_at, CanonicalForm, DirectSum, ModuleMap, PresentedModule};
pub use ring::{Int, Ring};
pub use snf::{smith_normal_form, SmithForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModuleError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unknown ring tag {0:?} (expected \"Z\", \"Q\" or \"Fp:<p>\")")]
    BadRingTag(String),
    #[error("matrix has shape {found:?}, expected {expected:?}")]
    Shape { expected: (usize, usize), found: (usize, usize) },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),
    #[error("map is not well defined: relation {relation} is not sent to zero")]
    IllDefined { relation: usize },
    #[error("maps are not composable")]
    NotComposable,
    #[error("composite is nonzero on generator {generator}")]
    CompositeNonzero { generator: usize },
    #[error("generator {generator} does not lift")]
    NotInImage { generator: usize },
}
