//! Roos and Čech (co)chain complexes, sieve and cover (co)homology, Čech
//! homology as a limit over covers or covering sieves, the plus
//! construction and cosheafification, and the (co)sheaf predicates.

mod complex;
mod homology;
mod nerve;
mod plus;

use thiserror::Error;

use crate::diagram::DiagramError;
use crate::fincat::CategoryError;
use crate::kmod::ModuleError;

pub use complex::{ChainComplex, CochainComplex, ComplexDump, Homology};
pub use homology::{
    cech_chain_complex, cech_chain_map, cech_cochain_complex, cech_h_n, cech_h_n_exhaustive, cech_h_upper_n, h_n_cover, h_n_sieve,
    h_upper_n_cover, h_upper_n_sieve, roos_chain_complex, roos_cochain_complex, CechHomology, Via,
};
pub use plus::{
    constant_cosheaf, is_coseparated, is_cosheaf, is_flabby, is_flask, is_separated, is_sheaf, plus, plus_presheaf, sharp,
    sharp_presheaf, SieveFailure,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CechError {
    #[error("d ∘ d ≠ 0 out of degree {degree}")]
    NotAComplex { degree: usize },
    #[error("{modules} modules do not fit {maps} differentials")]
    Shape { modules: usize, maps: usize },
    #[error("degree {degree} needs the complex beyond its top degree {top}")]
    DegreeOutOfRange { degree: usize, top: usize },
    #[error("sieve or cover does not belong to the site: {0}")]
    SieveMismatch(String),
    #[error("flabbiness is only defined on poset sites")]
    NotAPoset,
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}
