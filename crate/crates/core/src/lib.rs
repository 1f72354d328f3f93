//! Exact cosheaf homology on finite Grothendieck sites.
//!
//! The crate is organised bottom-up:
//!
//! * [`kmod`] — finitely presented modules over ℤ, ℚ, 𝔽_p and their maps;
//! * [`fincat`] — finite categories, sieves, sites and finite spaces;
//! * [`diagram`] — precosheaves, presheaves, limits, colimits, Kan extensions;
//! * [`cech`] — Roos and Čech complexes, Čech homology, cosheafification;
//! * [`satellite`] — quasi-projective resolutions and left satellites;
//! * [`spectral`] — bicomplexes and their two spectral sequences;
//! * [`protower`] — towers of modules and pro-object diagnostics;
//! * [`io`] — the JSON file formats used by the command-line tool.

pub mod cech;
pub mod diagram;
pub mod fincat;
pub mod io;
pub mod kmod;
pub mod satellite;
pub mod protower;
pub mod spectral;

pub use kmod::{CanonicalForm, Int, Matrix, ModuleError, ModuleMap, PresentedModule, Ring};
