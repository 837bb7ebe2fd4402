//! Spectra of Hecke-type operators for the Grigorchuk group.
//!
//! The crate is organized bottom-up:
//!
//! - [`grig`]: words, the wreath recursion, the action on the tree and its
//!   boundary, the word problem, activity counts and rigidity.
//! - [`schreier`]: level Schreier graphs, balls in orbital graphs and
//!   rooted marked-graph isomorphism.
//! - [`hecke`]: group-algebra elements and their finite-level operator
//!   matrices.
//! - [`renorm`]: the renormalization map, the region it preserves, the
//!   invariant curve family and slice spectra.
//! - [`spectra`]: the symmetric eigensolver and spectral set comparisons.
//! - [`measure`]: Bernoulli sampling of boundary points and rigidity
//!   statistics.

pub mod error;
pub mod grig;
pub mod hecke;
pub mod intervals;
pub mod measure;
pub mod renorm;
pub mod schreier;
pub mod spectra;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
