//! Exact integral-lattice arithmetic and mechanized casework for rank-2
//! Lazarsfeld–Mukai bundles on smooth quartic surfaces.
//!
//! - [`lattice`]: intersection forms, signature, Hodge-index checks.
//! - [`invariants`]: Riemann–Roch, genus, Brill–Noether and twist formulas.
//! - [`acm`]: effectivity oracle and the initialized-aCM line bundle classifier.
//! - [`casework`]: `(s, t)` enumeration, destabilizing-pair elimination and
//!   the derivation-script checker.
//! - [`config`]: JSON lattice configuration files.

pub mod acm;
pub mod casework;
pub mod config;
pub mod invariants;
pub mod lattice;

pub use lattice::{DivClass, Lattice, LatticeError};
