//! Kolchin dimension polynomials of leader sets, their canonical binomial
//! decomposition and ordinal rank, forking between them, and the chains of
//! types that realize the rank `ω^m` of a generic element.
//!
//! Every closed-form computation has a brute-force counterpart in the same
//! module so that the two can be checked against each other.

mod bigjson;

pub mod field_probe;
pub mod free_monoid;
pub mod kolchin;
pub mod lattice;
pub mod numpoly;
pub mod ordinal;
pub mod rank_engine;
pub mod verify;

pub use free_monoid::{Word, WordSet};
pub use kolchin::{decompose, rank, KolchinDecomposition, KolchinError};
pub use lattice::{LatticePoint, LeaderSet};
pub use numpoly::NumericalPolynomial;
pub use ordinal::Ordinal;
pub use rank_engine::ChainSpec;
