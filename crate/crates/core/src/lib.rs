//! Exact arithmetic toolkit for class numbers of quadratic and cyclotomic
//! fields, genus theory, class field tower criteria and finite Galois modules
//! over cyclic groups of prime order.
//!
//! Every computation is exact: integers are arbitrary precision, values of
//! Dirichlet characters live in cyclotomic fields with rational coefficients,
//! and module computations are carried out over `Z/p^e`.

pub mod arith;
pub mod bqf;
pub mod characters;
pub mod error;
pub mod galmod;
pub mod genus;
pub mod linalg;
pub mod minusclass;
pub mod predict;
pub mod serde_util;
pub mod suite;
pub mod towers;

pub use arith::Symbol;
pub use bqf::{BinaryQuadraticForm, ClassGroup, QuadFieldReport};
pub use characters::{CycloRational, DirichletCharacter, SubfieldSpec};
pub use error::{Error, Result};
pub use galmod::{GModule, GroupRingElement, NormConfiguration};
pub use genus::{ConicSolution, RedeiMatrix};
pub use minusclass::MinusReport;
pub use predict::ParityPrediction;
pub use towers::{RankBound, TowerVerdict};
