//! Exact computation of Koszul cohomology and graded Betti tables for
//! explicitly presented embedded varieties, together with the
//! representation-theoretic (Borel-Weil-Bott) and intersection-theoretic
//! (Riemann-Roch) calculators used to cross-check the table identities on
//! K3 models.

pub mod betti;
pub mod bott;
pub mod chow;
pub mod field;
pub mod models;
pub mod poly;
pub mod ring;
pub mod sparse;
pub mod verify;

pub use betti::{betti_table, binomial, kpq_dim, BettiTable, TableOptions, WedgeIndex};
pub use field::{FieldSpec, Scalar};
pub use models::{LmInvariants, ModelKind, ModelSpec, SplitMix64};
pub use ring::{GradedPiece, ModelJson, Presentation};
pub use sparse::{Echelon, SparseMatrix};
