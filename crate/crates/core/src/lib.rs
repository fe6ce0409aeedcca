//! Exact coadjoint-orbit stratification for nilpotent Lie algebras.
//!
//! Everything is computed over the rationals: stratum membership is a rank
//! condition and is decided exactly. The generic stratum is found either
//! symbolically, by fraction-free elimination over polynomials in the
//! coordinates of the functional, or by seeded sampling.
//!
//! Module map:
//! - [`algebra`]: structure constants, validation, series, flags, quotients.
//! - [`coadjoint`]: skew forms, isotropy, jump sets, the coadjoint action.
//! - [`strata`]: label orderings, classification, index, layers.
//! - [`families`]: Heisenberg, abelian, `h_{m,n}`, threadlike algebras.
//! - [`limits`]: Grassmannian limits of one-parameter orbit families.

pub mod algebra;
pub mod coadjoint;
pub mod error;
pub mod families;
pub mod format;
pub mod limits;
pub mod linalg;
pub mod poly;
pub mod sample;
pub mod strata;

pub use algebra::{Flag, LieAlgebra};
pub use coadjoint::Functional;
pub use error::{Error, Result};
pub use linalg::{Scalar, Subspace};
