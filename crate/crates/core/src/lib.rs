//! Alcove geometry for affine Weyl groups, Lusztig's periodic Hecke module, and
//! the simple-object combinatorics of Kazhdan-Laumon category O.

pub mod alcove;
pub mod cato;
pub mod coxeter;
pub mod heckemod;
pub mod laurent;
pub mod padic;
pub mod periodic;

pub use alcove::{AffineElt, Alcove};
pub use cato::{K0Vec, SimpleKL};
pub use coxeter::{CartanDatum, CoxeterError, GenSet, WeylElt};
pub use heckemod::{HeckeAlgebra, HeckeElt};
pub use laurent::LaurentPoly;
pub use padic::{BoxFunction, CharacterSpec};
pub use periodic::{PeriodicModule, PeriodicVec};
