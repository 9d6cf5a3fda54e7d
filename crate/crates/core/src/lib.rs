//! Ramification types, fine Artin conductors and counting heuristics for
//! G-extensions of number fields, computed exactly over finite groups given
//! by multiplication tables.

pub mod arith;
pub mod character;
pub mod conductor;
pub mod counting;
pub mod cyclotomic;
pub mod error;
pub mod group;
pub mod linalg;
pub mod ramification;
pub mod verify;

pub use cyclotomic::{CyclotomicNumber, Rational};
pub use error::{Error, Result};
pub use group::{FiniteGroup, GroupHom, GroupSpec, Subgroup};
