//! Exact local-field, quaternion and finite-group machinery for the dual pair (U(1,1), U(2))
//! over a p-adic field with p odd, and finite checks of its character and lattice-model identities.

pub mod beta_characters;
pub mod cyclotomic;
pub mod error;
pub mod finite_quotient_lab;
pub mod group;
pub mod local_field;
pub mod quaternion;
pub mod residue;
pub mod theta_lattice;
pub mod unitary_groups;

pub use error::{Error, Result};
pub use local_field::{chi, psi, CycVal, ExtNum, FieldParams, PadicNum};
