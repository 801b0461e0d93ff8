//! Lattice model of the Weil representation for the dual pair (U(1,1), U(2)) inside Sp(𝒲).

pub mod forms;
pub mod heisenberg;
pub mod lattice;
pub mod lattice_model;
pub mod matching;

pub use forms::{form_v, form_w, form_ww, BigVec, VVec};
pub use heisenberg::{heisenberg_model_check, FiniteHeisenberg, FiniteHeisenbergReport, MonoOp};
pub use lattice::{gram, lattice_report, Lattice, LatticeReport};
pub use lattice_model::{CycSum, LatticeModel, WOp, XVec, YFunc};
pub use matching::{
    extract_b1, extract_b2, fixed_vectors, match_check, match_random, scalar_character,
    FixedVectorReport, MatchReport, ScalarCharacterReport,
};
