//! Exact integer and mod-p linear algebra.

pub mod exchange;
mod group;
mod homology;
mod lattice;
mod matrix;
mod modp;
mod snf;

pub use group::{invariants_of_cokernel, GroupInvariants, PresentedGroup};
pub use homology::{homology_invariants, homology_presentation};
pub use lattice::{
    check_well_defined, coordinates_in_lattice, presented_map_is_iso, IntegerSolver, LatticeBasis,
};
pub use matrix::IntMatrix;
pub use modp::{fp_cokernel_basis, fp_rank};
pub use snf::{smith_normal_form, SnfResult};

pub(crate) use group::serialize_big;
pub(crate) use modp::reduce;
