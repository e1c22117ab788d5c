//! Generalized complex structures, pure spinors and their gradings.

pub mod grading;
pub mod kahler;
pub mod spinor;
pub mod structure;
pub mod transform;

pub use grading::{mode_d_matrix, so_to_spin, u_decompose, Bigrading, Corner, DSplit, Grading};
pub use kahler::{gk_check, GkReport, ModeLaplacians, POSITIVITY_TOL};
pub use spinor::{annihilator, induced_structure, type_at, Point, PureSpinorData};
pub use structure::{dz, exp_form, holomorphic_volume, GCStructure, ValidationReport};
pub use transform::{bivector_as_clifford, form_as_clifford, transport, TransportedSpinor};
