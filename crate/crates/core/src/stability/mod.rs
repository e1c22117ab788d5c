//! Order-by-order construction of closed pure spinors `ψ_t = e^{z(t)}ψ`
//! over a deformation `a(t)` on the flat torus, with exact per-mode Hodge
//! theory for `(K•, d)` and majorant certificates.

mod families;
mod hodge;
mod majorant;
mod solver;
mod verify;

pub use families::{bfield_family, mode_one_profile, poisson_family};
pub use hodge::{k_complex, GKOneSpinor, ModeBlock, ModeHodge};
pub use majorant::{
    exp_upper_bound, exponential_domination_failure, majorant_certificate, majorant_coeffs,
    square_domination_failure, MajorantCertificate, NormTracking,
};
pub use solver::{
    check_mode_budget, class_by_degree, de_rham_class, expanded_spinor, obstruction_term,
    series_support, solve_stability, DeformationReport, KerOneSolver,
};
pub use verify::{
    eval_series, float_metric_min_eigenvalue, float_structure, verify_family, FamilyCheck,
    FamilySample, SAMPLE_TIMES,
};

#[cfg(test)]
mod tests;
