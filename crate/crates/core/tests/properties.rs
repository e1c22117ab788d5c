//! Property tests: each randomized identity runs on proptest-chosen seeds.

use gk_core::identities::{catalogue, find, run_case};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn check(name: &str, seed: u64) -> Result<(), TestCaseError> {
    let id = find(name).ok_or_else(|| TestCaseError::fail(format!("unknown identity {name}")))?;
    run_case(&id, seed).map_err(TestCaseError::fail)
}

macro_rules! property {
    ($($test:ident: $name:literal, $cases:literal;)*) => {
        $(
            proptest! {
                #![proptest_config(config($cases))]
                #[test]
                fn $test(seed in any::<u64>()) {
                    check($name, seed)?;
                }
            }
        )*

        #[test]
        fn every_identity_has_a_property() {
            let covered = [$($name),*];
            for id in catalogue() {
                assert!(covered.contains(&id.name), "{} has no property test", id.name);
            }
        }
    };
}

property! {
    ring_axioms_scalar: "ring-axioms-scalar", 64;
    ring_axioms_trig: "ring-axioms-trig", 64;
    ring_axioms_affine: "ring-axioms-affine", 64;
    real_product_real: "real-product-real", 64;
    spin_module_m2: "spin-module-m2", 64;
    spin_module_m4: "spin-module-m4", 32;
    clifford_relation_m2: "clifford-relation-m2", 64;
    clifford_relation_m4: "clifford-relation-m4", 32;
    d_squared_m2: "d-squared-m2", 64;
    d_squared_m4: "d-squared-m4", 32;
    annihilator_idempotent: "annihilator-idempotent", 16;
    u_decompose_eigen: "u-decompose-eigen", 16;
    lbar_wedge_level: "lbar-wedge-level", 16;
    ker1_image: "ker1-image", 16;
    ker2_no_extreme_levels: "ker2-no-extreme-levels", 16;
    courant_lie_m2: "courant-lie-m2", 16;
    courant_lie_m4: "courant-lie-m4", 8;
    courant_closure: "courant-closure", 8;
    schouten_two_path: "schouten-two-path", 4;
    schouten_ad_nilpotent: "schouten-ad-nilpotent", 4;
    maurer_cartan_two_path: "maurer-cartan-two-path", 4;
    cbh_reexponentiation: "cbh-reexponentiation", 16;
    lift_real_congruence: "lift-real-congruence", 8;
    adjoint_annihilates: "adjoint-annihilates", 16;
    solver_brute_force_t2: "solver-brute-force-t2", 4;
    hodge_minimal: "hodge-minimal", 8;
    majorant_square: "majorant-square", 4;
    poisson_type_rank: "poisson-type-rank", 8;
    poisson_purity: "poisson-purity", 8;
    poisson_mc_linkage: "poisson-mc-linkage", 4;
}
