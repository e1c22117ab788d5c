use super::*;
use crate::coeff::{q, AffinePoly};
use crate::sample::Sampler;

fn z(n: usize, j: usize) -> AffinePoly {
    AffinePoly::z(2 * n, j)
}

fn surface(f: &AffinePoly) -> PoissonBivector {
    PoissonBivector::zero(2).with(0, 1, f).unwrap()
}

#[test]
fn surface_bivectors_are_poisson() {
    let mut s = Sampler::new(1);
    for _ in 0..5 {
        let f = s.holomorphic(4, 3, 4);
        let b = surface(&f);
        assert!(b.is_holomorphic());
        assert!(poisson_check(&b).is_zero());
        let cmp = schouten_crosscheck(&b).unwrap();
        assert!(cmp.agrees && cmp.operator.is_empty());
        assert!(mc_linkage(&b).unwrap().vanishes());
    }
}

#[test]
fn commuting_fields() {
    let n = 3;
    let one = AffinePoly::one(6);
    let zero = AffinePoly::zero(6);
    // z₁∂₁ and ∂₂ + ∂₃ commute.
    let v1 = vec![z(n, 0), zero.clone(), zero.clone()];
    let v2 = vec![zero.clone(), one.clone(), one.clone()];
    let b =
        PoissonBivector::from_commuting(n, &[v1.clone(), v2], &[(0, 1, Scalar::int(2))]).unwrap();
    assert!(!b.is_zero());
    assert!(poisson_check(&b).is_zero());
    // z₁∂₁ and z₁∂₂ do not commute.
    let v3 = vec![zero.clone(), z(n, 0), zero];
    assert!(PoissonBivector::from_commuting(n, &[v1, v3], &[]).is_err());
}

#[test]
fn three_fold_residual_matches_operator_path() {
    let n = 3;
    // β = z₁∂₁∧∂₂ + z₂∂₂∧∂₃.
    let b = PoissonBivector::zero(n)
        .with(0, 1, &z(n, 0))
        .unwrap()
        .with(1, 2, &z(n, 1))
        .unwrap();
    let r = poisson_check(&b);
    // Only l = 1 contributes: β^{10}∂₁β^{12} = −z₁.
    assert_eq!(r.components.get(&(0, 1, 2)), Some(&z(n, 0).neg()));
    let cmp = schouten_crosscheck(&b).unwrap();
    assert!(cmp.agrees, "{cmp:?}");
    let kappa = cmp.factor.clone().unwrap();
    // The operator-to-classical factor is a convention constant.
    let b2 = PoissonBivector::zero(n)
        .with(0, 2, &z(n, 2).mul(&z(n, 2)))
        .unwrap()
        .with(1, 2, &z(n, 0))
        .unwrap();
    let cmp2 = schouten_crosscheck(&b2).unwrap();
    assert!(!poisson_check(&b2).is_zero());
    assert!(cmp2.agrees);
    assert_eq!(cmp2.factor.unwrap(), kappa);
}

#[test]
fn spinor_is_omega_plus_f() {
    let mut s = Sampler::new(8);
    for _ in 0..5 {
        let f = s.holomorphic(4, 3, 3);
        let ps = poisson_spinor(&surface(&f), &chart_volume(2));
        assert_eq!(ps.order(), 1);
        assert_eq!(ps.coeff(0), &chart_volume(2));
        assert_eq!(ps.coeff(1), &FormField::basis(4, 4, 0, f));
    }
    let zero = poisson_spinor(&PoissonBivector::zero(2), &chart_volume(2));
    assert!(zero.coeff(1).is_zero());
}

#[test]
fn rank_two_on_threefold() {
    let n = 3;
    let b = PoissonBivector::zero(n).with(0, 1, &z(n, 2)).unwrap();
    let ps = poisson_spinor(&b, &chart_volume(n));
    assert_eq!(ps.order(), 1);
    assert_eq!(ps.coeff(1).min_degree(), Some(1));
    assert!(ps.coeff(1).sub(&ps.coeff(1).degree_part(1)).is_zero());
}

#[test]
fn stratification_of_surface_cubic() {
    // f = z₁(z₁ − 1)z₂ vanishes on z₁ ∈ {0, 1} and on z₂ = 0.
    let n = 2;
    let f = z(n, 0).mul(&z(n, 0).sub(&AffinePoly::one(4))).mul(&z(n, 1));
    let b = surface(&f);
    let pts = [
        (vec![q(0, 1), q(0, 1), q(1, 2), q(-2, 3)], 2),
        (vec![q(1, 1), q(0, 1), q(5, 2), q(1, 9)], 2),
        (vec![q(1, 3), q(1, 5), q(0, 1), q(0, 1)], 2),
        (vec![q(1, 3), q(1, 5), q(2, 1), q(-1, 4)], 0),
    ];
    let grid: Vec<GridPoint> = pts
        .iter()
        .map(|(x, _)| GridPoint::Exact(x.clone()))
        .collect();
    let out = type_stratify(&b, &grid).unwrap();
    for (sample, (_, expect)) in out.iter().zip(&pts) {
        assert_eq!(sample.type_from_rank, *expect);
        assert!(sample.agrees());
    }
    let float = type_stratify(&b, &[GridPoint::Float(vec![0.3, 0.2, -1.0, 0.5])]).unwrap();
    assert_eq!(float[0].type_from_rank, 0);
    let zero = type_stratify(&PoissonBivector::zero(n), &grid).unwrap();
    assert!(zero.iter().all(|s| s.type_from_rank == n && s.agrees()));
}
