use super::*;
use crate::brackets::lbar_wedge_basis;
use crate::coeff::TrigPoly;
use crate::gc::structure::holomorphic_volume;
use crate::multivector::keyed::combine;
use crate::sample::Sampler;

type S = CliffordSeries<Scalar>;

fn random_series(s: &mut Sampler, m: usize, n: usize) -> S {
    let mut c = vec![CliffordElement::zero(m, 0)];
    for _ in 1..=n {
        c.push(s.clifford(m, 0, 2, 3, |s| s.scalar()));
    }
    S::from_coeffs(c)
}

fn single(x: &CliffordElement<Scalar>, n: usize) -> S {
    let mut s = S::zero(x, n);
    s.set(1, x.clone());
    s
}

#[test]
fn exp_inverse() {
    let mut s = Sampler::new(11);
    for _ in 0..5 {
        let a = random_series(&mut s, 2, 4);
        let prod = exp_series(&a).unwrap().mul(&exp_series(&a.neg()).unwrap());
        assert_eq!(prod, S::one(2, 0, 4));
    }
}

#[test]
fn constant_term_rejected() {
    let one = S::one(2, 0, 3);
    assert_eq!(exp_series(&one).unwrap_err(), GkError::NonzeroConstantTerm);
    assert_eq!(
        cbh_log(&one, &one).unwrap_err(),
        GkError::NonzeroConstantTerm
    );
}

#[test]
fn factorial_roundtrip() {
    let x = CliffordElement::<Scalar>::vector(2, 0, 0);
    let f = vec![CliffordElement::zero(2, 0), x.clone(), x.clone(), x.clone()];
    let s = S::from_factorial(f.clone());
    assert_eq!(s.coeff(3), &x.scale(&Scalar::ratio(1, 6)));
    assert_eq!(s.factorial_coeffs(), f);
}

#[test]
fn cbh_low_orders() {
    let mut s = Sampler::new(5);
    for _ in 0..5 {
        let a1 = s.clifford(2, 0, 2, 3, |s| s.scalar());
        let b1 = s.clifford(2, 0, 2, 3, |s| s.scalar());
        let z = cbh_log(&single(&a1, 3), &single(&b1, 3)).unwrap();
        assert_eq!(z.coeff(1), &a1.add(&b1));
        assert_eq!(z.coeff(2), &a1.commutator(&b1).scale(&Scalar::ratio(1, 2)));
        let third = a1
            .commutator(&a1.commutator(&b1))
            .add(&b1.commutator(&b1.commutator(&a1)))
            .scale(&Scalar::ratio(1, 12));
        assert_eq!(z.coeff(3), &third);
        assert_eq!(
            exp_series(&z).unwrap(),
            exp_series(&single(&a1, 3))
                .unwrap()
                .mul(&exp_series(&single(&b1, 3)).unwrap())
        );
    }
}

#[test]
fn exp_action_matches_product() {
    let mut s = Sampler::new(9);
    let a = random_series(&mut s, 2, 3);
    let psi = s.form(2, 0, 3, |s| s.scalar());
    let direct = exp_action(&a, &psi).unwrap();
    let via = exp_series(&a).unwrap().spin(&FormSeries::constant(&psi, 3));
    assert_eq!(direct, via);
}

fn lbar_family(s: &mut Sampler, j: &GCStructure, n: usize) -> CliffordSeries<TrigPoly> {
    let m = j.m();
    let basis = lbar_wedge_basis(j, 2);
    let mut c = vec![CliffordElement::zero(m, m)];
    for _ in 1..=n {
        let coeffs: Vec<TrigPoly> = basis
            .iter()
            .map(|_| {
                if s.below(2) == 0 {
                    s.trig(m, 1, 2)
                } else {
                    TrigPoly::zero(m)
                }
            })
            .collect();
        c.push(combine(m, m, &coeffs, &basis));
    }
    CliffordSeries::from_coeffs(c)
}

fn lift_cases() -> Vec<(GCStructure, FormField<Scalar>)> {
    let jc = GCStructure::standard_complex(4);
    let js = GCStructure::kahler_symplectic(4);
    let phis = js.canonical_spinor().unwrap().clone();
    vec![(jc, holomorphic_volume(4)), (js, phis)]
}

#[test]
fn lift_congruence_and_first_order() {
    let mut s = Sampler::new(21);
    for (j, phi) in lift_cases() {
        let eps = lbar_family(&mut s, &j, 3);
        let a = real_lift(&eps, &j, &phi).unwrap();
        assert!(lift_congruence_holds(&eps, &a, &j, &phi)
            .unwrap()
            .iter()
            .all(|&b| b));
        assert_eq!(a.coeff(1), &eps.coeff(1).add(&eps.coeff(1).conj()));
        assert!(a.coeffs().iter().all(CliffordElement::is_real));
    }
}

#[test]
fn lift_prefix_and_cbh_route_agree() {
    let mut s = Sampler::new(22);
    for (j, phi) in lift_cases() {
        let eps = lbar_family(&mut s, &j, 3);
        let a3 = real_lift(&eps, &j, &phi).unwrap();
        let a2 = real_lift(&eps.truncate(2), &j, &phi).unwrap();
        assert_eq!(a3.truncate(2), a2);
        // Each Campbell-Hausdorff coefficient of −ε and a maps φ into the canonical line.
        let g = Grading::new(&j).unwrap();
        let z = cbh_log(&eps.neg(), &a3).unwrap();
        let phi_c: FormField<TrigPoly> = phi.lift(4);
        for k in 0..=3 {
            assert!(in_canonical_line(&g, &z.coeff(k).spin(&phi_c)), "order {k}");
        }
    }
}

#[test]
fn transported_annihilator() {
    let mut s = Sampler::new(23);
    let (j, phi) = lift_cases().remove(0);
    let eps = lbar_family(&mut s, &j, 2);
    let a = real_lift(&eps, &j, &phi).unwrap();
    let psi = exp_action(&a, &phi.lift(4)).unwrap();
    for e in j.l_basis() {
        let ad = adjoint_series(&a, &e.lift(4)).unwrap();
        assert!(ad.spin(&psi).is_zero());
    }
}

#[test]
fn lift_rejects_top_degree() {
    let (j, phi) = lift_cases().remove(0);
    let top: CliffordElement<TrigPoly> = lbar_wedge_basis(&j, 4)[0].lift(4);
    let mut eps = CliffordSeries::zero(&top, 2);
    eps.set(1, top);
    assert!(matches!(
        real_lift(&eps, &j, &phi),
        Err(GkError::LiftFailure { order: 1, .. })
    ));
}
