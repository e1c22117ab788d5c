use super::*;
use crate::coeff::{q, q_to_f64, Coeff, Mode, Scalar, TrigPoly, Q};
use crate::error::GkError;
use crate::linalg::inner;
use crate::multivector::{CliffordElement, FormField};
use crate::sample::Sampler;
use crate::series::{exp_action, real_lift, CliffordSeries, FormSeries};

type E = CliffordElement<TrigPoly>;

fn zero_series(n: usize) -> CliffordSeries<TrigPoly> {
    CliffordSeries::zero(&E::zero(4, 4), n)
}

fn mode_one_f() -> TrigPoly {
    mode_one_profile()
}

fn setup() -> (GKOneSpinor, ModeHodge) {
    let gk = GKOneSpinor::flat_kahler(4);
    let h = k_complex(&gk, 4).unwrap();
    (gk, h)
}

fn lift(gk: &GKOneSpinor, eps: &CliffordSeries<TrigPoly>) -> CliffordSeries<TrigPoly> {
    real_lift(eps, gk.j(), gk.phi()).unwrap()
}

fn random_k1(s: &mut Sampler, h: &ModeHodge, k: Mode) -> Vec<Scalar> {
    let v: Vec<Scalar> = (0..16).map(|_| s.scalar()).collect();
    let _ = k;
    h.k1_projector().mul_vec(&v)
}

fn at_mode(k: Mode, v: &[Scalar]) -> FormField<TrigPoly> {
    FormField::from_keyed(4, 4, &std::collections::BTreeMap::from([(k, v.to_vec())]))
}

#[test]
fn k_complex_dimensions() {
    let (_, h) = setup();
    assert_eq!(h.k1_rank(), 4);
    assert_eq!(h.k2_rank(), 8);
    assert_eq!(h.harmonic_at(&Mode::zero()).unwrap().len(), 4);
    for k in Mode::cube(4, 1).into_iter().filter(|k| !k.is_zero()) {
        assert!(h.harmonic_at(&k).unwrap().is_empty(), "{k:?}");
    }
    for v in h.constant_harmonics() {
        assert!(h.in_k1(&v.lift(4)));
        assert!(v.lift::<TrigPoly>(4).d().is_zero());
    }
}

#[test]
fn two_torus_harmonics() {
    let gk = GKOneSpinor::flat_kahler(2);
    let h = k_complex(&gk, 1).unwrap();
    assert_eq!(h.harmonic_at(&Mode::zero()).unwrap().len(), h.k1_rank());
    assert_eq!(h.harmonic_h1().unwrap().len(), h.k1_rank());
}

#[test]
fn k1_maps_into_k2_and_adjoint() {
    let (_, h) = setup();
    let mut s = Sampler::new(3);
    for _ in 0..10 {
        let k = s.mode(4, 2);
        let alpha = random_k1(&mut s, &h, k);
        let block = h.block(&k).unwrap();
        let da = block.d.mul_vec(&alpha);
        assert!(h.in_k2(&at_mode(k, &da)));
        let beta: Vec<Scalar> = (0..16).map(|_| s.scalar()).collect();
        assert_eq!(inner(&da, &beta), inner(&alpha, &block.d_star(&beta)));
    }
}

#[test]
fn hodge_solve_minimal() {
    let (_, h) = setup();
    let zero = FormField::<TrigPoly>::zero(4, 4);
    assert!(h.hodge_solve(&zero).unwrap().is_zero());
    let mut s = Sampler::new(4);
    for _ in 0..10 {
        let k = s.mode(4, 2);
        if k.is_zero() {
            continue;
        }
        let b0 = at_mode(k, &random_k1(&mut s, &h, k));
        let gamma = b0.d();
        let beta = h.hodge_solve(&gamma).unwrap();
        assert_eq!(beta.d(), gamma);
        assert!(h.in_k1(&beta));
        let n = |f: &FormField<TrigPoly>| {
            crate::linalg::norm_sq(&f.by_key().values().flatten().cloned().collect::<Vec<_>>())
        };
        assert!(n(&beta).re <= n(&b0).re);
    }
    // A constant element of K² is closed but not exact.
    let p = h.k2_projector();
    let c = (0..16)
        .map(|i| p.col(i))
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .unwrap();
    assert!(matches!(
        h.hodge_solve(&at_mode(Mode::zero(), &c)),
        Err(GkError::NotExact { .. })
    ));
}

#[test]
fn obstruction_examples() {
    let (gk, h) = setup();
    let eps = bfield_family(&mode_one_f(), 2);
    let a = lift(&gk, &eps);
    let ob1 = obstruction_term(&gk, &h, &a, &zero_series(2), 1).unwrap();
    assert_eq!(ob1, a.coeff(1).spin(&gk.psi().lift(4)).d());
    let report = solve_stability(&gk, &h, &a, None).unwrap();
    // Order 2 against the product expansion with b₂ = 0.
    let mut b = report.b.clone();
    b.set(2, E::zero(4, 4));
    let naive = expanded_spinor(&a, &b, gk.psi()).unwrap().d();
    assert_eq!(&report.obstructions[1], naive.coeff(2));
    let constant = poisson_family(Scalar::one(), 3);
    let ac = lift(&gk, &constant);
    for k in 1..=3 {
        assert!(obstruction_term(&gk, &h, &ac, &zero_series(3), k)
            .unwrap()
            .is_zero());
    }
}

#[test]
fn constant_deformation_is_untouched() {
    let (gk, h) = setup();
    let a = lift(&gk, &poisson_family(Scalar::ratio(1, 3), 3));
    let r = solve_stability(&gk, &h, &a, None).unwrap();
    assert!(r.b.is_zero());
    assert_eq!(r.psi_t, exp_action(&a, &gk.psi().lift(4)).unwrap());
    assert!(r.passed());
    let check = verify_family(&r, &gk, &[vec![0.3, -1.1, 0.7, 2.0]], 1e-6);
    assert!(check.passed(), "{check:?}");
}

#[test]
fn mode_one_end_to_end() {
    let (gk, h) = setup();
    let a = lift(&gk, &bfield_family(&mode_one_f(), 3));
    let r = solve_stability(&gk, &h, &a, None).unwrap();
    assert!(r.passed());
    assert!(!r.b.is_zero());
    let phi = gk.phi().lift::<TrigPoly>(4);
    for k in 1..=3 {
        assert!(r.b.coeff(k).is_real());
        assert!(r.b.coeff(k).spin(&phi).is_zero());
        assert!(h.in_k1(&r.betas[k - 1]));
        assert!(h.in_k2(&r.obstructions[k - 1]));
    }
    assert_eq!(expanded_spinor(&a, &r.b, gk.psi()).unwrap(), r.psi_t);
    let samples = vec![vec![0.0; 4], vec![0.4, 1.3, -0.2, 2.9]];
    let check = verify_family(&r, &gk, &samples, 1e-6);
    assert!(check.closed && check.annihilator_transported);
    assert!(check.floats_pass_at(0.01), "{check:?}");
    // At t = 1/10 the defect is the O(t⁴) truncation error of unit-size data.
    assert!(check.max_commutator_at(0.1) < 1e-4, "{check:?}");
}

#[test]
fn small_mode_one_family_passes_float_checks() {
    let (gk, h) = setup();
    let f = mode_one_f().scale(&Scalar::ratio(1, 4));
    let a = lift(&gk, &bfield_family(&f, 3));
    let r = solve_stability(&gk, &h, &a, None).unwrap();
    let samples = vec![
        vec![0.0; 4],
        vec![0.4, 1.3, -0.2, 2.9],
        vec![3.0, -2.2, 0.1, 5.5],
    ];
    let check = verify_family(&r, &gk, &samples, 1e-6);
    assert!(check.passed(), "{check:?}");
}

#[test]
fn truncation_leaves_next_order_residual() {
    let (gk, h) = setup();
    let eps = bfield_family(&mode_one_f(), 3);
    let a3 = lift(&gk, &eps);
    let r = solve_stability(&gk, &h, &a3.truncate(2), None).unwrap();
    let mut b = zero_series(3);
    for k in 1..=2 {
        b.set(k, r.b.coeff(k).clone());
    }
    let next = expanded_spinor(&a3, &b, gk.psi()).unwrap().d();
    assert!(next.coeff(0).is_zero() && next.coeff(1).is_zero() && next.coeff(2).is_zero());
    assert!(!next.coeff(3).is_zero());
}

#[test]
fn harmonic_shift_changes_class() {
    let (gk, h) = setup();
    let a = lift(&gk, &bfield_family(&mode_one_f(), 2));
    let harm = h.constant_harmonics();
    let s1 = harm[0].lift::<TrigPoly>(4);
    let s2 = harm[1].scale(&Scalar::ratio(-1, 2)).lift::<TrigPoly>(4);
    let r1 = solve_stability(&gk, &h, &a, Some(&s1)).unwrap();
    let r2 = solve_stability(&gk, &h, &a, Some(&s2)).unwrap();
    assert!(r1.passed() && r2.passed());
    let c1 = de_rham_class(&r1.psi_t);
    let c2 = de_rham_class(&r2.psi_t);
    assert_eq!(c1[0], *gk.psi());
    assert_eq!(
        c1[1].sub(&c2[1]),
        harm[0].sub(&harm[1].scale(&Scalar::ratio(-1, 2)))
    );
}

#[test]
fn exact_forms_have_no_class() {
    let f = FormField::<TrigPoly>::basis(
        4,
        4,
        0b0011,
        TrigPoly::exp_mode(4, &[0, 1, 0, 0], Scalar::one()),
    )
    .d();
    let s = FormSeries::constant(&f, 1);
    assert!(de_rham_class(&s).iter().all(FormField::is_zero));
}

#[test]
fn mode_budget_enforced() {
    let gk = GKOneSpinor::flat_kahler(4);
    let h = k_complex(&gk, 2).unwrap();
    let a = lift(&gk, &bfield_family(&mode_one_f(), 3));
    assert!(matches!(
        solve_stability(&gk, &h, &a, None),
        Err(GkError::ModeCapExceeded { .. })
    ));
}

#[test]
fn invalid_shift_rejected() {
    let (gk, h) = setup();
    let a = lift(&gk, &bfield_family(&mode_one_f(), 1));
    let bad = gk.psi().lift::<TrigPoly>(4);
    assert!(matches!(
        solve_stability(&gk, &h, &a, Some(&bad)),
        Err(GkError::Invalid(_))
    ));
}

#[test]
fn majorant_coefficients() {
    for c in [q(1, 4), q(1, 1), q(4, 1)] {
        let m = majorant_coeffs(&c, 2);
        assert_eq!(m[1], q(1, 16));
        assert_eq!(m[2], &c / Q::from_integer(64.into()));
        // (M²)₂ = M₁² = 1/256.
        let cert = majorant_certificate(
            &c,
            &(Q::from_integer(1.into()) / &c),
            &Q::from_integer(0.into()),
            &Q::from_integer(0.into()),
            200,
            None,
        );
        assert!(
            cert.squares_dominated && cert.exponential_dominated,
            "{cert:?}"
        );
    }
}

#[test]
fn exp_bound_is_upper() {
    for l in [q(1, 4), q(1, 1), q(4, 1), q(7, 2)] {
        let ub = q_to_f64(&exp_upper_bound(&l));
        let e = q_to_f64(&l).exp();
        assert!(ub >= e && ub < e * (1.0 + 1e-9), "{l} {ub} {e}");
    }
}

#[test]
fn certificate_for_runs() {
    let (gk, h) = setup();
    let zero = Q::from_integer(0.into());
    let one = Q::from_integer(1.into());
    let trivial = solve_stability(&gk, &h, &zero_series(3), None).unwrap();
    assert!(trivial.psi_t == FormSeries::constant(&gk.psi().lift(4), 3));
    let cert = majorant_certificate(&one, &one, &zero, &zero, 20, Some(&trivial));
    let n = cert.norms.as_ref().unwrap();
    assert!(cert.passed() && n.k1_min == zero && n.k2_min == zero);
    let a = lift(&gk, &poisson_family(Scalar::ratio(1, 200), 3));
    let r = solve_stability(&gk, &h, &a, None).unwrap();
    let cert = majorant_certificate(&one, &one, &one, &one, 20, Some(&r));
    let n = cert.norms.as_ref().unwrap();
    assert!(n.sum_below_one && n.z_dominated, "{cert:?}");
}

#[test]
fn random_mode_one_deformations() {
    let (gk, h) = setup();
    let mut s = Sampler::new(77);
    for _ in 0..3 {
        let f = s.trig(4, 1, 2);
        let a = lift(&gk, &bfield_family(&f, 2));
        let r = solve_stability(&gk, &h, &a, None).unwrap();
        assert!(r.passed());
        assert_eq!(expanded_spinor(&a, &r.b, gk.psi()).unwrap(), r.psi_t);
    }
}
