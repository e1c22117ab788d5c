//! Seeded randomized identity suites.
//!
//! Every case draws its inputs from a [`Sampler`] seeded by [`case_seed`], so
//! a counterexample is reproduced from its case seed alone. The same checks
//! back the property tests, the acceptance harness and the `identities`
//! command.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::OnceLock;

use crate::brackets::{
    courant_bracket, decompose_lbar, integrability_witness, lbar_wedge_basis,
    maurer_cartan_residual, schouten, schouten_operator, Monomial,
};
use crate::coeff::{q, AffinePoly, Coeff, Mode, Scalar, TrigPoly, Q};
use crate::gc::spinor::annihilator_vectors;
use crate::gc::structure::holomorphic_volume;
use crate::gc::{
    annihilator, form_as_clifford, induced_structure, transport, u_decompose, GCStructure, Grading,
};
use crate::linalg::{inner, norm_sq, Matrix};
use crate::multivector::{pairing, CliffordElement, FormField};
use crate::poisson::{
    chart_volume, mc_linkage, poisson_spinor, spinor_at_one, type_stratify, GridPoint,
    PoissonBivector,
};
use crate::sample::Sampler;
use crate::series::{
    adjoint_series, cbh_log, exp_action, exp_series, lift_congruence_holds, real_lift,
    CliffordSeries,
};
use crate::stability::{
    expanded_spinor, k_complex, series_support, solve_stability, square_domination_failure,
    GKOneSpinor, ModeHodge,
};

pub type CaseResult = std::result::Result<(), String>;

/// A named randomized identity with its default case count.
#[derive(Clone, Copy)]
pub struct Identity {
    pub name: &'static str,
    pub check: fn(&mut Sampler) -> CaseResult,
    pub cases: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub case_seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    /// The first few failures, in case order.
    pub counterexamples: Vec<Counterexample>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const MAX_COUNTEREXAMPLES: usize = 3;

/// Seed of case `i` of suite `name` under base seed `base` (FNV-1a mix).
pub fn case_seed(base: u64, name: &str, i: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ base;
    for b in name.bytes().chain((i as u64).to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Runs one case; a panic inside the check counts as a failure.
pub fn run_case(id: &Identity, case_seed: u64) -> CaseResult {
    let mut s = Sampler::new(case_seed);
    match catch_unwind(AssertUnwindSafe(|| (id.check)(&mut s))) {
        Ok(r) => r,
        Err(p) => Err(format!(
            "panic: {}",
            p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default()
        )),
    }
}

pub fn run_identity(id: &Identity, seed: u64, cases: usize) -> SuiteOutcome {
    let mut failures = 0;
    let mut counterexamples = Vec::new();
    for i in 0..cases {
        let cs = case_seed(seed, id.name, i);
        if let Err(message) = run_case(id, cs) {
            failures += 1;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(Counterexample {
                    case_seed: cs,
                    message,
                });
            }
        }
    }
    SuiteOutcome {
        name: id.name.to_string(),
        cases,
        failures,
        counterexamples,
    }
}

pub fn find(name: &str) -> Option<Identity> {
    catalogue().into_iter().find(|i| i.name == name)
}

/// All suites in report order.
pub fn catalogue() -> Vec<Identity> {
    macro_rules! id {
        ($name:expr, $check:expr, $cases:expr) => {
            Identity {
                name: $name,
                check: $check,
                cases: $cases,
            }
        };
    }
    vec![
        id!(
            "ring-axioms-scalar",
            |s| ring_axioms(&s.scalar(), &s.scalar(), &s.scalar()),
            200
        ),
        id!(
            "ring-axioms-trig",
            |s| ring_axioms(&s.trig(2, 2, 3), &s.trig(2, 2, 3), &s.trig(2, 2, 3)),
            200
        ),
        id!(
            "ring-axioms-affine",
            |s| ring_axioms(&s.affine(2, 3, 3), &s.affine(2, 3, 3), &s.affine(2, 3, 3)),
            200
        ),
        id!("real-product-real", real_product_real, 200),
        id!("spin-module-m2", |s| spin_module(s, 2), 200),
        id!("spin-module-m4", |s| spin_module(s, 4), 200),
        id!("clifford-relation-m2", |s| clifford_relation(s, 2), 200),
        id!("clifford-relation-m4", |s| clifford_relation(s, 4), 200),
        id!("d-squared-m2", |s| d_squared(s, 2), 200),
        id!("d-squared-m4", |s| d_squared(s, 4), 200),
        id!("annihilator-idempotent", annihilator_idempotent, 30),
        id!("u-decompose-eigen", u_decompose_eigen, 30),
        id!("lbar-wedge-level", lbar_wedge_level, 30),
        id!("ker1-image", ker1_image, 30),
        id!("ker2-no-extreme-levels", ker2_no_extreme_levels, 30),
        id!("courant-lie-m2", |s| courant_is_lie(s, 2), 50),
        id!("courant-lie-m4", |s| courant_is_lie(s, 4), 20),
        id!("courant-closure", courant_closure, 20),
        id!("schouten-two-path", schouten_two_path, 10),
        id!("schouten-ad-nilpotent", schouten_ad_nilpotent, 10),
        id!("maurer-cartan-two-path", maurer_cartan_two_path, 10),
        id!("cbh-reexponentiation", cbh_reexponentiation, 50),
        id!("lift-real-congruence", lift_real_congruence, 20),
        id!("adjoint-annihilates", adjoint_annihilates, 30),
        id!("solver-brute-force-t2", solver_brute_force_t2, 10),
        id!("hodge-minimal", hodge_minimal, 20),
        id!("majorant-square", majorant_square, 5),
        id!("poisson-type-rank", poisson_type_rank, 10),
        id!("poisson-purity", poisson_purity, 10),
        id!("poisson-mc-linkage", poisson_mc_linkage, 5),
    ]
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> CaseResult {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn fail<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

// Coefficient rings.

pub fn ring_axioms<C: Coeff>(a: &C, b: &C, c: &C) -> CaseResult {
    ensure(a.mul(b).mul(c) == a.mul(&b.mul(c)), || {
        format!("associativity: {a:?} {b:?} {c:?}")
    })?;
    ensure(a.mul(&b.add(c)) == a.mul(b).add(&a.mul(c)), || {
        format!("distributivity: {a:?} {b:?} {c:?}")
    })?;
    ensure(a.mul(b) == b.mul(a), || {
        format!("commutativity: {a:?} {b:?}")
    })?;
    ensure(a.add(b).add(c) == a.add(&b.add(c)), || {
        format!("additive associativity: {a:?} {b:?} {c:?}")
    })?;
    ensure(a.conj().conj() == *a, || format!("conj involution: {a:?}"))?;
    ensure(a.mul(b).conj() == a.conj().mul(&b.conj()), || {
        format!("conj multiplicative: {a:?} {b:?}")
    })?;
    ensure(a.add(b).conj() == a.conj().add(&b.conj()), || {
        format!("conj additive: {a:?} {b:?}")
    })
}

fn real_product_real(s: &mut Sampler) -> CaseResult {
    let f = s.real_trig(2, 2, 2);
    let g = s.real_trig(2, 2, 2);
    ensure(f.mul(&g).is_real_valued(), || format!("{f:?} * {g:?}"))
}

// Clifford module.

fn trig_form(s: &mut Sampler, m: usize, terms: usize) -> FormField<TrigPoly> {
    s.form(m, m, terms, |s| s.trig(m, 2, 2))
}

fn spin_module(s: &mut Sampler, m: usize) -> CaseResult {
    let x = s.clifford(m, m, 3, 3, |s| s.trig(m, 2, 2));
    let y = s.clifford(m, m, 3, 3, |s| s.trig(m, 2, 2));
    let a = trig_form(s, m, 3);
    ensure(x.mul(&y).spin(&a) == x.spin(&y.spin(&a)), || {
        format!("x={x:?} y={y:?} α={a:?}")
    })
}

fn clifford_relation(s: &mut Sampler, m: usize) -> CaseResult {
    let e = s.degree_one(m, m, |s| s.trig(m, 2, 2));
    let f = s.degree_one(m, m, |s| s.trig(m, 2, 2));
    let a = trig_form(s, m, 3);
    let lhs = e.spin(&f.spin(&a)).add(&f.spin(&e.spin(&a)));
    let p = pairing(&e, &f).map_err(fail)?;
    let rhs = a.mul_coeff(&p.scale(&Scalar::int(2)));
    ensure(lhs == rhs, || format!("E={e:?} F={f:?} α={a:?}"))
}

fn d_squared(s: &mut Sampler, m: usize) -> CaseResult {
    let a = trig_form(s, m, 4);
    ensure(a.d().d().is_zero(), || format!("α={a:?}"))
}

// Generalized complex structures.

/// Random real constant element `Σ c_ij g_i g_j` built from vectors
/// (`covectors = false`) or covectors; its spin action is nilpotent.
fn random_two_vector(s: &mut Sampler, m: usize, covectors: bool) -> CliffordElement<Scalar> {
    let off = if covectors { m } else { 0 };
    let mut out = CliffordElement::zero(m, 0);
    for i in 0..m {
        for j in i + 1..m {
            if s.below(2) == 0 {
                let w = (1u32 << (off + i)) | (1u32 << (off + j));
                out.add_term(w, &s.real_scalar());
            }
        }
    }
    out
}

/// `e^{B}e^{β}φ₀` for `φ₀ ∈ {e^{iω}, dz₁∧…∧dz_n}` with random constant real
/// `B` and `β`, together with its transported annihilator.
pub fn random_pure_spinor(
    s: &mut Sampler,
    m: usize,
) -> Result<(FormField<Scalar>, Vec<CliffordElement<Scalar>>), String> {
    let base = if s.below(2) == 0 {
        GCStructure::standard_symplectic(m)
    } else {
        GCStructure::standard_complex(m)
    };
    let phi0 = base
        .canonical_spinor()
        .cloned()
        .ok_or("base structure without spinor")?;
    let beta = random_two_vector(s, m, false);
    let t1 = transport(&beta, &phi0, &base.l_basis()).map_err(fail)?;
    let b = random_two_vector(s, m, true);
    let t2 = transport(&b, &t1.phi, &t1.annihilator).map_err(fail)?;
    Ok((t2.phi, t2.annihilator))
}

fn random_structure(s: &mut Sampler, m: usize) -> Result<GCStructure, String> {
    let (phi, _) = random_pure_spinor(s, m)?;
    induced_structure(&phi).map_err(fail)
}

fn same_span(m: usize, a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    let mut all = a.to_vec();
    all.extend_from_slice(b);
    let ra = Matrix::from_cols(2 * m, a).rank();
    ra == Matrix::from_cols(2 * m, b).rank() && ra == Matrix::from_cols(2 * m, &all).rank()
}

fn annihilator_idempotent(s: &mut Sampler) -> CaseResult {
    let m = 2 + 2 * s.below(2);
    let (phi, transported) = random_pure_spinor(s, m)?;
    ensure(transported.iter().all(|e| e.spin(&phi).is_zero()), || {
        "transported annihilator".into()
    })?;
    let j = induced_structure(&phi).map_err(fail)?;
    ensure(j.validate().passed(), || {
        format!("J_φ invalid for φ={phi:?}")
    })?;
    // Recover the canonical line from the matrix alone.
    let bare = GCStructure::from_matrix(m, j.matrix().clone());
    let p = Grading::new(&bare)
        .map_err(fail)?
        .projector(-(m as i32) / 2);
    let col = (0..p.cols())
        .map(|c| p.col(c))
        .find(|c| c.iter().any(|x| !x.is_zero()));
    let psi = FormField::from_vec(m, &col.ok_or("empty canonical line")?);
    let l_phi = annihilator_vectors(&phi);
    ensure(
        l_phi.len() == m && same_span(m, &l_phi, &annihilator_vectors(&psi)),
        || format!("annihilators differ for φ={phi:?}"),
    )
}

fn u_decompose_eigen(s: &mut Sampler) -> CaseResult {
    let m = 2 + 2 * s.below(2);
    let j = random_structure(s, m)?;
    let a = s.form(m, 0, 4, |s| s.scalar());
    let parts = u_decompose(&a, &j).map_err(fail)?;
    let sigma = Grading::new(&j).map_err(fail)?.sigma().clone();
    let mut sum = FormField::zero(m, 0);
    for (k, c) in &parts {
        ensure(
            sigma.spin(c) == c.scale(&Scalar::i_times(*k as i64)),
            || format!("level {k} of {a:?}"),
        )?;
        sum.add_assign(c);
    }
    ensure(sum == a, || format!("components do not sum to {a:?}"))
}

fn random_combination(
    s: &mut Sampler,
    m: usize,
    basis: &[CliffordElement<Scalar>],
) -> CliffordElement<Scalar> {
    let mut out = CliffordElement::zero(m, 0);
    for b in basis {
        if s.below(3) != 0 {
            out.add_assign(&b.scale(&s.scalar()));
        }
    }
    out
}

fn lbar_wedge_level(s: &mut Sampler) -> CaseResult {
    let m = 2 + 2 * s.below(2);
    let j = random_structure(s, m)?;
    let phi = j.canonical_spinor().cloned().ok_or("no canonical spinor")?;
    let g = Grading::new(&j).map_err(fail)?;
    let qd = 1 + s.below(m);
    let x = random_combination(s, m, &lbar_wedge_basis(&j, qd));
    let r = x.spin(&phi);
    ensure(g.project(&r, -g.n() + qd as i32) == r, || {
        format!("Λ^{qd}L̄ element {x:?} leaves its level")
    })?;
    ensure(x.is_zero() == r.is_zero(), || {
        format!("Λ^{qd}L̄ element {x:?} acts as zero")
    })
}

fn flat_t4() -> &'static GKOneSpinor {
    static GK: OnceLock<GKOneSpinor> = OnceLock::new();
    GK.get_or_init(|| GKOneSpinor::flat_kahler(4))
}

fn flat_t2() -> &'static GKOneSpinor {
    static GK: OnceLock<GKOneSpinor> = OnceLock::new();
    GK.get_or_init(|| GKOneSpinor::flat_kahler(2))
}

fn flat_t4_hodge() -> &'static ModeHodge {
    static H: OnceLock<ModeHodge> = OnceLock::new();
    H.get_or_init(|| k_complex(flat_t4(), 1).expect("flat model complex"))
}

fn levels_of(gk: &GKOneSpinor, alpha: &FormField<Scalar>) -> BTreeSet<(i32, i32)> {
    gk.bigrading().decompose(alpha).into_keys().collect()
}

fn ker1_image(s: &mut Sampler) -> CaseResult {
    let gk = flat_t4();
    let (l, lbar) = (gk.j().l_basis(), gk.j().lbar_basis());
    let mut b = CliffordElement::zero(4, 0);
    for _ in 0..2 {
        let e = random_combination(s, 4, &l);
        let fbar = random_combination(s, 4, &lbar);
        let p = e.mul(&fbar);
        let sym = p.add(&p.conj());
        let skew = p.sub(&p.conj()).scale(&Scalar::i());
        b.add_assign(&sym.scale(&s.real_scalar()));
        b.add_assign(&skew.scale(&s.real_scalar()));
    }
    ensure(b.is_real(), || format!("{b:?} is not real"))?;
    let n = gk.n();
    let allowed = BTreeSet::from([(0, -n), (0, -n + 2)]);
    let got = levels_of(gk, &b.spin(gk.psi()));
    ensure(got.is_subset(&allowed), || {
        format!("b={b:?} reaches {got:?}")
    })
}

fn ker2_no_extreme_levels(s: &mut Sampler) -> CaseResult {
    let gk = flat_t4();
    let (l, lbar) = (gk.j().l_basis(), gk.j().lbar_basis());
    let mut h = CliffordElement::zero(4, 0);
    for _ in 0..2 {
        let e1 = random_combination(s, 4, &l);
        let x = if s.below(2) == 0 {
            e1.mul(&random_combination(s, 4, &l))
                .mul(&random_combination(s, 4, &lbar))
        } else {
            e1.mul(&random_combination(s, 4, &lbar))
                .mul(&random_combination(s, 4, &lbar))
        };
        h.add_assign(&x.add(&x.conj()));
    }
    h.add_assign(&s.degree_one(4, 0, |s| s.real_scalar()));
    // h lies in the real part of k̃er²: h·φ ∈ CL¹·K_J = U^{−n} ⊕ U^{−n+1}.
    let g = gk.bigrading().first();
    let hphi = h.spin(gk.phi());
    let low = g.project(&hphi, -g.n()).add(&g.project(&hphi, -g.n() + 1));
    ensure(low == hphi, || {
        format!("h={h:?} is not in the second kernel")
    })?;
    let n = gk.n();
    let got = levels_of(gk, &h.spin(gk.psi()));
    ensure(
        !got.contains(&(3, -n + 3)) && !got.contains(&(-3, -n + 3)),
        || format!("h={h:?} reaches {got:?}"),
    )
}

// Brackets.

/// `[v, w]^j = v^i∂_i w^j − w^i∂_i v^j`.
pub fn lie_bracket_oracle(
    m: usize,
    v: &CliffordElement<TrigPoly>,
    w: &CliffordElement<TrigPoly>,
) -> Result<CliffordElement<TrigPoly>, String> {
    let a = v.to_vector().map_err(fail)?;
    let b = w.to_vector().map_err(fail)?;
    let mut out = vec![TrigPoly::zero(m); 2 * m];
    for j in 0..m {
        for i in 0..m {
            out[j] = out[j]
                .add(&a[i].mul(&b[j].partial(i)))
                .sub(&b[i].mul(&a[j].partial(i)));
        }
    }
    Ok(CliffordElement::from_vector(m, m, &out))
}

fn vector_field(s: &mut Sampler, m: usize) -> CliffordElement<TrigPoly> {
    let v: Vec<TrigPoly> = (0..2 * m)
        .map(|g| {
            if g < m {
                s.trig(m, 2, 2)
            } else {
                TrigPoly::zero(m)
            }
        })
        .collect();
    CliffordElement::from_vector(m, m, &v)
}

fn courant_is_lie(s: &mut Sampler, m: usize) -> CaseResult {
    let v = vector_field(s, m);
    let w = vector_field(s, m);
    let co = courant_bracket(&v, &w).map_err(fail)?;
    ensure(co == lie_bracket_oracle(m, &v, &w)?, || {
        format!("v={v:?} w={w:?}")
    })
}

/// Exact 1-form-derived `dA` plus a constant real 2-form, as a Clifford element.
fn closed_bfield(s: &mut Sampler, m: usize) -> CliffordElement<TrigPoly> {
    let mut a = FormField::<TrigPoly>::zero(m, m);
    for i in 0..m {
        if s.below(2) == 0 {
            a.add_term(1 << i, &s.real_trig(m, 1, 2));
        }
    }
    form_as_clifford(&a.d()).add(&random_two_vector(s, m, true).lift(m))
}

/// An integrable non-constant pure spinor `e^{B}φ` with closed `B`.
pub fn random_integrable_spinor(
    s: &mut Sampler,
    m: usize,
) -> Result<(FormField<TrigPoly>, Vec<CliffordElement<TrigPoly>>), String> {
    let (phi, l) = random_pure_spinor(s, m)?;
    let b = closed_bfield(s, m);
    let t = transport(&b, &phi, &l).map_err(fail)?;
    Ok((t.phi, t.annihilator))
}

fn courant_closure(s: &mut Sampler) -> CaseResult {
    let m = 2 + 2 * s.below(2);
    let (phi, l) = random_integrable_spinor(s, m)?;
    ensure(l.iter().all(|e| e.spin(&phi).is_zero()), || {
        "transported annihilator".into()
    })?;
    integrability_witness(&phi).map_err(fail)?;
    let e1 = l[s.below(m)].mul_coeff(&s.trig(m, 1, 2));
    let e2 = l[s.below(m)].mul_coeff(&s.trig(m, 1, 2));
    let br = courant_bracket(&e1, &e2).map_err(fail)?;
    ensure(br.spin(&phi).is_zero(), || {
        format!("[E₁,E₂] does not annihilate φ={phi:?}")
    })
}

/// Random `Σ f·Ē_iĒ_j` on `T⁴` for the standard complex structure.
pub fn random_lbar2(
    s: &mut Sampler,
    j: &GCStructure,
    terms: usize,
    mode_cap: i64,
) -> Vec<Monomial<TrigPoly>> {
    let m = j.m();
    let lb: Vec<CliffordElement<TrigPoly>> = j.lbar_basis().iter().map(|e| e.lift(m)).collect();
    (0..terms)
        .map(|_| {
            let i = s.below(m - 1);
            let k = i + 1 + s.below(m - 1 - i);
            vec![lb[i].mul_coeff(&s.trig(m, mode_cap, 2)), lb[k].clone()]
        })
        .collect()
}

fn schouten_two_path(s: &mut Sampler) -> CaseResult {
    let j = GCStructure::standard_complex(4);
    let e1 = random_lbar2(s, &j, 2, 1);
    let e2 = random_lbar2(s, &j, 2, 1);
    schouten(&e1, &e2, &j, 4).map(|_| ()).map_err(fail)
}

fn schouten_ad_nilpotent(s: &mut Sampler) -> CaseResult {
    let j = GCStructure::standard_complex(4);
    let eps = crate::brackets::monomial_sum(4, 4, &random_lbar2(s, &j, 2, 1));
    let n = schouten_operator(&eps, &eps).map_err(fail)?;
    decompose_lbar(&n, &j, 3).map_err(fail)?;
    ensure(eps.commutator(&n).is_zero(), || {
        format!("ad_ε N ≠ 0 for ε={eps:?}")
    })
}

fn maurer_cartan_two_path(s: &mut Sampler) -> CaseResult {
    let j = GCStructure::standard_complex(4);
    let eps = random_lbar2(s, &j, 2, 1);
    let mc = maurer_cartan_residual(&eps, &j, &holomorphic_volume(4), 4).map_err(fail)?;
    ensure(mc.agrees, || {
        format!("projection and bracket paths differ for {eps:?}")
    })
}

// Series.

fn random_series(s: &mut Sampler, m: usize, n: usize) -> CliffordSeries<Scalar> {
    let mut c = vec![CliffordElement::zero(m, 0)];
    for _ in 1..=n {
        c.push(s.clifford(m, 0, 2, 3, |s| s.scalar()));
    }
    CliffordSeries::from_coeffs(c)
}

fn cbh_reexponentiation(s: &mut Sampler) -> CaseResult {
    let n = 1 + s.below(4);
    let a = random_series(s, 2, n);
    let b = random_series(s, 2, n);
    let z = cbh_log(&a, &b).map_err(fail)?;
    let lhs = exp_series(&z).map_err(fail)?;
    let rhs = exp_series(&a)
        .map_err(fail)?
        .mul(&exp_series(&b).map_err(fail)?);
    ensure(lhs == rhs, || format!("a={a:?} b={b:?}"))
}

fn lift_real_congruence(s: &mut Sampler) -> CaseResult {
    let j = GCStructure::standard_complex(4);
    let phi = holomorphic_volume(4);
    let n = 1 + s.below(3);
    let mut c = vec![CliffordElement::zero(4, 4)];
    for k in 1..=n {
        c.push(if k <= 2 {
            crate::brackets::monomial_sum(4, 4, &random_lbar2(s, &j, 2, 1))
        } else {
            CliffordElement::zero(4, 4)
        });
    }
    let eps = CliffordSeries::from_coeffs(c);
    let a = real_lift(&eps, &j, &phi).map_err(fail)?;
    ensure(
        *a.coeff(1) == eps.coeff(1).add(&eps.coeff(1).conj()),
        || "a₁ ≠ ε₁ + ε̄₁".into(),
    )?;
    ensure(a.coeffs().iter().all(|x| x.is_real()), || {
        "lift is not conj-fixed".into()
    })?;
    let cong = lift_congruence_holds(&eps, &a, &j, &phi).map_err(fail)?;
    ensure(cong.iter().all(|&b| b), || {
        format!("congruence fails: {cong:?}")
    })?;
    if n >= 2 {
        let shorter = real_lift(&eps.truncate(n - 1), &j, &phi).map_err(fail)?;
        ensure(shorter == a.truncate(n - 1), || {
            "lifts of different orders disagree".into()
        })?;
    }
    Ok(())
}

fn adjoint_annihilates(s: &mut Sampler) -> CaseResult {
    let j = GCStructure::standard_complex(2);
    let phi = holomorphic_volume(2);
    let n = 1 + s.below(4);
    let a = random_series(s, 2, n);
    let deformed = exp_action(&a, &phi).map_err(fail)?;
    for e in j.l_basis() {
        let ad = adjoint_series(&a, &e).map_err(fail)?;
        ensure(ad.spin(&deformed).is_zero(), || {
            format!("Ad(e^a)E does not annihilate e^aφ, a={a:?}")
        })?;
    }
    Ok(())
}

// Stability solver.

fn solver_brute_force_t2(s: &mut Sampler) -> CaseResult {
    let gk = flat_t2();
    let n = 1 + s.below(3);
    let w = lbar_wedge_basis(gk.j(), 2)[0].lift::<TrigPoly>(2);
    let mut c = vec![CliffordElement::zero(2, 2)];
    for k in 1..=n {
        c.push(if k <= 2 {
            w.mul_coeff(&s.trig(2, 1, 2))
        } else {
            CliffordElement::zero(2, 2)
        });
    }
    let eps = CliffordSeries::from_coeffs(c);
    let a = real_lift(&eps, gk.j(), gk.phi()).map_err(fail)?;
    let hodge = k_complex(gk, n as u32 * series_support(&a).max(1)).map_err(fail)?;
    let report = solve_stability(gk, &hodge, &a, None).map_err(fail)?;
    ensure(report.passed(), || {
        format!("closed={:?} phi_fixed={}", report.closed, report.phi_fixed)
    })?;
    let phi: FormField<TrigPoly> = gk.phi().lift(2);
    ensure(
        report.b.coeffs().iter().all(|b| b.spin(&phi).is_zero()),
        || "b_k·φ ≠ 0".into(),
    )?;
    ensure(report.obstructions.iter().all(|o| hodge.in_k2(o)), || {
        "obstruction outside K²".into()
    })?;
    let expanded = expanded_spinor(&a, &report.b, gk.psi()).map_err(fail)?;
    ensure(expanded.d().is_zero(), || {
        format!("expanded product not closed for ε={eps:?}")
    })
}

fn hodge_minimal(s: &mut Sampler) -> CaseResult {
    let h = flat_t4_hodge();
    let k = Mode::from_slice(&(0..4).map(|_| s.int(-1, 1)).collect::<Vec<_>>());
    let v: Vec<Scalar> = (0..16).map(|_| s.scalar()).collect();
    let beta0 = h.k1_projector().mul_vec(&v);
    let at = |x: &[Scalar]| {
        FormField::<TrigPoly>::from_keyed(4, 4, &[(k, x.to_vec())].into_iter().collect())
    };
    let gamma = at(&beta0).d();
    let beta = h.hodge_solve(&gamma).map_err(fail)?;
    ensure(beta.d() == gamma && h.in_k1(&beta), || {
        format!("not a K¹ preimage at {k:?}")
    })?;
    let bv = beta
        .by_key()
        .remove(&k)
        .unwrap_or_else(|| vec![Scalar::zero(); 16]);
    for harm in h.harmonic_at(&k).map_err(fail)? {
        ensure(inner(&harm, &bv).is_zero(), || {
            format!("not orthogonal to ker d at {k:?}")
        })?;
    }
    ensure(norm_sq(&bv).re <= norm_sq(&beta0).re, || {
        format!("not minimal at {k:?}")
    })
}

fn majorant_square(s: &mut Sampler) -> CaseResult {
    let d = s.int(1, 4);
    let c: Q = q(s.int(1, 4 * d), d);
    ensure(square_domination_failure(&c, 200).is_none(), || {
        format!("c={c}")
    })
}

// Poisson chart examples.

fn chart_z(n: usize, j: usize) -> AffinePoly {
    let mut alpha = vec![0u32; n];
    alpha[j] = 1;
    AffinePoly::holomorphic_monomial(2 * n, &alpha, Scalar::one())
}

/// `β = z₁·g·∂₁∧∂₂` for a random quadratic `g`, so `z₁ = 0` is in the zero locus.
fn random_cubic_bivector(s: &mut Sampler) -> Result<(AffinePoly, PoissonBivector), String> {
    let g = s.holomorphic(4, 2, 3);
    let f = chart_z(2, 0).mul(&g);
    let beta = PoissonBivector::zero(2).with(0, 1, &f).map_err(fail)?;
    Ok((f, beta))
}

fn rational_point(s: &mut Sampler, dim: usize) -> Vec<Q> {
    (0..dim).map(|_| q(s.int(-6, 6), s.int(1, 3))).collect()
}

fn poisson_type_rank(s: &mut Sampler) -> CaseResult {
    let (f, beta) = random_cubic_bivector(s)?;
    let mut grid: Vec<GridPoint> = (0..4)
        .map(|_| GridPoint::Exact(rational_point(s, 4)))
        .collect();
    let mut on_locus = rational_point(s, 4);
    on_locus[0] = q(0, 1);
    on_locus[1] = q(0, 1);
    grid.push(GridPoint::Exact(on_locus));
    let samples = type_stratify(&beta, &grid).map_err(fail)?;
    ensure(samples.iter().all(|t| t.agrees()), || {
        format!("f={f:?}: {samples:?}")
    })?;
    ensure(samples[4].type_from_spinor == 2, || {
        format!("type on z₁ = 0 is {:?}", samples[4])
    })
}

fn poisson_purity(s: &mut Sampler) -> CaseResult {
    let (f, beta) = random_cubic_bivector(s)?;
    let spinor = spinor_at_one(&poisson_spinor(&beta, &chart_volume(2)));
    let expected = chart_volume(2).add(&FormField::basis(4, 4, 0, f.clone()));
    ensure(spinor == expected, || format!("e^β Ω ≠ Ω + f for f={f:?}"))?;
    let x = rational_point(s, 4);
    let at = spinor
        .eval_exact(&x)
        .ok_or_else(|| format!("evaluation at {x:?}"))?;
    annihilator(&at)
        .map(|_| ())
        .map_err(|e| format!("at {x:?}: {e:?}"))
}

fn poisson_mc_linkage(s: &mut Sampler) -> CaseResult {
    let (f, beta) = random_cubic_bivector(s)?;
    let mc = mc_linkage(&beta).map_err(fail)?;
    ensure(mc.vanishes() && mc.agrees, || format!("f={f:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_stable_and_distinct() {
        assert_eq!(case_seed(1, "a", 0), case_seed(1, "a", 0));
        assert_ne!(case_seed(1, "a", 0), case_seed(1, "a", 1));
        assert_ne!(case_seed(1, "a", 0), case_seed(1, "b", 0));
    }

    #[test]
    fn failures_carry_seeds() {
        let id = Identity {
            name: "always-fails",
            check: |_| Err("no".into()),
            cases: 5,
        };
        let out = run_identity(&id, 0, 5);
        assert_eq!(out.failures, 5);
        assert_eq!(out.counterexamples.len(), MAX_COUNTEREXAMPLES);
        assert_eq!(
            run_case(&id, out.counterexamples[0].case_seed),
            Err("no".into())
        );
    }
}
