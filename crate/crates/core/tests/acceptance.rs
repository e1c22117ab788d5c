//! Acceptance criteria, one pass/fail line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gk_core::brackets::{courant_closed, integrability_witness, maurer_cartan_residual, schouten};
use gk_core::coeff::{q, AffinePoly, Coeff, Mode, Scalar, TrigPoly, Q};
use gk_core::gc::structure::holomorphic_volume;
use gk_core::gc::{transport, Bigrading, GCStructure, ModeLaplacians};
use gk_core::identities::{find, random_integrable_spinor, random_lbar2, run_identity};
use gk_core::multivector::{CliffordElement, FormField};
use gk_core::poisson::{chart_volume, poisson_spinor, type_stratify, GridPoint, PoissonBivector};
use gk_core::sample::Sampler;
use gk_core::series::{cbh_log, exp_series, lift_congruence_holds, real_lift, CliffordSeries};
use gk_core::stability::{
    bfield_family, de_rham_class, expanded_spinor, exponential_domination_failure, k_complex,
    majorant_certificate, mode_one_profile, poisson_family, solve_stability, square_domination_failure,
    DeformationReport, GKOneSpinor, ModeHodge,
};
use gk_core::GkError;

const SEED: u64 = 20_240_601;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn(&mut Shared) -> Outcome,
}

/// State carried from criterion 6 into criterion 7.
#[derive(Default)]
struct Shared {
    stability: Option<(GKOneSpinor, ModeHodge, DeformationReport)>,
}

fn algebra_suite(_: &mut Shared) -> Outcome {
    let names = [
        "clifford-relation-m2",
        "clifford-relation-m4",
        "spin-module-m2",
        "spin-module-m4",
        "d-squared-m2",
        "d-squared-m4",
    ];
    let mut failed = Vec::new();
    for name in names {
        let out = run_identity(&find(name).expect("catalogued"), SEED, 1000);
        if !out.passed() {
            failed.push(format!("{name}: {} failures, first {:?}", out.failures, out.counterexamples.first()));
        }
    }
    outcome(failed.is_empty(), if failed.is_empty() { "6 suites x 1000 cases exact".into() } else { failed.join("; ") })
}

/// `e^{B}·(e^{iω} + …)` with `B = 2cos(x₃) dx¹∧dx²` is not closed, and no
/// `E·φ` can produce the pure 3-form `dφ`.
fn non_integrable_spinor() -> FormField<TrigPoly> {
    let cos = TrigPoly::exp_mode(4, &[0, 0, 1, 0], Scalar::one()).add(&TrigPoly::exp_mode(4, &[0, 0, -1, 0], Scalar::one()));
    let b = CliffordElement::<TrigPoly>::from_word(4, 4, 0b0011 << 4, cos);
    let base = GCStructure::standard_symplectic(4);
    let phi0 = base.canonical_spinor().expect("symplectic spinor").clone();
    transport(&b, &phi0, &base.l_basis()).expect("nilpotent").phi
}

fn integrability(_: &mut Shared) -> Outcome {
    let mut s = Sampler::new(SEED);
    let mut bad = Vec::new();
    for i in 0..50 {
        let m = if i % 2 == 0 { 4 } else { 2 };
        let ok = random_integrable_spinor(&mut s, m).and_then(|(phi, l)| {
            integrability_witness(&phi).map_err(|e| format!("{e:?}"))?;
            match courant_closed(&l, &phi) {
                Ok(true) => Ok(()),
                Ok(false) => Err("annihilator not Courant-closed".into()),
                Err(e) => Err(format!("{e:?}")),
            }
        });
        if let Err(e) = ok {
            bad.push(format!("case {i}: {e}"));
        }
    }
    let rejected = matches!(integrability_witness(&non_integrable_spinor()), Err(GkError::NotIntegrable(_)));
    outcome(
        bad.is_empty() && rejected,
        format!("50 integrable: {} failures; non-integrable rejected: {rejected}", bad.len()),
    )
}

fn maurer_cartan(_: &mut Shared) -> Outcome {
    let mut s = Sampler::new(SEED);
    let j = GCStructure::standard_complex(4);
    let phi = holomorphic_volume(4);
    let (mut mc_ok, mut sch_ok) = (0, 0);
    for _ in 0..25 {
        let eps = random_lbar2(&mut s, &j, 2, 1);
        if schouten(&eps, &eps, &j, 4).is_ok() {
            sch_ok += 1;
        }
        if maurer_cartan_residual(&eps, &j, &phi, 4).is_ok_and(|r| r.agrees) {
            mc_ok += 1;
        }
    }
    outcome(mc_ok == 25 && sch_ok == 25, format!("projection = bracket: {mc_ok}/25; Schouten paths: {sch_ok}/25"))
}

fn lift(_: &mut Shared) -> Outcome {
    let mut s = Sampler::new(SEED);
    let j = GCStructure::standard_complex(4);
    let phi = holomorphic_volume(4);
    let sum = |s: &mut Sampler| gk_core::brackets::monomial_sum(4, 4, &random_lbar2(s, &j, 2, 1));
    let mut fails = Vec::new();
    for i in 0..5 {
        let zero = CliffordElement::zero(4, 4);
        let eps = CliffordSeries::from_coeffs(vec![zero.clone(), sum(&mut s), sum(&mut s), zero.clone(), zero]);
        let a = match real_lift(&eps, &j, &phi) {
            Ok(a) => a,
            Err(e) => {
                fails.push(format!("case {i}: {e:?}"));
                continue;
            }
        };
        let first = *a.coeff(1) == eps.coeff(1).add(&eps.coeff(1).conj());
        let real = a.coeffs().iter().all(CliffordElement::is_real);
        let cong = lift_congruence_holds(&eps, &a, &j, &phi).is_ok_and(|c| c.iter().all(|&b| b));
        if !(first && real && cong) {
            fails.push(format!("case {i}: a1={first} real={real} congruence={cong}"));
        }
    }
    outcome(fails.is_empty(), if fails.is_empty() { "5 lifts to order 4".into() } else { fails.join("; ") })
}

type Series = CliffordSeries<Scalar>;

fn random_series(s: &mut Sampler, n: usize) -> Series {
    let mut c = vec![CliffordElement::zero(2, 0)];
    for _ in 1..=n {
        c.push(s.clifford(2, 0, 2, 3, |s| s.scalar()));
    }
    Series::from_coeffs(c)
}

fn bracket(x: &Series, y: &Series) -> Series {
    x.mul(y).sub(&y.mul(x))
}

/// `a + b + ½[a,b] + (1/12)[a,[a,b]] + (1/12)[b,[b,a]]`, complete through `t³`.
fn displayed_expansion(a: &Series, b: &Series) -> Series {
    let twelfth = Scalar::ratio(1, 12);
    a.add(b)
        .add(&bracket(a, b).scale(&Scalar::ratio(1, 2)))
        .add(&bracket(a, &bracket(a, b)).scale(&twelfth))
        .add(&bracket(b, &bracket(b, a)).scale(&twelfth))
}

fn cbh(_: &mut Shared) -> Outcome {
    let mut s = Sampler::new(SEED);
    let (mut reexp, mut display) = (0, 0);
    for _ in 0..100 {
        let a = random_series(&mut s, 4);
        let b = random_series(&mut s, 4);
        let Ok(z) = cbh_log(&a, &b) else { continue };
        let lhs = exp_series(&z).expect("no constant term");
        if lhs == exp_series(&a).expect("no constant term").mul(&exp_series(&b).expect("no constant term")) {
            reexp += 1;
        }
        if z.truncate(3) == displayed_expansion(&a.truncate(3), &b.truncate(3)) {
            display += 1;
        }
    }
    outcome(reexp == 100 && display == 100, format!("re-exponentiation {reexp}/100; orders 2-3 expansion {display}/100"))
}

fn stability(shared: &mut Shared) -> Outcome {
    let gk = GKOneSpinor::flat_kahler(4);
    let h = match k_complex(&gk, 4) {
        Ok(h) => h,
        Err(e) => return outcome(false, format!("{e:?}")),
    };
    let run = || -> Result<(DeformationReport, String, bool), GkError> {
        let a = real_lift(&bfield_family(&mode_one_profile(), 3), gk.j(), gk.phi())?;
        let r = solve_stability(&gk, &h, &a, None)?;
        let phi: FormField<TrigPoly> = gk.phi().lift(4);
        let b_kills = r.b.coeffs().iter().all(|b| b.spin(&phi).is_zero());
        let oracle = expanded_spinor(&a, &r.b, gk.psi())? == r.psi_t;
        let harm = h.constant_harmonics();
        let s1 = harm[0].lift::<TrigPoly>(4);
        let s2 = harm[1].scale(&Scalar::ratio(-1, 2)).lift::<TrigPoly>(4);
        let r1 = solve_stability(&gk, &h, &a, Some(&s1))?;
        let r2 = solve_stability(&gk, &h, &a, Some(&s2))?;
        let diff = de_rham_class(&r1.psi_t)[1].sub(&de_rham_class(&r2.psi_t)[1]);
        let shift = diff == harm[0].sub(&harm[1].scale(&Scalar::ratio(-1, 2))) && r1.passed() && r2.passed();
        let ok = r.passed() && b_kills && oracle && shift;
        let detail = format!(
            "closed to t^4: {}; b_k·φ = 0: {b_kills}; no-CBH oracle: {oracle}; class shift = s1 - s2: {shift}",
            r.passed()
        );
        Ok((r, detail, ok))
    };
    match run() {
        Ok((r, detail, ok)) => {
            shared.stability = Some((gk, h, r));
            outcome(ok, detail)
        }
        Err(e) => outcome(false, format!("{e:?}")),
    }
}

fn obstruction_shadow(shared: &mut Shared) -> Outcome {
    let Some((_, h, r)) = &shared.stability else {
        return outcome(false, "no run from criterion 6");
    };
    let in_k2 = r.obstructions.iter().filter(|o| h.in_k2(o)).count();
    let exact = r
        .obstructions
        .iter()
        .filter(|o| h.hodge_solve(&o.neg()).is_ok_and(|beta| beta.d() == o.neg()))
        .count();
    let n = r.obstructions.len();
    outcome(in_k2 == n && exact == n, format!("in K²: {in_k2}/{n}; d-exact in K¹: {exact}/{n}"))
}

fn majorant(_: &mut Shared) -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for c in [q(1, 4), q(1, 1), q(4, 1)] {
        let lambda = Q::from_integer(1.into()) / &c;
        let sq = square_domination_failure(&c, 200);
        let ex = exponential_domination_failure(&c, &lambda, 200);
        ok &= sq.is_none() && ex.is_none();
        lines.push(format!("c={c}: squares {:?} exp {:?}", sq, ex));
    }
    let gk = GKOneSpinor::flat_kahler(4);
    let Ok(h) = k_complex(&gk, 4) else { return outcome(false, "K complex") };
    let one = Q::from_integer(1.into());
    let zero = CliffordSeries::zero(&CliffordElement::<TrigPoly>::zero(4, 4), 3);
    let runs = [("trivial", zero), ("constant beta", poisson_family(Scalar::ratio(1, 200), 3))];
    for (name, eps) in runs {
        let report = real_lift(&eps, gk.j(), gk.phi()).and_then(|a| solve_stability(&gk, &h, &a, None));
        match report {
            Ok(r) => {
                let cert = majorant_certificate(&one, &one, &one, &one, 20, Some(&r));
                let n = cert.norms.as_ref().expect("run attached");
                let feasible = n.k1_feasible && n.k2_feasible && n.sum_below_one;
                ok &= feasible;
                lines.push(format!("{name}: K1={} K2={} feasible={feasible}", n.k1_min, n.k2_min));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e:?}"));
            }
        }
    }
    outcome(ok, lines.join("; "))
}

fn chart_z(j: usize) -> AffinePoly {
    let mut alpha = vec![0u32; 2];
    alpha[j] = 1;
    AffinePoly::holomorphic_monomial(4, &alpha, Scalar::one())
}

/// `10⁴` exact points; `Re z₁` and `Re z₂` run over multiples of `1/4`, so
/// the lines `z₁ = 0`, `z₁ = 1` and `z₂ = 0` are hit exactly.
fn exact_grid() -> Vec<Vec<Q>> {
    let mut out = Vec::with_capacity(10_000);
    for a in -12..=12 {
        for b in [0, 1] {
            for c in -12..=12 {
                for d in 0..8 {
                    out.push(vec![q(a, 4), q(b, 3), q(c, 4), q(d, 5)]);
                }
            }
        }
    }
    out
}

fn poisson_chart(_: &mut Shared) -> Outcome {
    let mut s = Sampler::new(SEED);
    let mut identity_ok = 0;
    for _ in 0..10 {
        let f = s.holomorphic(4, 3, 3);
        let Ok(beta) = PoissonBivector::zero(2).with(0, 1, &f) else { continue };
        let series = poisson_spinor(&beta, &chart_volume(2));
        let mut expected = vec![chart_volume(2), FormField::basis(4, 4, 0, f.clone())];
        expected.resize(series.coeffs().len(), FormField::zero(4, 4));
        if series.coeffs() == expected.as_slice() {
            identity_ok += 1;
        }
    }
    let f = chart_z(0).mul(&chart_z(0).sub(&AffinePoly::one(4))).mul(&chart_z(1));
    let beta = PoissonBivector::zero(2).with(0, 1, &f).expect("holomorphic");
    let grid = exact_grid();
    let points: Vec<GridPoint> = grid.iter().cloned().map(GridPoint::Exact).collect();
    let samples = match type_stratify(&beta, &points) {
        Ok(s) => s,
        Err(e) => return outcome(false, format!("{e:?}")),
    };
    let (mut on, mut off, mut wrong) = (0, 0, 0);
    for (x, t) in grid.iter().zip(&samples) {
        let zero = f.eval_exact(x).expect("polynomial").is_zero();
        if zero {
            on += 1;
        } else {
            off += 1;
        }
        if !t.agrees() || t.type_from_spinor != if zero { 2 } else { 0 } {
            wrong += 1;
        }
    }
    outcome(
        identity_ok == 10 && wrong == 0,
        format!("e^{{tβ}}Ω = Ω + tf: {identity_ok}/10; {} points ({on} on f = 0, {off} off), mismatches {wrong}", grid.len()),
    )
}

fn laplacians(_: &mut Shared) -> Outcome {
    let j0 = GCStructure::standard_complex(4);
    let j1 = GCStructure::kahler_symplectic(4);
    let Ok(bg) = Bigrading::new(&j0, &j1) else { return outcome(false, "bigrading") };
    let modes = Mode::cube(4, 2);
    let mut bad = Vec::new();
    for k in &modes {
        let l = ModeLaplacians::new(&bg, 4, k);
        if !l.d_equals_dbar_psi() || l.d_equals_corners() != [true; 4] {
            bad.push(format!("{k:?}"));
        }
    }
    outcome(bad.is_empty(), format!("{} modes, discrepancies: {}", modes.len(), if bad.is_empty() { "none".into() } else { bad.join(", ") }))
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { id: 1, name: "algebra suite", limit: Duration::from_secs(60), run: algebra_suite },
        Criterion { id: 2, name: "integrability both directions", limit: Duration::from_secs(120), run: integrability },
        Criterion { id: 3, name: "Maurer-Cartan two paths", limit: Duration::from_secs(300), run: maurer_cartan },
        Criterion { id: 4, name: "lift congruence", limit: Duration::MAX, run: lift },
        Criterion { id: 5, name: "CBH", limit: Duration::MAX, run: cbh },
        Criterion { id: 6, name: "stability end-to-end", limit: Duration::from_secs(600), run: stability },
        Criterion { id: 7, name: "obstruction shadow", limit: Duration::MAX, run: obstruction_shadow },
        Criterion { id: 8, name: "majorant certificates", limit: Duration::from_secs(60), run: majorant },
        Criterion { id: 9, name: "chart example", limit: Duration::from_secs(120), run: poisson_chart },
        Criterion { id: 10, name: "flat Laplacians", limit: Duration::MAX, run: laplacians },
    ];
    let mut shared = Shared::default();
    let mut all = true;
    for c in &criteria {
        let start = Instant::now();
        let out = (c.run)(&mut shared);
        let elapsed = start.elapsed();
        let in_time = elapsed <= c.limit;
        let pass = out.pass && in_time;
        all &= pass;
        let limit = if c.limit == Duration::MAX { String::new() } else { format!(" (limit {} s)", c.limit.as_secs()) };
        println!(
            "{} criterion {:>2} {}: {} [{:.2} s{}]",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            out.detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
