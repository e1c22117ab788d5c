//! Lift `ε(t)`, solve for `b(t)`, and certify the resulting family.

use gk_core::coeff::TrigPoly;
use gk_core::multivector::FormField;
use gk_core::series::{lift_congruence_holds, real_lift};
use gk_core::stability::{
    class_by_degree, de_rham_class, expanded_spinor, k_complex, majorant_certificate,
    solve_stability, SAMPLE_TIMES,
};
use gk_core::GkError;
use serde_json::{json, Value};

use super::majorant::{params, MajorantParams};
use super::torus;
use crate::error::{CliError, CliResult};
use crate::literal::{clifford_json, form_json, q_json};
use crate::report::{Provenance, Report};
use crate::scene::Scene;

fn kernel(what: &str) -> impl FnOnce(GkError) -> CliError + '_ {
    move |e| CliError::from_kernel(what, e)
}

pub fn run(scene: &Scene) -> CliResult<Report> {
    let t = torus(scene, "deform")?;
    let gk = &t.gk;
    let m = t.m;
    let hodge = k_complex(gk, t.mode_cap).map_err(kernel("K complex"))?;
    let harmonics = hodge.harmonic_h1().map_err(kernel("harmonic K¹"))?;
    let s = if t.s.is_empty() {
        None
    } else if t.s.len() != harmonics.len() {
        return Err(CliError::Validation(format!(
            "s: {} coefficients given, H¹ has dimension {}",
            t.s.len(),
            harmonics.len()
        )));
    } else {
        let mut acc = FormField::<TrigPoly>::zero(m, m);
        for (c, h) in t.s.iter().zip(&harmonics) {
            acc.add_assign(&h.scale(c));
        }
        Some(acc)
    };

    let a = real_lift(&t.eps, gk.j(), gk.phi()).map_err(kernel("lift"))?;
    let r = solve_stability(gk, &hodge, &a, s.as_ref()).map_err(kernel("solver"))?;
    let mut report = Report::default();

    let congruence = lift_congruence_holds(&t.eps, &a, gk.j(), gk.phi()).map_err(kernel("lift"))?;
    report.check(
        "lift-congruence",
        congruence.iter().all(|&c| c),
        Provenance::Exact,
        json!({ "orders": congruence }),
    );
    report.check("lift-real", a.conj() == a, Provenance::Exact, Value::Null);
    report.check(
        "closed",
        r.closed.iter().all(|&c| c),
        Provenance::Exact,
        json!({ "orders": r.closed }),
    );
    report.check("phi-fixed", r.phi_fixed, Provenance::Exact, Value::Null);
    let phi: FormField<TrigPoly> = gk.phi().lift(m);
    let b_kills: Vec<bool> =
        r.b.coeffs()
            .iter()
            .map(|b| b.spin(&phi).is_zero())
            .collect();
    report.check(
        "b-annihilates-phi",
        b_kills.iter().all(|&c| c),
        Provenance::Exact,
        json!({ "orders": b_kills }),
    );
    let in_k2: Vec<bool> = r.obstructions.iter().map(|o| hodge.in_k2(o)).collect();
    report.check(
        "obstructions-in-k2",
        in_k2.iter().all(|&c| c),
        Provenance::Exact,
        json!({ "orders": in_k2 }),
    );
    let mut exact = Vec::new();
    for (k, o) in r.obstructions.iter().enumerate() {
        let beta = hodge
            .hodge_solve(&o.neg())
            .map_err(kernel(&format!("obstruction at order {}", k + 1)))?;
        exact.push(beta.d() == o.neg());
    }
    report.check(
        "obstructions-d-exact",
        exact.iter().all(|&c| c),
        Provenance::Exact,
        json!({ "orders": exact }),
    );
    let oracle = expanded_spinor(&a, &r.b, gk.psi()).map_err(kernel("expansion oracle"))?;
    report.check(
        "no-cbh-expansion",
        oracle == r.psi_t,
        Provenance::IndependentOracle,
        Value::Null,
    );

    let family = gk_core::stability::verify_family(&r, gk, &t.samples, scene.tolerances.float);
    report.check(
        "annihilator-transported",
        family.annihilator_transported,
        Provenance::Exact,
        Value::Null,
    );
    let per_time: Vec<Value> = SAMPLE_TIMES
        .iter()
        .map(|&time| {
            let min_eig = family
                .samples
                .iter()
                .filter(|s| s.t == time)
                .map(|s| s.min_eigenvalue)
                .fold(f64::INFINITY, f64::min);
            json!({ "t": time, "max_commutator": family.max_commutator_at(time), "min_eigenvalue": min_eig })
        })
        .collect();
    report.check(
        "family-generalized-kahler",
        family.floats_pass(),
        Provenance::Float,
        json!({ "points": t.samples.len(), "times": per_time }),
    );

    let mp = params(scene, 20)?;
    let cert = majorant_certificate(&mp.c, &mp.lambda, &mp.k1, &mp.k2, mp.nu_max, Some(&r));
    let norms = cert.norms.as_ref().expect("a run was attached");
    report.check(
        "majorant",
        cert.passed(),
        Provenance::SurrogateNorm,
        json!({
            "squares_dominated": cert.squares_dominated,
            "exponential_dominated": cert.exponential_dominated,
            "k1_min": q_json(&norms.k1_min),
            "k2_min": q_json(&norms.k2_min),
            "k1_feasible": norms.k1_feasible,
            "k2_feasible": norms.k2_feasible,
            "z_dominated": norms.z_dominated,
            "sum_below_one": norms.sum_below_one,
        }),
    );

    report.payload = payload(&r, &hodge_summary(&hodge, harmonics.len()), &mp);
    Ok(report)
}

fn hodge_summary(h: &gk_core::stability::ModeHodge, h1: usize) -> Value {
    json!({ "mode_cap": h.mode_cap(), "k1_rank": h.k1_rank(), "k2_rank": h.k2_rank(), "h1_dimension": h1 })
}

fn payload(r: &gk_core::stability::DeformationReport, hodge: &Value, mp: &MajorantParams) -> Value {
    let dpsi = r.psi_t.d();
    let residuals: Vec<Value> = dpsi.coeffs().iter().map(|f| q_json(&f.l1_norm())).collect();
    let obstruction_norms: Vec<Value> = r
        .obstructions
        .iter()
        .map(|f| q_json(&f.l1_norm()))
        .collect();
    let classes: Vec<Value> = de_rham_class(&r.psi_t)
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let by_degree: serde_json::Map<String, Value> = class_by_degree(c)
                .iter()
                .map(|(p, f)| (p.to_string(), form_json(f)))
                .collect();
            json!({ "order": k, "degrees": by_degree })
        })
        .collect();
    let series = |s: &gk_core::series::CliffordSeries<TrigPoly>| -> Vec<Value> {
        s.coeffs().iter().skip(1).map(clifford_json).collect()
    };
    json!({
        "hodge": hodge,
        "a": series(&r.a),
        "b": series(&r.b),
        "closedness_residual_l1": residuals,
        "obstruction_l1": obstruction_norms,
        "de_rham_classes": classes,
        "majorant_parameters": mp.to_json(),
    })
}
