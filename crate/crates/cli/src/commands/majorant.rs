//! Standalone majorant certificate, and the parameters shared with `deform`.

use gk_core::coeff::Q;
use gk_core::stability::{majorant_certificate, majorant_coeffs};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::literal::{q_json, rational};
use crate::report::{Provenance, Report};
use crate::scene::Scene;

/// Coefficients `M_ν` listed in the report, at most this many.
const LISTED: usize = 10;

#[derive(Clone, Debug)]
pub struct MajorantParams {
    pub c: Q,
    pub lambda: Q,
    pub k1: Q,
    pub k2: Q,
    pub nu_max: usize,
}

impl MajorantParams {
    pub fn to_json(&self) -> Value {
        json!({
            "c": q_json(&self.c),
            "lambda": q_json(&self.lambda),
            "k1": q_json(&self.k1),
            "k2": q_json(&self.k2),
            "nu_max": self.nu_max,
        })
    }
}

/// Scene values with defaults `c = 1`, `λ = 1/c`, `K₁ = K₂ = 1/2`.
pub fn params(scene: &Scene, default_nu_max: usize) -> CliResult<MajorantParams> {
    let lit = scene.file.majorant.clone();
    let get = |v: Option<&String>, name: &str, default: Q| -> CliResult<Q> {
        v.map_or(Ok(default), |s| rational(s, &format!("majorant.{name}")))
    };
    let half = gk_core::coeff::q(1, 2);
    let c = get(lit.as_ref().and_then(|l| l.c.as_ref()), "c", Q::one())?;
    if c <= Q::zero() {
        return Err(CliError::Validation("majorant.c: must be positive".into()));
    }
    let lambda = get(
        lit.as_ref().and_then(|l| l.lambda.as_ref()),
        "lambda",
        Q::one() / &c,
    )?;
    if lambda <= Q::zero() {
        return Err(CliError::Validation(
            "majorant.lambda: must be positive".into(),
        ));
    }
    let k1 = get(lit.as_ref().and_then(|l| l.k1.as_ref()), "k1", half.clone())?;
    let k2 = get(lit.as_ref().and_then(|l| l.k2.as_ref()), "k2", half)?;
    if k1 < Q::zero() || k2 < Q::zero() {
        return Err(CliError::Validation(
            "majorant: k1 and k2 must be non-negative".into(),
        ));
    }
    let nu_max = lit
        .as_ref()
        .and_then(|l| l.nu_max)
        .unwrap_or(default_nu_max);
    if nu_max == 0 || nu_max > 2000 {
        return Err(CliError::Validation(
            "majorant.nu_max: must lie in 1..=2000".into(),
        ));
    }
    Ok(MajorantParams {
        c,
        lambda,
        k1,
        k2,
        nu_max,
    })
}

pub fn run(scene: &Scene) -> CliResult<Report> {
    let p = params(scene, 200)?;
    let cert = majorant_certificate(&p.c, &p.lambda, &p.k1, &p.k2, p.nu_max, None);
    let mut report = Report::default();
    report.check(
        "squares-dominated",
        cert.squares_dominated,
        Provenance::Exact,
        json!({ "first_failure": cert.first_square_failure }),
    );
    report.check(
        "exponential-dominated",
        cert.exponential_dominated,
        Provenance::Exact,
        json!({ "first_failure": cert.first_exponential_failure }),
    );
    let m = majorant_coeffs(&p.c, p.nu_max.min(LISTED));
    report.payload = json!({
        "parameters": p.to_json(),
        "exp_lambda_upper": q_json(&cert.exp_lambda_upper),
        "coefficients": m.iter().skip(1).map(q_json).collect::<Vec<_>>(),
    });
    Ok(report)
}
