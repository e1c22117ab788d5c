//! The Campbell-Hausdorff table `z(t) = log(e^{a(t)}e^{b(t)})`.

use gk_core::coeff::Scalar;
use gk_core::multivector::CliffordElement;
use gk_core::sample::Sampler;
use gk_core::series::{cbh_log, exp_series, CliffordSeries};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::literal::{clifford, clifford_json};
use crate::report::{Provenance, Report};
use crate::scene::{CbhLit, Scene};

type Series = CliffordSeries<Scalar>;

fn bracket(x: &Series, y: &Series) -> Series {
    x.mul(y).sub(&y.mul(x))
}

/// `a + b + ½[a,b] + (1/12)[a,[a,b]] + (1/12)[b,[b,a]]`, complete through `t³`.
fn closed_form(a: &Series, b: &Series) -> Series {
    let twelfth = Scalar::ratio(1, 12);
    a.add(b)
        .add(&bracket(a, b).scale(&Scalar::ratio(1, 2)))
        .add(&bracket(a, &bracket(a, b)).scale(&twelfth))
        .add(&bracket(b, &bracket(b, a)).scale(&twelfth))
}

fn from_scene(lit: &CbhLit, m: usize, order: usize) -> CliResult<(Series, Series)> {
    let read = |list: &[Vec<crate::literal::RecordLit>], name: &str| -> CliResult<Series> {
        if list.len() > order {
            return Err(CliError::Validation(format!(
                "cbh.{name}: {} terms exceed order {order}",
                list.len()
            )));
        }
        let mut s = Series::zero(&CliffordElement::zero(m, 0), order);
        for (k, records) in list.iter().enumerate() {
            s.set(
                k + 1,
                clifford::<Scalar>(records, m, 0, &format!("cbh.{name}[{k}]"))?,
            );
        }
        Ok(s)
    };
    Ok((read(&lit.a, "a")?, read(&lit.b, "b")?))
}

/// Seeded pair with words of length ≤ 2 and three terms per order.
fn random_pair(m: usize, order: usize, seed: u64) -> (Series, Series) {
    let mut s = Sampler::new(seed);
    let mut draw = || {
        let mut c = vec![CliffordElement::zero(m, 0)];
        for _ in 1..=order {
            c.push(s.clifford(m, 0, 2, 3, |s| s.scalar()));
        }
        Series::from_coeffs(c)
    };
    let a = draw();
    let b = draw();
    (a, b)
}

pub fn run(scene: &Scene) -> CliResult<Report> {
    let m = scene.m();
    let n = scene.order;
    let (a, b, source) = match &scene.file.cbh {
        Some(lit) => {
            let (a, b) = from_scene(lit, m, n)?;
            (a, b, "scene")
        }
        None => {
            let (a, b) = random_pair(m, n, scene.seed);
            (a, b, "seeded")
        }
    };
    let kernel = |e| CliError::from_kernel("cbh", e);
    let z = cbh_log(&a, &b).map_err(kernel)?;
    let mut report = Report::default();
    let lhs = exp_series(&z).map_err(kernel)?;
    let rhs = exp_series(&a)
        .map_err(kernel)?
        .mul(&exp_series(&b).map_err(kernel)?);
    report.check(
        "re-exponentiation",
        lhs == rhs,
        Provenance::Exact,
        Value::Null,
    );
    let through = n.min(3);
    report.check(
        "closed-form-expansion",
        z.truncate(through) == closed_form(&a.truncate(through), &b.truncate(through)),
        Provenance::IndependentOracle,
        json!({ "through_order": through }),
    );
    let half_bracket = a
        .coeff(1)
        .commutator(b.coeff(1))
        .scale(&Scalar::ratio(1, 2));
    let table: Vec<Value> = (1..=n)
        .map(|k| json!({ "order": k, "z": clifford_json(z.coeff(k)) }))
        .collect();
    let series =
        |s: &Series| -> Vec<Value> { s.coeffs().iter().skip(1).map(clifford_json).collect() };
    report.payload = json!({
        "source": source,
        "m": m,
        "a": series(&a),
        "b": series(&b),
        "half_bracket_a1_b1": clifford_json(&half_bracket),
        "table": table,
    });
    Ok(report)
}
