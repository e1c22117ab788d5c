//! Type stratification of a holomorphic Poisson bivector on a chart.

use std::collections::BTreeMap;

use gk_core::coeff::format_q;
use gk_core::poisson::{
    mc_linkage, poisson_check, schouten_crosscheck, type_stratify, GridPoint, TypeSample,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::chart;
use crate::error::{CliError, CliResult};
use crate::literal::coeff_json;
use crate::report::{Provenance, Report};
use crate::scene::Scene;

/// Grid points per parallel task.
const CHUNK: usize = 256;
/// Example points listed per type.
const EXAMPLES: usize = 5;

pub fn run(scene: &Scene) -> CliResult<Report> {
    let c = chart(scene, "typemap")?;
    let mut report = Report::default();

    let residual = poisson_check(&c.beta);
    let components: Vec<Value> = residual
        .components
        .iter()
        .map(|((i, j, k), f)| json!({ "ijk": [i + 1, j + 1, k + 1], "value": coeff_json(f) }))
        .collect();
    report.check(
        "poisson",
        residual.is_zero(),
        Provenance::Exact,
        json!({ "residual": components }),
    );
    let cross = schouten_crosscheck(&c.beta).map_err(|e| CliError::from_kernel("schouten", e))?;
    report.check(
        "schouten-two-path",
        cross.agrees,
        Provenance::IndependentOracle,
        json!({ "factor": cross.factor.as_ref().map(crate::literal::scalar_json) }),
    );
    let mc = mc_linkage(&c.beta).map_err(|e| CliError::from_kernel("maurer-cartan", e))?;
    report.check(
        "maurer-cartan-linkage",
        mc.agrees && mc.vanishes() == residual.is_zero(),
        Provenance::Exact,
        json!({ "residual_vanishes": mc.vanishes(), "projection_agrees": mc.agrees }),
    );

    let samples: Vec<Vec<TypeSample>> = c
        .grid
        .par_chunks(CHUNK)
        .map(|pts| {
            let grid: Vec<GridPoint> = pts.iter().cloned().map(GridPoint::Exact).collect();
            type_stratify(&c.beta, &grid)
        })
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::from_kernel("type map", e))?;
    let samples: Vec<&TypeSample> = samples.iter().flatten().collect();

    let mut strata: BTreeMap<usize, usize> = BTreeMap::new();
    let mut examples: BTreeMap<usize, Vec<Value>> = BTreeMap::new();
    let mut mismatches = 0;
    for (x, s) in c.grid.iter().zip(&samples) {
        *strata.entry(s.type_from_spinor).or_default() += 1;
        let ex = examples.entry(s.type_from_spinor).or_default();
        if ex.len() < EXAMPLES {
            ex.push(json!(x.iter().map(format_q).collect::<Vec<_>>()));
        }
        if !s.agrees() {
            mismatches += 1;
        }
    }
    report.check(
        "type-equals-n-minus-rank",
        mismatches == 0,
        Provenance::Exact,
        json!({ "points": samples.len(), "mismatches": mismatches }),
    );
    let types: Vec<usize> = strata.keys().copied().collect();
    let strata_json: serde_json::Map<String, Value> = strata
        .iter()
        .map(|(t, n)| {
            (
                t.to_string(),
                json!({ "points": n, "examples": examples.get(t).cloned().unwrap_or_default() }),
            )
        })
        .collect();
    report.payload = json!({
        "n": c.n,
        "points": samples.len(),
        "types": types,
        "strata": strata_json,
    });
    Ok(report)
}
