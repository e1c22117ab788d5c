//! Every randomized identity of the kernel, fanned out over the thread pool.

use gk_core::identities::{catalogue, run_identity};
use rayon::prelude::*;
use serde_json::json;

use crate::error::CliResult;
use crate::report::{Provenance, Report};
use crate::scene::Scene;

pub fn run(scene: &Scene) -> CliResult<Report> {
    let suites = catalogue();
    let outcomes: Vec<_> = suites
        .par_iter()
        .map(|id| run_identity(id, scene.seed, id.cases))
        .collect();
    let mut report = Report::default();
    let mut rows = Vec::new();
    for o in &outcomes {
        let counterexamples: Vec<_> = o
            .counterexamples
            .iter()
            .map(|c| json!({ "case_seed": c.case_seed, "message": c.message }))
            .collect();
        report.check(
            &o.name,
            o.passed(),
            Provenance::Exact,
            json!({ "cases": o.cases, "failures": o.failures }),
        );
        rows.push(json!({
            "name": o.name,
            "cases": o.cases,
            "failures": o.failures,
            "counterexamples": counterexamples,
        }));
    }
    let total: usize = outcomes.iter().map(|o| o.cases).sum();
    let failed: usize = outcomes.iter().map(|o| o.failures).sum();
    report.payload = json!({ "suites": rows, "total_cases": total, "total_failures": failed });
    Ok(report)
}
