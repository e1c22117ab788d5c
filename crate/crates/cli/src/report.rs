//! Report assembly. Reports are deterministic functions of the scene bytes
//! and the effective flags: no timestamps, paths, or thread-dependent order.

use serde::Serialize;
use serde_json::{json, Value};

use crate::scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Decided in exact rational arithmetic.
    Exact,
    /// Decided in floating point against a stated tolerance.
    Float,
    /// Decided on ℓ¹ coefficient norms standing in for analytic norms.
    SurrogateNorm,
    /// Agreement with a second computation that shares no code path.
    IndependentOracle,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub provenance: Provenance,
    pub detail: Value,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub checks: Vec<Check>,
    pub payload: Value,
}

impl Report {
    pub fn check(&mut self, name: &str, passed: bool, provenance: Provenance, detail: Value) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            provenance,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, command: &str, scene: &Scene) -> String {
        let doc = json!({
            "tool": "gk",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command,
            "scene_sha256": scene.sha256,
            "seed": scene.seed,
            "order": scene.order,
            "tolerances": {
                "positivity": scene.tolerances.positivity,
                "float": scene.tolerances.float,
                "rank": gk_core::poisson::RANK_TOL,
            },
            "passed": self.passed(),
            "checks": self.checks,
            "payload": self.payload,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report values are serializable");
        s.push('\n');
        s
    }
}
