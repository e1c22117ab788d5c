pub mod cbh;
pub mod deform;
pub mod identities;
pub mod majorant;
pub mod typemap;

use crate::error::{CliError, CliResult};
use crate::scene::{ChartProblem, Problem, Scene, TorusProblem};

pub(crate) fn torus<'a>(scene: &'a Scene, command: &str) -> CliResult<&'a TorusProblem> {
    match &scene.problem {
        Problem::Torus(t) => Ok(t),
        Problem::Chart(_) => Err(CliError::Validation(format!(
            "model: `{command}` needs a torus model"
        ))),
    }
}

pub(crate) fn chart<'a>(scene: &'a Scene, command: &str) -> CliResult<&'a ChartProblem> {
    match &scene.problem {
        Problem::Chart(c) => Ok(c),
        Problem::Torus(_) => Err(CliError::Validation(format!(
            "model: `{command}` needs a chart model"
        ))),
    }
}
