//! Command-line driver for the `gk-core` kernel: scene ingestion, command
//! execution, and deterministic JSON reports.

pub mod commands;
pub mod error;
pub mod literal;
pub mod report;
pub mod scene;

use error::CliResult;
use report::Report;
use scene::Scene;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Identities,
    Deform,
    Typemap,
    Cbh,
    Majorant,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Identities => "identities",
            Command::Deform => "deform",
            Command::Typemap => "typemap",
            Command::Cbh => "cbh",
            Command::Majorant => "majorant",
        }
    }

    pub fn run(self, scene: &Scene) -> CliResult<Report> {
        match self {
            Command::Identities => commands::identities::run(scene),
            Command::Deform => commands::deform::run(scene),
            Command::Typemap => commands::typemap::run(scene),
            Command::Cbh => commands::cbh::run(scene),
            Command::Majorant => commands::majorant::run(scene),
        }
    }
}
