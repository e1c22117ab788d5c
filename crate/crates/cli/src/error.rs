use std::fmt;

use gk_core::GkError;

/// Failures of the driver, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input: unreadable file, bad JSON, unknown literal syntax.
    Parse(String),
    /// Well-formed input that does not describe a valid problem.
    Validation(String),
    /// A form the solver needed to be d-exact was not.
    Obstruction(String),
    /// An internal check failed.
    Property(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Obstruction(_) => 4,
            CliError::Property(_) => 5,
        }
    }

    /// Classifies a kernel error raised while handling `what`.
    pub fn from_kernel(what: &str, e: GkError) -> Self {
        let msg = format!("{what}: {e}");
        match e {
            GkError::NotExact { .. } => CliError::Obstruction(msg),
            GkError::ModeCapExceeded { .. }
            | GkError::Invalid(_)
            | GkError::NotPure { .. }
            | GkError::NotNondegenerate
            | GkError::NonCommuting
            | GkError::DegreeError(_)
            | GkError::DimMismatch
            | GkError::MixedRing => CliError::Validation(msg),
            _ => CliError::Property(msg),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (kind, msg) = match self {
            CliError::Parse(m) => ("parse error", m),
            CliError::Validation(m) => ("validation error", m),
            CliError::Obstruction(m) => ("obstruction", m),
            CliError::Property(m) => ("property failure", m),
        };
        write!(f, "{kind}: {msg}")
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_errors_map_to_distinct_codes() {
        let code = |e| CliError::from_kernel("x", e).exit_code();
        assert_eq!(
            code(GkError::NotExact {
                mode: "(1,0)".into()
            }),
            4
        );
        assert_eq!(
            code(GkError::ModeCapExceeded {
                support: 2,
                reason: String::new()
            }),
            3
        );
        assert_eq!(code(GkError::NotNondegenerate), 3);
        assert_eq!(code(GkError::NotInK2 { order: 1 }), 5);
        assert_eq!(
            code(GkError::LiftFailure {
                order: 2,
                reason: String::new()
            }),
            5
        );
        assert_eq!(CliError::Parse(String::new()).exit_code(), 2);
    }
}
