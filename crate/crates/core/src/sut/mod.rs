//! Systems under test: external executables driven through positional
//! arguments, and built-in fixture functions with seeded mutants.

mod external;
pub mod fixtures;

use std::path::{Path, PathBuf};
use std::time::Duration;

use thiserror::Error;

use crate::spec_io::InterfaceSpec;
use crate::value::InputVector;

pub use external::ExternalSut;
pub use fixtures::{catalog, Fixture, Mutant};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(5);

/// Commands of this form name a built-in fixture, optionally a mutant of it:
/// `builtin:bmi` or `builtin:bmi#3`.
pub const BUILTIN_PREFIX: &str = "builtin:";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SutError {
    #[error("could not start `{command}`: {message}")]
    Spawn { command: String, message: String },
    #[error("`{command}` exited with {status}; stdout: {stdout:?}; stderr: {stderr:?}")]
    Status {
        command: String,
        status: String,
        stdout: String,
        stderr: String,
    },
    #[error("`{command}` did not finish within {timeout:?}")]
    Timeout { command: String, timeout: Duration },
    #[error("`{command}` printed {stdout:?}, expected a single number")]
    Unparsable { command: String, stdout: String },
    #[error("`{command}` returned {first} then {second} for {input}")]
    NonDeterministic {
        command: String,
        input: InputVector,
        first: f64,
        second: f64,
    },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture `{id}` has {count} mutants, no mutant {index}")]
    UnknownMutant { id: String, index: usize, count: usize },
    #[error("input rejected: {0}")]
    Rejected(String),
}

/// Anything that maps an input vector to one numeric output.
pub trait Sut: Sync {
    fn execute(&self, input: &InputVector) -> Result<f64, SutError>;
}

impl<F> Sut for F
where
    F: Fn(&InputVector) -> Result<f64, SutError> + Sync,
{
    fn execute(&self, input: &InputVector) -> Result<f64, SutError> {
        self(input)
    }
}

#[derive(Debug, Clone)]
pub enum SutHandle {
    External(ExternalSut),
    Builtin {
        fixture: &'static Fixture,
        /// `None` for the original, `Some(k)` for mutant `k`.
        variant: Option<usize>,
    },
}

impl SutHandle {
    /// Handle for the original or a mutant of a catalog fixture.
    pub fn builtin(id: &str, variant: Option<usize>) -> Result<Self, SutError> {
        let fixture = fixtures::find(id).ok_or_else(|| SutError::UnknownFixture(id.to_string()))?;
        if let Some(index) = variant {
            if index >= fixture.mutants.len() {
                return Err(SutError::UnknownMutant {
                    id: id.to_string(),
                    index,
                    count: fixture.mutants.len(),
                });
            }
        }
        Ok(SutHandle::Builtin { fixture, variant })
    }

    /// Resolves the command of `spec`. Built-in commands map to fixtures;
    /// anything else is split on whitespace and run as a process, with a
    /// program path that exists relative to `base_dir` taking precedence.
    pub fn from_spec(spec: &InterfaceSpec, base_dir: Option<&Path>, timeout: Duration) -> Result<Self, SutError> {
        if let Some(rest) = spec.command.strip_prefix(BUILTIN_PREFIX) {
            let (id, variant) = match rest.split_once('#') {
                Some((id, k)) => {
                    let k = k
                        .parse()
                        .map_err(|_| SutError::Rejected(format!("bad mutant index in `{}`", spec.command)))?;
                    (id, Some(k))
                }
                None => (rest, None),
            };
            return SutHandle::builtin(id, variant);
        }
        let mut argv: Vec<String> = spec.command.split_whitespace().map(str::to_string).collect();
        if argv.is_empty() {
            return Err(SutError::Spawn {
                command: spec.command.clone(),
                message: "empty command".into(),
            });
        }
        if let Some(dir) = base_dir {
            let candidate: PathBuf = dir.join(&argv[0]);
            if candidate.is_file() {
                argv[0] = candidate.to_string_lossy().into_owned();
            }
        }
        Ok(SutHandle::External(ExternalSut::new(argv, timeout)))
    }

    /// Short label for logs.
    pub fn describe(&self) -> String {
        match self {
            SutHandle::External(e) => e.command_line(&[]),
            SutHandle::Builtin { fixture, variant: None } => format!("{BUILTIN_PREFIX}{}", fixture.id),
            SutHandle::Builtin { fixture, variant: Some(k) } => format!("{BUILTIN_PREFIX}{}#{k}", fixture.id),
        }
    }
}

impl Sut for SutHandle {
    fn execute(&self, input: &InputVector) -> Result<f64, SutError> {
        match self {
            SutHandle::External(e) => e.execute(input),
            SutHandle::Builtin { fixture, variant } => fixture.evaluate(*variant, input),
        }
    }
}

/// Runs every input twice and fails on the first pair of results that are
/// not bit-identical (NaN matches NaN).
pub fn check_deterministic<S: Sut + ?Sized>(sut: &S, label: &str, inputs: &[InputVector]) -> Result<(), SutError> {
    for input in inputs {
        let first = sut.execute(input)?;
        let second = sut.execute(input)?;
        let same = first.to_bits() == second.to_bits() || (first.is_nan() && second.is_nan());
        if !same {
            return Err(SutError::NonDeterministic {
                command: label.to_string(),
                input: input.clone(),
                first,
                second,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec_io::ParamSpec;
    use crate::value::ValueKind;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn spec(command: &str) -> InterfaceSpec {
        InterfaceSpec::new(
            command,
            vec![ParamSpec::double("height", -100.0, 100.0), ParamSpec::double("weight", -100.0, 100.0)],
            ValueKind::Double,
        )
        .unwrap()
    }

    #[test]
    fn builtin_commands_resolve() {
        let h = SutHandle::from_spec(&spec("builtin:bmi"), None, DEFAULT_TIMEOUT).unwrap();
        assert_eq!(h.describe(), "builtin:bmi");
        let x = h.execute(&InputVector::doubles(&[1.7, 50.0])).unwrap();
        assert!((x - 17.301038062283737).abs() < 1e-12);
        let m = SutHandle::from_spec(&spec("builtin:bmi#0"), None, DEFAULT_TIMEOUT).unwrap();
        assert!((m.execute(&InputVector::doubles(&[1.7, 50.0])).unwrap() - 29.41176470588235).abs() < 1e-9);
        assert!(matches!(
            SutHandle::from_spec(&spec("builtin:nope"), None, DEFAULT_TIMEOUT),
            Err(SutError::UnknownFixture(_))
        ));
        assert!(matches!(SutHandle::builtin("bmi", Some(99)), Err(SutError::UnknownMutant { .. })));
    }

    #[test]
    fn relative_commands_resolve_against_base_dir() {
        let dir = tempfile::tempdir().unwrap();
        let script = dir.path().join("echo.sh");
        std::fs::write(&script, "#!/bin/sh\necho 3\n").unwrap();
        let h = SutHandle::from_spec(&spec("echo.sh"), Some(dir.path()), DEFAULT_TIMEOUT).unwrap();
        assert!(h.describe().starts_with(dir.path().to_str().unwrap()));
        let h = SutHandle::from_spec(&spec("sh -c x"), Some(dir.path()), DEFAULT_TIMEOUT).unwrap();
        assert_eq!(h.describe(), "sh -c x");
    }

    #[test]
    fn determinism_check() {
        let steady = |_: &InputVector| Ok(f64::NAN);
        check_deterministic(&steady, "steady", &[InputVector::doubles(&[1.0])]).unwrap();
        let counter = AtomicU64::new(0);
        let drifting = |_: &InputVector| Ok(counter.fetch_add(1, Ordering::Relaxed) as f64);
        assert!(matches!(
            check_deterministic(&drifting, "drift", &[InputVector::doubles(&[1.0])]),
            Err(SutError::NonDeterministic { .. })
        ));
    }
}
