use std::io::Read;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use wait_timeout::ChildExt;

use super::SutError;
use crate::value::InputVector;

/// A process launched once per input with the values as positional
/// arguments; the single number it prints on stdout is the output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExternalSut {
    argv: Vec<String>,
    timeout: Duration,
    working_dir: Option<PathBuf>,
}

impl ExternalSut {
    pub fn new(argv: Vec<String>, timeout: Duration) -> Self {
        assert!(!argv.is_empty(), "command needs a program");
        ExternalSut {
            argv,
            timeout,
            working_dir: None,
        }
    }

    pub fn with_working_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.working_dir = Some(dir.into());
        self
    }

    pub fn timeout(&self) -> Duration {
        self.timeout
    }

    /// The command line with `args` appended, space-joined.
    pub fn command_line(&self, args: &[String]) -> String {
        self.argv.iter().chain(args).cloned().collect::<Vec<_>>().join(" ")
    }

    pub fn execute(&self, input: &InputVector) -> Result<f64, SutError> {
        let args: Vec<String> = input.values().iter().map(|v| v.to_string()).collect();
        let command = self.command_line(&args);
        let mut cmd = Command::new(&self.argv[0]);
        cmd.args(&self.argv[1..])
            .args(&args)
            .stdin(Stdio::null())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped());
        if let Some(dir) = &self.working_dir {
            cmd.current_dir(dir);
        }
        let mut child = cmd.spawn().map_err(|e| SutError::Spawn {
            command: command.clone(),
            message: e.to_string(),
        })?;
        let stdout = drain(child.stdout.take());
        let stderr = drain(child.stderr.take());
        let status = match child.wait_timeout(self.timeout) {
            Ok(Some(status)) => status,
            Ok(None) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(SutError::Timeout {
                    command,
                    timeout: self.timeout,
                });
            }
            Err(e) => {
                return Err(SutError::Spawn {
                    command,
                    message: e.to_string(),
                })
            }
        };
        let stdout = stdout.join().unwrap_or_default();
        let stderr = stderr.join().unwrap_or_default();
        if !status.success() {
            return Err(SutError::Status {
                command,
                status: status.to_string(),
                stdout,
                stderr,
            });
        }
        parse_output(&stdout).ok_or(SutError::Unparsable { command, stdout })
    }
}

fn drain<R: Read + Send + 'static>(stream: Option<R>) -> thread::JoinHandle<String> {
    thread::spawn(move || {
        let mut buf = Vec::new();
        if let Some(mut s) = stream {
            let _ = s.read_to_end(&mut buf);
        }
        String::from_utf8_lossy(&buf).into_owned()
    })
}

/// Exactly one whitespace-delimited numeric token. `inf`, `-inf` and `nan`
/// (any case, optional sign) map to the IEEE values.
pub(crate) fn parse_output(stdout: &str) -> Option<f64> {
    let token = stdout.trim();
    if token.is_empty() || token.contains(char::is_whitespace) {
        return None;
    }
    token.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn fixtures_dir() -> PathBuf {
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
    }

    fn sh(script: &str) -> ExternalSut {
        ExternalSut::new(vec!["sh".into(), "-c".into(), script.into(), "sut".into()], Duration::from_secs(5))
    }

    #[test]
    fn output_tokens() {
        assert_eq!(parse_output(" 21.6049\n"), Some(21.6049));
        assert_eq!(parse_output("inf\n"), Some(f64::INFINITY));
        assert_eq!(parse_output("-inf"), Some(f64::NEG_INFINITY));
        assert!(parse_output("nan").unwrap().is_nan());
        assert!(parse_output("-nan").unwrap().is_nan());
        assert_eq!(parse_output("1e3"), Some(1000.0));
        assert_eq!(parse_output(""), None);
        assert_eq!(parse_output("1\n2\n"), None);
        assert_eq!(parse_output("1 2"), None);
        assert_eq!(parse_output("error"), None);
    }

    #[test]
    fn paper_script() {
        let bmi = ExternalSut::new(vec![fixtures_dir().join("bmi.sh").to_string_lossy().into()], Duration::from_secs(5));
        let x = bmi.execute(&InputVector::doubles(&[1.8, 70.0])).unwrap();
        assert!((x - 21.6049).abs() < 1e-4);
    }

    #[test]
    fn arguments_are_positional() {
        let echo = sh("echo $(( $1 * 10 + $2 ))");
        let u = InputVector(vec![crate::value::Value::Integer(4), crate::value::Value::Integer(2)]);
        assert_eq!(echo.execute(&u).unwrap(), 42.0);
    }

    #[test]
    fn failures_carry_context() {
        let u = InputVector::doubles(&[1.5]);
        match sh("echo oops; exit 3").execute(&u) {
            Err(SutError::Status { command, stdout, .. }) => {
                assert!(command.ends_with("1.5"));
                assert_eq!(stdout, "oops\n");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(sh("echo two words").execute(&u), Err(SutError::Unparsable { .. })));
        let slow = ExternalSut::new(vec!["sleep".into()], Duration::from_millis(200));
        assert!(matches!(slow.execute(&InputVector::doubles(&[10.0])), Err(SutError::Timeout { .. })));
        let missing = ExternalSut::new(vec!["/nonexistent/sut".into()], Duration::from_secs(1));
        assert!(matches!(missing.execute(&u), Err(SutError::Spawn { .. })));
    }

    #[test]
    fn working_dir_is_used() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("v"), "7\n").unwrap();
        let cat = ExternalSut::new(vec!["sh".into(), "-c".into(), "cat v".into()], Duration::from_secs(5))
            .with_working_dir(dir.path());
        assert_eq!(cat.execute(&InputVector::doubles(&[])).unwrap(), 7.0);
    }
}
