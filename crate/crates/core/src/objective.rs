//! Black-box objectives: closures and an external process speaking a line protocol.
//!
//! Each request is one line of space-separated decimal coordinates; each reply
//! is one line holding a decimal value, or `ERROR <message>`.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("objective returned a non-finite value {value} at {x:?}")]
    NonFinite { x: Vec<f64>, value: f64 },

    #[error("failed to start oracle `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },

    #[error("oracle i/o failed: {0}")]
    Io(#[from] std::io::Error),

    #[error("oracle protocol violation: {reason} (line: {line:?})")]
    Protocol { reason: String, line: String },

    #[error("oracle reported an error: {0}")]
    Remote(String),

    #[error("{0}")]
    Other(String),
}

pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError>;
}

impl<F> Objective for F
where
    F: FnMut(&[f64]) -> f64,
{
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        let value = self(x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite {
                x: x.to_vec(),
                value,
            })
        }
    }
}

/// A long-lived child process answering one evaluation per line.
pub struct ExternalOracle {
    child: Child,
    stdin: Option<ChildStdin>,
    stdout: BufReader<ChildStdout>,
    command: String,
}

impl std::fmt::Debug for ExternalOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExternalOracle")
            .field("command", &self.command)
            .field("pid", &self.child.id())
            .finish()
    }
}

impl ExternalOracle {
    /// `argv[0]` is the program, the rest its arguments.
    pub fn spawn<S: AsRef<str>>(argv: &[S]) -> Result<Self, EvalError> {
        let command = argv
            .iter()
            .map(|s| s.as_ref())
            .collect::<Vec<_>>()
            .join(" ");
        let Some((program, args)) = argv.split_first() else {
            return Err(EvalError::Spawn {
                command,
                source: std::io::Error::new(std::io::ErrorKind::InvalidInput, "empty command"),
            });
        };
        let mut child = Command::new(program.as_ref())
            .args(args.iter().map(|a| a.as_ref()))
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|source| EvalError::Spawn {
                command: command.clone(),
                source,
            })?;
        let stdin = child.stdin.take();
        let stdout = BufReader::new(child.stdout.take().expect("stdout is piped"));
        Ok(Self {
            child,
            stdin,
            stdout,
            command,
        })
    }

    /// Run `command` through `sh -c`.
    pub fn spawn_shell(command: &str) -> Result<Self, EvalError> {
        Self::spawn(&["sh", "-c", command])
    }

    pub fn command(&self) -> &str {
        &self.command
    }
}

/// Space-separated shortest round-trip decimal form of `x`, newline-terminated.
pub fn format_request(x: &[f64]) -> String {
    let mut line = x
        .iter()
        .map(|v| format!("{v:?}"))
        .collect::<Vec<_>>()
        .join(" ");
    line.push('\n');
    line
}

/// Interpret one reply line.
pub fn parse_reply(line: &str) -> Result<f64, EvalError> {
    let trimmed = line.trim();
    if let Some(msg) = trimmed.strip_prefix("ERROR") {
        return Err(EvalError::Remote(msg.trim().to_string()));
    }
    let value: f64 = trimmed.parse().map_err(|_| EvalError::Protocol {
        reason: "reply is not a decimal number".into(),
        line: line.trim_end_matches(['\n', '\r']).to_string(),
    })?;
    if !value.is_finite() {
        return Err(EvalError::Protocol {
            reason: "reply is not finite".into(),
            line: line.trim_end_matches(['\n', '\r']).to_string(),
        });
    }
    Ok(value)
}

impl Objective for ExternalOracle {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64, EvalError> {
        let stdin = self.stdin.as_mut().ok_or_else(|| EvalError::Protocol {
            reason: "oracle input already closed".into(),
            line: String::new(),
        })?;
        stdin.write_all(format_request(x).as_bytes())?;
        stdin.flush()?;
        let mut line = String::new();
        if self.stdout.read_line(&mut line)? == 0 {
            return Err(EvalError::Protocol {
                reason: "oracle closed its output".into(),
                line,
            });
        }
        parse_reply(&line)
    }
}

impl Drop for ExternalOracle {
    fn drop(&mut self) {
        drop(self.stdin.take());
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
