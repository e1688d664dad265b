use std::path::{Path, PathBuf};
use std::process::Command;

use crate::asp_core::{parse_program, Statement};

use super::{Hypothesis, LearnError, Provenance};

/// Command line of an external learner: `program flags... task-file`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalLearner {
    pub program: PathBuf,
    pub flags: Vec<String>,
}

impl ExternalLearner {
    pub fn new(program: impl Into<PathBuf>) -> Self {
        ExternalLearner {
            program: program.into(),
            flags: vec!["--force-safety".to_string()],
        }
    }
}

/// Run the learner on a task file and read one rule per non-empty line of
/// its standard output (`%` comment lines are skipped).
pub fn run_external_learner(task_file: &Path, learner: &ExternalLearner) -> Result<Hypothesis, LearnError> {
    let output = Command::new(&learner.program)
        .args(&learner.flags)
        .arg(task_file)
        .output()
        .map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => {
                LearnError::Config(format!("learner executable `{}` not found", learner.program.display()))
            }
            _ => LearnError::Config(format!("cannot run `{}`: {e}", learner.program.display())),
        })?;
    let stdout = String::from_utf8_lossy(&output.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&output.stderr).into_owned();
    if !output.status.success() {
        return Err(LearnError::ExternalFailed {
            status: output.status.to_string(),
            stdout,
            stderr,
        });
    }
    let mut rules = Vec::new();
    for (i, line) in stdout.lines().enumerate() {
        let text = line.trim();
        if text.is_empty() || text.starts_with('%') {
            continue;
        }
        let bad = |reason: String| LearnError::Unparseable {
            line: i + 1,
            text: text.to_string(),
            reason,
        };
        let p = parse_program(text).map_err(|e| bad(e.to_string()))?;
        match p.statements.as_slice() {
            [Statement::Rule(r)] if r.is_definite() => rules.push(r.clone()),
            _ => return Err(bad("expected exactly one definite rule".to_string())),
        }
    }
    Ok(Hypothesis::new(rules, Provenance::External))
}
