//! Hypothesis learning: an embedded learner (rule-space enumeration, least
//! model coverage, greedy cover) and an adapter for external ILP systems.

mod external;
mod model;
mod rulespace;
mod search;

use std::fmt;

use crate::asp_core::{parse_program, Program, Rule, Statement};

pub use external::{run_external_learner, ExternalLearner};
pub use model::{least_model, least_model_of};
pub use rulespace::{enumerate_rule_space, RuleSpace};
pub use search::{covers, search_hypothesis, CoverageReport};

#[derive(Debug, thiserror::Error)]
pub enum LearnError {
    #[error("default negation is not supported in definite programs: `{0}`")]
    Negation(String),
    #[error("not a definite rule: {0}")]
    NotDefinite(String),
    #[error("unsafe rule `{0}`")]
    Unsafe(String),
    #[error("learner configuration: {0}")]
    Config(String),
    #[error("external learner exited with {status}:\n{stderr}")]
    ExternalFailed { status: String, stdout: String, stderr: String },
    #[error("line {line}: cannot parse learner output `{text}`: {reason}")]
    Unparseable { line: usize, text: String, reason: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Embedded,
    External,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub rules: Vec<Rule>,
    pub provenance: Provenance,
}

impl Hypothesis {
    pub fn new(rules: Vec<Rule>, provenance: Provenance) -> Self {
        Hypothesis { rules, provenance }
    }

    /// Total number of literals, heads included.
    pub fn cost(&self) -> usize {
        self.rules.iter().map(rule_cost).sum()
    }

    pub fn as_program(&self) -> Program {
        Program::from_rules(self.rules.iter().cloned())
    }

    /// Parse a hypothesis file: definite rules, one statement each.
    pub fn parse(text: &str, provenance: Provenance) -> Result<Self, LearnError> {
        let p = parse_program(text).map_err(|e| LearnError::Unparseable {
            line: e.span.line as usize,
            text: text.lines().nth(e.span.line.saturating_sub(1) as usize).unwrap_or("").trim().to_string(),
            reason: e.to_string(),
        })?;
        let mut rules = Vec::new();
        for s in p.statements {
            match s {
                Statement::Rule(r) if r.is_definite() => rules.push(r),
                other => return Err(LearnError::NotDefinite(format!("`{other}`"))),
            }
        }
        Ok(Hypothesis { rules, provenance })
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

pub(crate) fn rule_cost(r: &Rule) -> usize {
    1 + r.body.len()
}
