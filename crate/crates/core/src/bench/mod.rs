//! Benchmarking solver configurations and reporting relative improvements.

mod config;
mod output;
mod report;
mod runner;

use std::fmt;
use std::path::PathBuf;

pub use config::{BenchConfig, CustomConfig, HeuristicFiles};
pub use output::{parse_solver_output, Dialect};
pub use report::{natural_cmp, parse_results_csv, report, Report};
pub use runner::{run_bench, run_config, Limits, Solver};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{what} `{path}` does not exist")]
    MissingFile { what: &'static str, path: PathBuf },
    #[error("cannot launch solver `{solver}`: {source}")]
    Launch {
        solver: String,
        #[source]
        source: std::io::Error,
    },
    #[error("instance ids differ: `{0}` vs `{1}`")]
    MismatchedIds(String, String),
    #[error("bad config {path}: {reason}")]
    Config { path: PathBuf, reason: String },
    #[error("bad results file: {0}")]
    Results(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ConfigLabel {
    Plain,
    LearnedHard,
    LearnedSoft,
    BuiltIn,
    HumanMade,
    Custom(String),
}

impl ConfigLabel {
    pub const STANDARD: [ConfigLabel; 5] = [
        ConfigLabel::Plain,
        ConfigLabel::LearnedHard,
        ConfigLabel::LearnedSoft,
        ConfigLabel::BuiltIn,
        ConfigLabel::HumanMade,
    ];

    pub fn parse(s: &str) -> ConfigLabel {
        ConfigLabel::STANDARD
            .into_iter()
            .find(|l| l.to_string() == s)
            .unwrap_or_else(|| ConfigLabel::Custom(s.to_string()))
    }
}

impl fmt::Display for ConfigLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConfigLabel::Plain => "plain",
            ConfigLabel::LearnedHard => "learned (hard)",
            ConfigLabel::LearnedSoft => "learned (soft)",
            ConfigLabel::BuiltIn => "built-in",
            ConfigLabel::HumanMade => "human-made",
            ConfigLabel::Custom(s) => s,
        })
    }
}

/// Flags for the solver's own domain heuristic preferring atoms that occur
/// in the optimisation statement.
pub const BUILT_IN_FLAGS: [&str; 2] = ["--heuristic=Domain", "--dom-mod=false,opt"];
/// Directives in input files are only honoured under the domain heuristic.
pub const DOMAIN_FLAG: &str = "--heuristic=Domain";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverConfig {
    pub label: ConfigLabel,
    pub files: Vec<PathBuf>,
    pub flags: Vec<String>,
}

impl SolverConfig {
    pub fn plain() -> Self {
        SolverConfig {
            label: ConfigLabel::Plain,
            files: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn learned_hard(heuristics: impl Into<PathBuf>) -> Self {
        Self::with_file(ConfigLabel::LearnedHard, heuristics)
    }

    pub fn learned_soft(heuristics: impl Into<PathBuf>) -> Self {
        Self::with_file(ConfigLabel::LearnedSoft, heuristics)
    }

    pub fn built_in() -> Self {
        SolverConfig {
            label: ConfigLabel::BuiltIn,
            files: Vec::new(),
            flags: BUILT_IN_FLAGS.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn human_made(heuristics: impl Into<PathBuf>) -> Self {
        Self::with_file(ConfigLabel::HumanMade, heuristics)
    }

    fn with_file(label: ConfigLabel, file: impl Into<PathBuf>) -> Self {
        SolverConfig {
            label,
            files: vec![file.into()],
            flags: vec![DOMAIN_FLAG.to_string()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RunStatus {
    OptimumFound,
    Satisfiable,
    NoAnswer,
    Error,
}

impl RunStatus {
    pub fn has_value(self) -> bool {
        matches!(self, RunStatus::OptimumFound | RunStatus::Satisfiable)
    }
}

impl fmt::Display for RunStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunStatus::OptimumFound => "optimum-found",
            RunStatus::Satisfiable => "satisfiable",
            RunStatus::NoAnswer => "no-answer-within-limit",
            RunStatus::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub instance: String,
    pub label: ConfigLabel,
    pub status: RunStatus,
    /// Present iff the status has a value.
    pub value: Option<i64>,
    pub wall_time: f64,
    pub exit: String,
}

impl RunResult {
    /// A result carrying only what the report needs.
    pub fn summary(instance: impl Into<String>, label: ConfigLabel, value: Option<i64>) -> Self {
        RunResult {
            instance: instance.into(),
            label,
            status: if value.is_some() {
                RunStatus::Satisfiable
            } else {
                RunStatus::NoAnswer
            },
            value,
            wall_time: 0.0,
            exit: String::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ImprovementCell {
    Percentage(f64),
    OnlyWithHeuristic,
    OnlyWithoutHeuristic,
    BothUnsolved,
}

impl ImprovementCell {
    pub fn is_improvement(self) -> bool {
        match self {
            ImprovementCell::Percentage(p) => p > 0.0,
            ImprovementCell::OnlyWithHeuristic => true,
            _ => false,
        }
    }

    pub fn is_deterioration(self) -> bool {
        match self {
            ImprovementCell::Percentage(p) => p < 0.0,
            ImprovementCell::OnlyWithoutHeuristic => true,
            _ => false,
        }
    }
}

impl fmt::Display for ImprovementCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ImprovementCell::Percentage(0.0) => f.write_str("0.00%"),
            ImprovementCell::Percentage(p) => write!(f, "{p:+.2}%"),
            ImprovementCell::OnlyWithHeuristic => f.write_str("100%"),
            ImprovementCell::OnlyWithoutHeuristic => f.write_str("-inf"),
            ImprovementCell::BothUnsolved => Ok(()),
        }
    }
}

/// Relative change of the minimised cost `100 * (v_p - v_o) / |v_p|`, so a
/// positive percentage is an improvement over `plain`.
pub fn improvement(plain: &RunResult, other: &RunResult) -> Result<ImprovementCell, BenchError> {
    if plain.instance != other.instance {
        return Err(BenchError::MismatchedIds(plain.instance.clone(), other.instance.clone()));
    }
    Ok(improvement_of(plain.value, other.value))
}

pub(crate) fn improvement_of(plain: Option<i64>, other: Option<i64>) -> ImprovementCell {
    match (plain, other) {
        (None, None) => ImprovementCell::BothUnsolved,
        (None, Some(_)) => ImprovementCell::OnlyWithHeuristic,
        (Some(_), None) => ImprovementCell::OnlyWithoutHeuristic,
        (Some(p), Some(o)) if p == o => ImprovementCell::Percentage(0.0),
        (Some(0), Some(o)) if o > 0 => ImprovementCell::OnlyWithoutHeuristic,
        (Some(0), Some(_)) => ImprovementCell::OnlyWithHeuristic,
        (Some(p), Some(o)) => ImprovementCell::Percentage(100.0 * (p as f64 - o as f64) / (p as f64).abs()),
    }
}
