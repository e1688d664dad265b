use serde::Deserialize;

use super::RunStatus;

/// Reporting conventions of the solver's standard output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Dialect {
    /// `Answer: n`, `Optimization: v ...`, then `OPTIMUM FOUND`,
    /// `SATISFIABLE`, `UNSATISFIABLE` or `UNKNOWN`.
    #[default]
    Clingo,
    /// `ANSWER`, `COST v@l ...`, then `OPTIMUM` or `INCONSISTENT`.
    Competition,
}

fn first_int(s: &str) -> Option<i64> {
    let tok = s.split_whitespace().next()?;
    tok.split('@').next()?.parse().ok()
}

/// Status and last reported optimisation value. For lexicographic
/// optimisation only the first (most significant) level is kept. Lines
/// that fit no pattern are ignored.
pub fn parse_solver_output(text: &str, dialect: Dialect) -> (RunStatus, Option<i64>) {
    let mut value = None;
    let mut answered = false;
    let mut result = None;
    for line in text.lines().map(str::trim) {
        match dialect {
            Dialect::Clingo => {
                if line.starts_with("Answer:") {
                    answered = true;
                } else if let Some(rest) = line.strip_prefix("Optimization:") {
                    if let Some(v) = first_int(rest) {
                        value = Some(v);
                        answered = true;
                    }
                } else {
                    match line {
                        "OPTIMUM FOUND" => result = Some(RunStatus::OptimumFound),
                        "SATISFIABLE" => result = Some(RunStatus::Satisfiable),
                        "UNSATISFIABLE" => result = Some(RunStatus::Error),
                        "UNKNOWN" => result = Some(RunStatus::NoAnswer),
                        _ => {}
                    }
                }
            }
            Dialect::Competition => {
                if line == "ANSWER" {
                    answered = true;
                } else if let Some(rest) = line.strip_prefix("COST") {
                    if let Some(v) = first_int(rest) {
                        value = Some(v);
                        answered = true;
                    }
                } else if line == "OPTIMUM" {
                    result = Some(RunStatus::OptimumFound);
                } else if line == "INCONSISTENT" {
                    result = Some(RunStatus::Error);
                }
            }
        }
    }
    // An answer without an optimisation line has cost zero.
    if answered && value.is_none() {
        value = Some(0);
    }
    match (result, value) {
        (Some(RunStatus::Error), _) => (RunStatus::Error, None),
        (Some(RunStatus::OptimumFound), Some(v)) => (RunStatus::OptimumFound, Some(v)),
        (_, Some(v)) => (RunStatus::Satisfiable, Some(v)),
        (_, None) => (RunStatus::NoAnswer, None),
    }
}
