//! From learned rules to `#heuristic` directives.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::asp_core::{safety, BodyItem, HeuristicDirective, Modifier, Rule, Term};
use crate::learner::Hypothesis;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum HeuristicError {
    #[error("learned rule `{0}` is unsafe")]
    UnsafeRule(String),
    #[error("`{0}` has no atom head")]
    NoHead(String),
    #[error("unknown annotation mode `{0}` (expected hard, soft or w[@p],modifier)")]
    BadMode(String),
}

/// Weight, priority and modifier attached to every directive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnnotationMode {
    /// `[1,true]`
    Hard,
    /// `[2,factor]`
    Soft,
    Custom {
        weight: i64,
        priority: Option<i64>,
        modifier: Modifier,
    },
}

impl AnnotationMode {
    pub fn triple(self) -> (i64, Option<i64>, Modifier) {
        match self {
            AnnotationMode::Hard => (1, None, Modifier::True),
            AnnotationMode::Soft => (2, None, Modifier::Factor),
            AnnotationMode::Custom {
                weight,
                priority,
                modifier,
            } => (weight, priority, modifier),
        }
    }
}

impl fmt::Display for AnnotationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnnotationMode::Hard => f.write_str("hard"),
            AnnotationMode::Soft => f.write_str("soft"),
            AnnotationMode::Custom {
                weight,
                priority,
                modifier,
            } => {
                write!(f, "{weight}")?;
                if let Some(p) = priority {
                    write!(f, "@{p}")?;
                }
                write!(f, ",{modifier}")
            }
        }
    }
}

/// `hard`, `soft`, or a custom annotation such as `3@2,sign`.
impl FromStr for AnnotationMode {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HeuristicError::BadMode(s.to_string());
        match s.trim() {
            "hard" => return Ok(AnnotationMode::Hard),
            "soft" => return Ok(AnnotationMode::Soft),
            _ => {}
        }
        let (wp, m) = s.trim().trim_start_matches('[').trim_end_matches(']').split_once(',').ok_or_else(bad)?;
        let modifier = Modifier::from_name(m.trim()).ok_or_else(bad)?;
        let (w, p) = match wp.split_once('@') {
            Some((w, p)) => (w, Some(p.trim().parse().map_err(|_| bad())?)),
            None => (wp, None),
        };
        Ok(AnnotationMode::Custom {
            weight: w.trim().parse().map_err(|_| bad())?,
            priority: p,
            modifier,
        })
    }
}

/// Predicates introduced as strict types when no task is at hand: the
/// `p_argI` projections.
pub fn is_projection_type(name: &str) -> bool {
    name.rsplit_once("_arg")
        .is_some_and(|(_, n)| !n.is_empty() && n.chars().all(|c| c.is_ascii_digit()))
}

/// Drop body atoms over strict-type predicates whose variables all occur in
/// some other remaining positive literal. Heads and other atoms are never
/// touched. Fails if a rule is unsafe to begin with.
pub fn postprocess(h: &Hypothesis, strict_types: &BTreeSet<String>) -> Result<Hypothesis, HeuristicError> {
    let mut rules = Vec::with_capacity(h.rules.len());
    for rule in &h.rules {
        if rule.head_atom().is_none() {
            return Err(HeuristicError::NoHead(rule.to_string()));
        }
        if !safety::rule_is_safe(rule) {
            return Err(HeuristicError::UnsafeRule(rule.to_string()));
        }
        let mut body = rule.body.clone();
        let mut i = 0;
        while i < body.len() {
            let redundant = match &body[i] {
                BodyItem::Literal(l) if l.positive && strict_types.contains(&l.atom.predicate) => {
                    l.atom.vars().all(|v| {
                        body.iter().enumerate().any(|(j, other)| {
                            j != i
                                && matches!(other, BodyItem::Literal(o) if o.positive && o.atom.vars().any(|w| w == v))
                        })
                    })
                }
                _ => false,
            };
            if redundant {
                let candidate = Rule {
                    head: rule.head.clone(),
                    body: [&body[..i], &body[i + 1..]].concat(),
                };
                if safety::rule_is_safe(&candidate) {
                    body = candidate.body;
                    continue;
                }
            }
            i += 1;
        }
        rules.push(Rule {
            head: rule.head.clone(),
            body,
        });
    }
    Ok(Hypothesis::new(rules, h.provenance))
}

/// `H :- B.` becomes `#heuristic H : B. [w@p,m]`.
pub fn rule_to_directive(r: &Rule, mode: AnnotationMode) -> Result<HeuristicDirective, HeuristicError> {
    let head = r.head_atom().ok_or_else(|| HeuristicError::NoHead(r.to_string()))?;
    let (w, p, m) = mode.triple();
    Ok(HeuristicDirective {
        head: head.clone(),
        body: r.body.clone(),
        weight: Term::Int(w),
        priority: p.map(Term::Int),
        modifier: m,
    })
}

/// One directive per rule, in rule order, newline-terminated. An empty
/// hypothesis yields an empty text and a logged warning.
pub fn emit_heuristics(h: &Hypothesis, mode: AnnotationMode) -> Result<String, HeuristicError> {
    if h.rules.is_empty() {
        log::warn!("empty hypothesis: no heuristic directives emitted");
    }
    let mut out = String::new();
    for r in &h.rules {
        out.push_str(&rule_to_directive(r, mode)?.to_string());
        out.push('\n');
    }
    Ok(out)
}
