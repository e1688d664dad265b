//! Construction of the inductive learning task: mode bias, strict-type
//! background knowledge and context-dependent positive examples.

mod examples;
mod las;
mod modes;

use std::collections::BTreeSet;
use std::fmt;

use crate::asp_core::{AtomSet, PredicateSig, Program, Rule};
use crate::diag::Diagnostic;

pub use examples::{build_examples, parse_answer_set, sanitize_id};
pub use las::{parse_task, serialize_task};
pub use modes::{derive_head_modes, derive_body_modes, projection_rule, projection_type};

#[derive(Debug, thiserror::Error)]
pub enum TaskError {
    #[error("placeholder type `{ty}` of {mode} has no defining background rule and is not an instance predicate")]
    UndefinedType { ty: String, mode: String },
    #[error("example ids do not line up: instance `{instance}` vs answer set `{answer_set}`")]
    MismatchedIds { instance: String, answer_set: String },
    #[error("{instances} instance(s) but {answer_sets} answer set(s)")]
    CountMismatch { instances: usize, answer_sets: usize },
    #[error("answer set: {0}")]
    AnswerSet(String),
    #[error("task file: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    Head,
    Body,
}

/// `#modeh(p(var(t1), ..., var(tn))).` or the `#modeb` equivalent. Each
/// placeholder is a `var(type)`; the entries of `types` are the type names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeDeclaration {
    pub kind: ModeKind,
    pub predicate: String,
    pub types: Vec<String>,
}

impl ModeDeclaration {
    pub fn head(predicate: impl Into<String>, types: Vec<String>) -> Self {
        ModeDeclaration {
            kind: ModeKind::Head,
            predicate: predicate.into(),
            types,
        }
    }

    pub fn body(predicate: impl Into<String>, types: Vec<String>) -> Self {
        ModeDeclaration {
            kind: ModeKind::Body,
            predicate: predicate.into(),
            types,
        }
    }

    pub fn sig(&self) -> PredicateSig {
        PredicateSig::new(self.predicate.clone(), self.types.len())
    }

    fn sort_key(&self) -> (ModeKind, &str, usize) {
        (self.kind, &self.predicate, self.types.len())
    }
}

impl fmt::Display for ModeDeclaration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            ModeKind::Head => "modeh",
            ModeKind::Body => "modeb",
        };
        write!(f, "#{kw}({}", self.predicate)?;
        if !self.types.is_empty() {
            let args: Vec<_> = self.types.iter().map(|t| format!("var({t})")).collect();
            write!(f, "({})", args.join(", "))?;
        }
        f.write_str(").")
    }
}

/// Sort by (kind, predicate name, arity).
pub fn sort_modes(modes: &mut [ModeDeclaration]) {
    modes.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
}

/// Background rules defining the strict types, plus the set of predicate
/// names that serve as types.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StrictTypeRules {
    pub rules: Vec<Rule>,
    pub type_names: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub id: String,
    pub inclusions: AtomSet,
    pub exclusions: AtomSet,
    pub context: Program,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeBias {
    pub modes: Vec<ModeDeclaration>,
    pub types: StrictTypeRules,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LearningTask {
    pub background: Program,
    pub modes: Vec<ModeDeclaration>,
    pub examples: Vec<Example>,
}

impl LearningTask {
    pub fn head_modes(&self) -> impl Iterator<Item = &ModeDeclaration> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Head)
    }

    pub fn body_modes(&self) -> impl Iterator<Item = &ModeDeclaration> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Body)
    }

    /// Names used as placeholder types.
    pub fn type_names(&self) -> BTreeSet<String> {
        self.modes.iter().flat_map(|m| m.types.iter().cloned()).collect()
    }
}

/// Check that every placeholder type is defined by the background or is a
/// fact predicate of some example context, then render the task.
pub fn assemble_task(
    background: Program,
    mut modes: Vec<ModeDeclaration>,
    examples: Vec<Example>,
) -> Result<(LearningTask, String), TaskError> {
    sort_modes(&mut modes);
    let mut defined: BTreeSet<String> = background
        .rules()
        .filter_map(|r| r.head_atom())
        .map(|a| a.predicate.clone())
        .collect();
    for e in &examples {
        defined.extend(e.context.facts().into_iter().map(|a| a.predicate));
    }
    for m in &modes {
        for ty in &m.types {
            if !defined.contains(ty) {
                return Err(TaskError::UndefinedType {
                    ty: ty.clone(),
                    mode: m.to_string(),
                });
            }
        }
    }
    let task = LearningTask {
        background,
        modes,
        examples,
    };
    let text = serialize_task(&task);
    Ok((task, text))
}

/// Full pipeline from encoding, instances and answer sets to a task.
pub fn generate_task(
    encoding: &Program,
    instances: &[(String, Program)],
    answer_sets: &[(String, AtomSet)],
) -> Result<(LearningTask, String, Vec<Diagnostic>), TaskError> {
    let inst_preds = crate::analysis::instance_predicates(instances.iter().map(|(_, p)| p));
    let cls = crate::analysis::classify(encoding, &inst_preds);
    let head = derive_head_modes(encoding, &cls);
    let body = derive_body_modes(encoding, &cls, &head.modes);
    let mut diagnostics = cls.diagnostics.clone();
    diagnostics.extend(head.diagnostics.iter().cloned());
    diagnostics.extend(body.diagnostics.iter().cloned());
    let (examples, ex_diags) = build_examples(instances, answer_sets, &head.modes, encoding)?;
    diagnostics.extend(ex_diags);

    let background = modes::merge_background(encoding, &head.types, &body.types);
    let mut all_modes = head.modes;
    all_modes.extend(body.modes);
    let (task, text) = assemble_task(background, all_modes, examples)?;
    Ok((task, text, diagnostics))
}
