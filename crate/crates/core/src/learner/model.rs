//! Least models of definite programs by semi-naive forward chaining.

use std::collections::BTreeSet;

use crate::asp_core::ground::{for_each_match, subst_atom, AtomIndex};
use crate::asp_core::{safety, Atom, AtomSet, Comparison, Head, Program, Rule, Statement};

use super::LearnError;

/// A rule prepared for repeated matching.
struct Compiled<'a> {
    head: &'a Atom,
    lits: Vec<&'a Atom>,
    cmps: Vec<&'a Comparison>,
}

fn compile(rule: &Rule) -> Result<Compiled<'_>, LearnError> {
    let head = match &rule.head {
        Head::Atom(a) => a,
        Head::None => return Err(LearnError::NotDefinite(format!("constraint `{rule}`"))),
        Head::Choice(_) => return Err(LearnError::NotDefinite(format!("choice rule `{rule}`"))),
    };
    if rule.literals().any(|l| !l.positive) {
        return Err(LearnError::Negation(rule.to_string()));
    }
    if !safety::rule_is_safe(rule) || head.args.iter().any(|t| t.is_anonymous()) {
        return Err(LearnError::Unsafe(rule.to_string()));
    }
    Ok(Compiled {
        head,
        lits: rule.positive_atoms().collect(),
        cmps: rule.comparisons().collect(),
    })
}

fn compile_program(p: &Program) -> Result<Vec<Compiled<'_>>, LearnError> {
    let mut out = Vec::new();
    for s in &p.statements {
        match s {
            Statement::Rule(r) => out.push(compile(r)?),
            Statement::Show(_) | Statement::Const { .. } => {}
            other => return Err(LearnError::NotDefinite(format!("`{other}`"))),
        }
    }
    Ok(out)
}

/// Least Herbrand model of a definite program. Each round only considers
/// instantiations in which at least one body literal matches an atom derived
/// in the previous round.
pub fn least_model(p: &Program) -> Result<AtomSet, LearnError> {
    least_model_of(&[p])
}

/// Least model of the union of several programs.
pub fn least_model_of(parts: &[&Program]) -> Result<AtomSet, LearnError> {
    let mut rules = Vec::new();
    for p in parts {
        rules.extend(compile_program(p)?);
    }
    Ok(saturate(&rules, AtomSet::new()))
}

fn saturate(rules: &[Compiled<'_>], start: AtomSet) -> AtomSet {
    let mut model = start;
    let mut index = AtomIndex::from_atoms(&model);

    // First round: every rule against the full starting set.
    let mut delta = AtomSet::new();
    for r in rules {
        for_each_match(&r.lits, &r.cmps, &index, None, &mut |b| {
            let a = subst_atom(r.head, b);
            if !model.contains(&a) {
                delta.insert(a);
            }
        });
    }

    while !delta.is_empty() {
        for a in &delta {
            model.insert(a.clone());
            index.insert(a.clone());
        }
        let delta_index = AtomIndex::from_atoms(&delta);
        let preds: BTreeSet<_> = delta.iter().map(Atom::sig).collect();
        let mut next = AtomSet::new();
        for r in rules {
            for (i, lit) in r.lits.iter().enumerate() {
                if !preds.contains(&lit.sig()) {
                    continue;
                }
                for_each_match(&r.lits, &r.cmps, &index, Some((i, &delta_index)), &mut |b| {
                    let a = subst_atom(r.head, b);
                    if !model.contains(&a) {
                        next.insert(a);
                    }
                });
            }
        }
        delta = next;
    }
    model
}

/// Extend an already closed model `base` of some program P by the
/// consequences of `extra` rules, assuming no rule of P has a body
/// predicate that `extra` derives.
pub(crate) fn extend_model(base: &AtomSet, extra: &[&Rule]) -> Result<AtomSet, LearnError> {
    let compiled = extra.iter().map(|r| compile(r)).collect::<Result<Vec<_>, _>>()?;
    Ok(saturate(&compiled, base.clone()))
}
