//! Variable safety: every variable of a statement must be bound by a
//! positive body literal (or by an assignment `V = expr` whose right-hand
//! side is bound).

use std::collections::BTreeSet;

use super::ast::*;
use crate::diag::Diagnostic;

/// Variables bound by the positive literals and assignments among `items`,
/// starting from `bound`.
pub fn bound_vars(items: &[BodyItem], bound: &mut BTreeSet<String>) {
    for item in items {
        if let BodyItem::Literal(l) = item {
            if l.positive {
                bound.extend(l.atom.vars().map(str::to_string));
            }
        }
    }
    loop {
        let mut changed = false;
        for item in items {
            if let BodyItem::Comparison(c) = item {
                if c.op != CmpOp::Eq {
                    continue;
                }
                for (target, source) in [(&c.lhs, &c.rhs), (&c.rhs, &c.lhs)] {
                    if let Some(v) = target.as_var() {
                        if bound.contains(v) {
                            continue;
                        }
                        let mut vs = Vec::new();
                        source.vars(&mut vs);
                        if vs.iter().all(|x| bound.contains(x)) {
                            bound.insert(v.to_string());
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
}

fn needed_in_body(items: &[BodyItem], out: &mut BTreeSet<String>) {
    for item in items {
        match item {
            BodyItem::Literal(l) if !l.positive => out.extend(l.atom.vars().map(str::to_string)),
            BodyItem::Literal(_) => {}
            BodyItem::Comparison(c) => {
                let mut vs = Vec::new();
                c.lhs.vars(&mut vs);
                c.rhs.vars(&mut vs);
                out.extend(vs);
            }
        }
    }
}

fn term_vars(t: &Term, out: &mut BTreeSet<String>) {
    if let Term::Var(v) = t {
        out.insert(v.clone());
    }
}

/// Unbound variables of a statement, sorted. Anonymous variables in a head
/// are reported as `_`.
pub fn unsafe_vars(stmt: &Statement) -> BTreeSet<String> {
    let mut missing = BTreeSet::new();
    let mut check = |needed: BTreeSet<String>, bound: &BTreeSet<String>| {
        missing.extend(needed.difference(bound).cloned());
    };
    match stmt {
        Statement::Rule(rule) => {
            let mut bound = BTreeSet::new();
            bound_vars(&rule.body, &mut bound);
            let mut needed = BTreeSet::new();
            needed_in_body(&rule.body, &mut needed);
            match &rule.head {
                Head::None => {}
                Head::Atom(a) => {
                    for t in &a.args {
                        term_vars(t, &mut needed);
                    }
                }
                Head::Choice(c) => {
                    for t in c.lower.iter().chain(c.upper.iter()) {
                        term_vars(t, &mut needed);
                    }
                    for e in &c.elements {
                        let mut local = bound.clone();
                        bound_vars(&e.condition, &mut local);
                        let mut local_needed = BTreeSet::new();
                        for t in &e.atom.args {
                            term_vars(t, &mut local_needed);
                        }
                        needed_in_body(&e.condition, &mut local_needed);
                        check(local_needed, &local);
                    }
                }
            }
            check(needed, &bound);
        }
        Statement::Weak(w) => {
            let mut bound = BTreeSet::new();
            bound_vars(&w.body, &mut bound);
            let mut needed = BTreeSet::new();
            needed_in_body(&w.body, &mut needed);
            let mut vs = Vec::new();
            w.weight.vars(&mut vs);
            for e in w.priority.iter().chain(w.terms.iter()) {
                e.vars(&mut vs);
            }
            needed.extend(vs);
            check(needed, &bound);
        }
        Statement::Heuristic(h) => {
            let mut bound = BTreeSet::new();
            bound_vars(&h.body, &mut bound);
            let mut needed = BTreeSet::new();
            needed_in_body(&h.body, &mut needed);
            for t in h.head.args.iter().chain([&h.weight]).chain(h.priority.iter()) {
                term_vars(t, &mut needed);
            }
            check(needed, &bound);
        }
        Statement::Show(_) | Statement::Const { .. } => {}
    }
    missing
}

pub fn check_statement(stmt: &Statement) -> Vec<Diagnostic> {
    let missing = unsafe_vars(stmt);
    if missing.is_empty() {
        return Vec::new();
    }
    let names: Vec<_> = missing.into_iter().collect();
    vec![Diagnostic::warning(format!(
        "unsafe variable(s) {} not bound by a positive body literal",
        names.join(", ")
    ))]
}

pub fn is_safe(stmt: &Statement) -> bool {
    unsafe_vars(stmt).is_empty()
}

pub fn rule_is_safe(rule: &Rule) -> bool {
    unsafe_vars(&Statement::Rule(rule.clone())).is_empty()
}
