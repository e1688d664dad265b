//! Enumeration of the rules admitted by a mode bias under strict typing.

use std::collections::{BTreeSet, HashSet};

use crate::asp_core::{Atom, BodyItem, Program, Rule, Term};
use crate::diag::Diagnostic;
use crate::taskgen::{ModeDeclaration, ModeKind};

#[derive(Debug, Clone, Default)]
pub struct RuleSpace {
    pub rules: Vec<Rule>,
    pub diagnostics: Vec<Diagnostic>,
}

/// A body literal over variable ids; ids below the head arity are head
/// variables.
type Lit = (String, Vec<usize>);

struct Schema {
    predicate: String,
    types: Vec<String>,
}

struct Builder<'a> {
    head_arity: usize,
    schemas: &'a [Schema],
    typing: Vec<Lit>,
    max_body: usize,
    seen: HashSet<Vec<Lit>>,
    out: BTreeSet<Vec<Lit>>,
}

/// Smallest rendering of a body over all orders of the literals that mention
/// non-head variables, with those variables renumbered by first occurrence.
fn canonical(body: &[Lit], head_arity: usize) -> Vec<Lit> {
    let (mut fixed, mut free): (Vec<Lit>, Vec<Lit>) =
        body.iter().cloned().partition(|(_, args)| args.iter().all(|&v| v < head_arity));
    fixed.sort();
    let mut best: Option<Vec<Lit>> = None;
    free.sort();
    permute(&mut free, 0, &mut |perm| {
        let mut map: Vec<(usize, usize)> = Vec::new();
        let mut next = head_arity;
        let renamed: Vec<Lit> = perm
            .iter()
            .map(|(p, args)| {
                let args = args
                    .iter()
                    .map(|&v| {
                        if v < head_arity {
                            return v;
                        }
                        if let Some(&(_, n)) = map.iter().find(|(o, _)| *o == v) {
                            return n;
                        }
                        map.push((v, next));
                        next += 1;
                        next - 1
                    })
                    .collect();
                (p.clone(), args)
            })
            .collect();
        if best.as_ref().is_none_or(|b| &renamed < b) {
            best = Some(renamed);
        }
    });
    fixed.extend(best.unwrap_or_default());
    fixed
}

fn permute<T, F: FnMut(&[T])>(xs: &mut [T], k: usize, f: &mut F) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

impl Builder<'_> {
    fn search(&mut self, var_types: &mut Vec<String>, body: &mut Vec<Lit>) {
        let key = canonical(body, self.head_arity);
        if !self.seen.insert(key.clone()) {
            return;
        }
        let safe = (0..self.head_arity).all(|v| body.iter().any(|(_, args)| args.contains(&v)));
        if safe && (!body.is_empty() || self.head_arity == 0) {
            self.out.insert(key);
        }
        if body.len() == self.max_body {
            return;
        }
        for t in self.typing.clone() {
            if !body.contains(&t) {
                body.push(t);
                self.search(var_types, body);
                body.pop();
            }
        }
        for s in self.schemas {
            if s.types.is_empty() {
                continue;
            }
            let existing = var_types.len();
            let mut args = Vec::with_capacity(s.types.len());
            self.assign(s, 0, existing, var_types, &mut args, body);
        }
    }

    /// Choose, per argument, an existing variable of the right type or a
    /// fresh one. At least one argument must reuse a variable from before
    /// the literal so that the body stays connected to the head.
    fn assign(
        &mut self,
        s: &Schema,
        k: usize,
        existing: usize,
        var_types: &mut Vec<String>,
        args: &mut Vec<usize>,
        body: &mut Vec<Lit>,
    ) {
        if k == s.types.len() {
            if !args.iter().any(|&v| v < existing) {
                return;
            }
            let lit = (s.predicate.clone(), args.clone());
            if body.contains(&lit) {
                return;
            }
            body.push(lit);
            self.search(var_types, body);
            body.pop();
            return;
        }
        let ty = &s.types[k];
        for v in 0..var_types.len() {
            if &var_types[v] == ty {
                args.push(v);
                self.assign(s, k + 1, existing, var_types, args, body);
                args.pop();
            }
        }
        var_types.push(ty.clone());
        args.push(var_types.len() - 1);
        self.assign(s, k + 1, existing, var_types, args, body);
        args.pop();
        var_types.pop();
    }
}

/// Order body literals by the first head variable they mention, then by
/// text, and name variables `V0, V1, ...` by first occurrence.
fn to_rule(head: &ModeDeclaration, body: &[Lit]) -> Rule {
    let n = head.types.len();
    let mut lits: Vec<&Lit> = body.iter().collect();
    lits.sort_by_key(|(p, args)| (args.iter().copied().filter(|&v| v < n).min().unwrap_or(usize::MAX), p.clone(), args.clone()));
    let mut names: Vec<(usize, usize)> = Vec::new();
    let mut next = n;
    let mut var = |v: usize| -> Term {
        if v < n {
            return Term::var(format!("V{v}"));
        }
        if let Some(&(_, k)) = names.iter().find(|(o, _)| *o == v) {
            return Term::var(format!("V{k}"));
        }
        names.push((v, next));
        next += 1;
        Term::var(format!("V{}", next - 1))
    };
    let head_atom = Atom::new(head.predicate.clone(), (0..n).map(&mut var).collect());
    let items = lits
        .into_iter()
        .map(|(p, args)| BodyItem::pos(Atom::new(p.clone(), args.iter().map(|&v| var(v)).collect())))
        .collect();
    Rule::normal(head_atom, items)
}

/// All safe, linked rules with a `#modeh` head and at most `max_body`
/// literals from `#modeb` schemas or typing atoms `t(V)` for head variables
/// whose type `t` is defined in `background`. Variables are shared only
/// between placeholders of the same type. `max_body` defaults to the head
/// arity plus one.
pub fn enumerate_rule_space(modes: &[ModeDeclaration], background: &Program, max_body: Option<usize>) -> RuleSpace {
    let defined: BTreeSet<&str> = background
        .rules()
        .filter_map(|r| r.head_atom())
        .filter(|a| a.args.len() == 1)
        .map(|a| a.predicate.as_str())
        .collect();
    let schemas: Vec<Schema> = modes
        .iter()
        .filter(|m| m.kind == ModeKind::Body)
        .map(|m| Schema {
            predicate: m.predicate.clone(),
            types: m.types.clone(),
        })
        .collect();
    let body_types: BTreeSet<&str> = schemas.iter().flat_map(|s| s.types.iter().map(String::as_str)).collect();

    let mut space = RuleSpace::default();
    for head in modes.iter().filter(|m| m.kind == ModeKind::Head) {
        let untyped: Vec<&String> = head
            .types
            .iter()
            .filter(|t| !body_types.contains(t.as_str()) && !defined.contains(t.as_str()))
            .collect();
        if let Some(t) = untyped.first() {
            space.diagnostics.push(Diagnostic::warning(format!(
                "{head}: no body literal can bind a variable of type `{t}`; head skipped"
            )));
            continue;
        }
        let typing = head
            .types
            .iter()
            .enumerate()
            .filter(|(_, t)| defined.contains(t.as_str()))
            .map(|(i, t)| (t.clone(), vec![i]))
            .collect();
        let mut b = Builder {
            head_arity: head.types.len(),
            schemas: &schemas,
            typing,
            max_body: max_body.unwrap_or(head.types.len() + 1),
            seen: HashSet::new(),
            out: BTreeSet::new(),
        };
        let mut var_types = head.types.clone();
        b.search(&mut var_types, &mut Vec::new());
        let mut rules: Vec<Rule> = b.out.iter().map(|body| to_rule(head, body)).collect();
        rules.sort_by_cached_key(|r| (r.body.len(), r.to_string()));
        space.rules.extend(rules);
    }
    space
}
