//! Slow, obviously correct reference implementations and random inputs.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use heulearn::asp_core::{Atom, AtomSet, BodyItem, CmpOp, Expr, Head, Program, Rule, Statement, Term};
use heulearn::taskgen::{ModeDeclaration, ModeKind};

// ---------------------------------------------------------------------------
// Random definite programs

const VARS: [&str; 3] = ["X", "Y", "Z"];

fn constant(i: usize) -> String {
    if i.is_multiple_of(2) {
        format!("c{i}")
    } else {
        i.to_string()
    }
}

fn atom_text(pred: usize, args: &[String]) -> String {
    if args.is_empty() {
        format!("p{pred}")
    } else {
        format!("p{pred}({})", args.join(","))
    }
}

/// Shape of a random definite program: predicate arities and constant count.
#[derive(Debug, Clone)]
pub struct Signature {
    pub arities: Vec<usize>,
    pub constants: usize,
}

pub fn arb_signature(max_preds: usize, max_consts: usize) -> impl Strategy<Value = Signature> {
    (prop::collection::vec(0..=2usize, 1..=max_preds), 1..=max_consts)
        .prop_map(|(arities, constants)| Signature { arities, constants })
}

pub fn arb_fact(sig: &Signature) -> impl Strategy<Value = String> {
    let arities = sig.arities.clone();
    let n = sig.constants;
    (0..arities.len())
        .prop_flat_map(move |p| (Just(p), prop::collection::vec(0..n, arities[p])))
        .prop_map(|(p, args)| format!("{}.", atom_text(p, &args.into_iter().map(constant).collect::<Vec<_>>())))
}

/// A safe definite rule, sometimes with a `V1 != V2` built-in.
pub fn arb_rule(sig: &Signature) -> impl Strategy<Value = String> {
    let arities = sig.arities.clone();
    let np = arities.len();
    let n = sig.constants;
    let term = 0..(VARS.len() + n);
    (
        prop::collection::vec((0..np, prop::collection::vec(term.clone(), 2)), 1..=3),
        0..np,
        prop::collection::vec(term, 2),
        any::<bool>(),
    )
        .prop_map(move |(body, head, head_args, neq)| {
            let render = |t: usize| {
                if t < VARS.len() {
                    VARS[t].to_string()
                } else {
                    constant(t - VARS.len())
                }
            };
            let mut used: Vec<String> = Vec::new();
            let mut lits = Vec::new();
            for (p, args) in body {
                let args: Vec<String> = args[..arities[p]].iter().map(|&t| render(t)).collect();
                for a in &args {
                    if VARS.contains(&a.as_str()) && !used.contains(a) {
                        used.push(a.clone());
                    }
                }
                lits.push(atom_text(p, &args));
            }
            let hargs: Vec<String> = head_args[..arities[head]]
                .iter()
                .map(|&t| {
                    let s = render(t);
                    if VARS.contains(&s.as_str()) && !used.contains(&s) {
                        constant(0)
                    } else {
                        s
                    }
                })
                .collect();
            if neq && used.len() >= 2 {
                lits.push(format!("{} != {}", used[0], used[1]));
            }
            format!("{} :- {}.", atom_text(head, &hargs), lits.join(", "))
        })
}

/// Facts followed by rules.
pub fn arb_definite_program(max_preds: usize, max_consts: usize) -> impl Strategy<Value = String> {
    arb_signature(max_preds, max_consts).prop_flat_map(|sig| {
        (
            prop::collection::vec(arb_fact(&sig), 0..12),
            prop::collection::vec(arb_rule(&sig), 0..8),
        )
            .prop_map(|(f, r)| [f, r].concat().join("\n"))
    })
}

// ---------------------------------------------------------------------------
// Naive semantics

fn collect_terms(rule: &Rule, out: &mut BTreeSet<Term>) {
    let mut add = |a: &Atom| out.extend(a.args.iter().filter(|t| t.is_ground()).cloned());
    if let Head::Atom(a) = &rule.head {
        add(a);
    }
    for l in rule.literals() {
        add(&l.atom);
    }
}

fn rule_vars(rule: &Rule) -> Vec<String> {
    let mut vars = BTreeSet::new();
    if let Head::Atom(a) = &rule.head {
        vars.extend(a.vars().map(String::from));
    }
    for l in rule.literals() {
        vars.extend(l.atom.vars().map(String::from));
    }
    vars.into_iter().collect()
}

fn apply(a: &Atom, s: &BTreeMap<String, Term>) -> Atom {
    Atom::new(
        a.predicate.clone(),
        a.args
            .iter()
            .map(|t| match t {
                Term::Var(v) => s[v].clone(),
                t => t.clone(),
            })
            .collect(),
    )
}

fn term_of(e: &Expr, s: &BTreeMap<String, Term>) -> Term {
    match e {
        Expr::Term(Term::Var(v)) => s[v].clone(),
        Expr::Term(t) => t.clone(),
        other => panic!("oracle handles plain terms only, got {other:?}"),
    }
}

fn builtins_hold(rule: &Rule, s: &BTreeMap<String, Term>) -> bool {
    rule.comparisons().all(|c| {
        let (l, r) = (term_of(&c.lhs, s), term_of(&c.rhs, s));
        match c.op {
            CmpOp::Eq => l == r,
            CmpOp::Ne => l != r,
            op => panic!("oracle does not order terms ({op:?})"),
        }
    })
}

/// Every assignment of `vars` to `universe`.
fn assignments(vars: &[String], universe: &[Term], f: &mut dyn FnMut(&BTreeMap<String, Term>)) {
    fn go(
        k: usize,
        vars: &[String],
        universe: &[Term],
        cur: &mut BTreeMap<String, Term>,
        f: &mut dyn FnMut(&BTreeMap<String, Term>),
    ) {
        if k == vars.len() {
            f(cur);
            return;
        }
        for t in universe {
            cur.insert(vars[k].clone(), t.clone());
            go(k + 1, vars, universe, cur, f);
        }
    }
    go(0, vars, universe, &mut BTreeMap::new(), f)
}

fn definite_rules(p: &Program) -> Vec<&Rule> {
    p.statements
        .iter()
        .filter_map(|s| match s {
            Statement::Rule(r) => Some(r),
            _ => None,
        })
        .collect()
}

/// Least model by grounding every rule over the whole Herbrand universe
/// and applying the immediate-consequence operator until nothing changes.
pub fn naive_least_model(parts: &[&Program]) -> AtomSet {
    let rules: Vec<&Rule> = parts.iter().flat_map(|p| definite_rules(p)).collect();
    let mut universe = BTreeSet::new();
    for r in &rules {
        collect_terms(r, &mut universe);
    }
    let universe: Vec<Term> = universe.into_iter().collect();
    let mut model = AtomSet::new();
    loop {
        let mut next = model.clone();
        for r in &rules {
            let Head::Atom(h) = &r.head else { panic!("not definite: {r}") };
            assignments(&rule_vars(r), &universe, &mut |s| {
                if r.literals().all(|l| l.positive && model.contains(&apply(&l.atom, s))) && builtins_hold(r, s) {
                    next.insert(apply(h, s));
                }
            });
        }
        if next == model {
            return model;
        }
        model = next;
    }
}

/// Ground instances of `rule` with positive body inside `domain`, by trying
/// every substitution over the terms of `domain` and `rule`. Built-ins are
/// dropped once satisfied.
pub fn brute_force_ground(rule: &Rule, domain: &AtomSet) -> BTreeSet<String> {
    let mut universe: BTreeSet<Term> = domain.iter().flat_map(|a| a.args.iter().cloned()).collect();
    collect_terms(rule, &mut universe);
    let universe: Vec<Term> = universe.into_iter().collect();
    let mut out = BTreeSet::new();
    assignments(&rule_vars(rule), &universe, &mut |s| {
        if rule.literals().all(|l| domain.contains(&apply(&l.atom, s))) && builtins_hold(rule, s) {
            let head = match &rule.head {
                Head::Atom(a) => Head::Atom(apply(a, s)),
                _ => Head::None,
            };
            let body = rule
                .literals()
                .map(|l| BodyItem::pos(apply(&l.atom, s)))
                .collect();
            out.insert(Rule { head, body }.to_string());
        }
    });
    out
}

// ---------------------------------------------------------------------------
// Classification by paths

/// A predicate is instance-determined iff it is no choice head and nothing
/// reachable from it through defining rules is a choice head or lies on a
/// cycle.
pub fn determined_by_paths(encoding: &Program) -> BTreeSet<String> {
    let mut edges: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut heads = BTreeSet::new();
    let mut all = BTreeSet::new();
    for r in definite_or_choice(encoding) {
        match &r.head {
            Head::Atom(a) => {
                all.insert(a.predicate.clone());
                edges
                    .entry(a.predicate.clone())
                    .or_default()
                    .extend(r.literals().map(|l| l.atom.predicate.clone()));
            }
            Head::Choice(c) => {
                for e in &c.elements {
                    heads.insert(e.atom.predicate.clone());
                    all.insert(e.atom.predicate.clone());
                }
            }
            Head::None => {}
        }
        for l in r.literals() {
            all.insert(l.atom.predicate.clone());
        }
    }
    let reach = |p: &str| {
        let mut seen = BTreeSet::new();
        let mut stack = vec![p.to_string()];
        while let Some(q) = stack.pop() {
            for s in edges.get(&q).into_iter().flatten() {
                if seen.insert(s.clone()) {
                    stack.push(s.clone());
                }
            }
        }
        seen
    };
    let on_cycle: BTreeSet<String> = all.iter().filter(|p| reach(p).contains(*p)).cloned().collect();
    all.iter()
        .filter(|p| {
            let r = reach(p);
            !heads.contains(*p)
                && !on_cycle.contains(*p)
                && r.iter().all(|q| !heads.contains(q) && !on_cycle.contains(q))
        })
        .cloned()
        .collect()
}

fn definite_or_choice(p: &Program) -> impl Iterator<Item = &Rule> {
    p.statements.iter().filter_map(|s| match s {
        Statement::Rule(r) => Some(r),
        _ => None,
    })
}

/// Unary encodings over `q0..q5` mixing choice, normal and negated rules.
pub fn arb_encoding() -> impl Strategy<Value = String> {
    let rule = (0..4u8, 0..6usize, 0..6usize, 0..6usize).prop_map(|(kind, h, a, b)| match kind {
        0 => format!("{{ q{h}(X) }} :- q{a}(X)."),
        1 => format!("q{h}(X) :- q{a}(X), q{b}(X)."),
        2 => format!("q{h}(X) :- q{a}(X), not q{b}(X)."),
        _ => format!("q{h}(X) :- q{a}(X)."),
    });
    prop::collection::vec(rule, 0..10).prop_map(|rs| rs.join("\n"))
}

// ---------------------------------------------------------------------------
// Rule space by exhaustion

type Lit = (String, Vec<usize>);

/// Bodies (as sorted literal lists, fresh variables renamed canonically)
/// of all rules the bias admits, found by trying every literal set over a
/// fixed variable pool. Literal arity is at most 2, so each literal adds at
/// most one fresh variable and `head arity + max_body` variables suffice.
pub fn brute_force_rule_space(
    head: &ModeDeclaration,
    modes: &[ModeDeclaration],
    defined_types: &BTreeSet<String>,
    max_body: usize,
) -> BTreeSet<Vec<Lit>> {
    let n = head.types.len();
    let pool = n + max_body;
    let mut candidates: Vec<(Lit, Vec<(usize, String)>)> = Vec::new();
    for (i, t) in head.types.iter().enumerate() {
        if defined_types.contains(t) {
            candidates.push(((t.clone(), vec![i]), vec![(i, t.clone())]));
        }
    }
    for m in modes.iter().filter(|m| m.kind == ModeKind::Body) {
        assert!(m.types.len() <= 2);
        let mut args = vec![0usize; m.types.len()];
        loop {
            let typed = args.iter().copied().zip(m.types.iter().cloned()).collect();
            candidates.push(((m.predicate.clone(), args.clone()), typed));
            let mut k = 0;
            while k < args.len() {
                args[k] += 1;
                if args[k] < pool {
                    break;
                }
                args[k] = 0;
                k += 1;
            }
            if k == args.len() {
                break;
            }
        }
    }

    let mut out = BTreeSet::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go(
        start: usize,
        cands: &[(Lit, Vec<(usize, String)>)],
        chosen: &mut Vec<usize>,
        max_body: usize,
        head: &ModeDeclaration,
        out: &mut BTreeSet<Vec<Lit>>,
    ) {
        if !chosen.is_empty() {
            if let Some(body) = admissible(chosen.iter().map(|&i| &cands[i]), head) {
                out.insert(body);
            }
        }
        if chosen.len() == max_body {
            return;
        }
        for i in start..cands.len() {
            chosen.push(i);
            go(i + 1, cands, chosen, max_body, head, out);
            chosen.pop();
        }
    }
    go(0, &candidates, &mut chosen, max_body, head, &mut out);
    out
}

fn admissible<'a>(
    lits: impl Iterator<Item = &'a (Lit, Vec<(usize, String)>)>,
    head: &ModeDeclaration,
) -> Option<Vec<Lit>> {
    let n = head.types.len();
    let lits: Vec<&(Lit, Vec<(usize, String)>)> = lits.collect();
    // One type per variable, head variables typed by the head.
    let mut ty: BTreeMap<usize, String> = head.types.iter().cloned().enumerate().collect();
    for (_, typed) in &lits {
        for (v, t) in typed {
            if ty.get(v).is_some_and(|u| u != t) {
                return None;
            }
            ty.insert(*v, t.clone());
        }
    }
    let body: Vec<Lit> = lits.iter().map(|(l, _)| l.clone()).collect();
    if (0..n).any(|v| !body.iter().any(|(_, a)| a.contains(&v))) {
        return None;
    }
    // Every literal must be connected to a head variable.
    let mut reached: BTreeSet<usize> = (0..n).collect();
    let mut linked = vec![false; body.len()];
    loop {
        let mut changed = false;
        for (i, (_, args)) in body.iter().enumerate() {
            if !linked[i] && args.iter().any(|v| reached.contains(v)) {
                linked[i] = true;
                reached.extend(args.iter().copied());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if linked.contains(&false) {
        return None;
    }
    Some(canonical_body(&body, n))
}

/// Sorted literal list, minimised over renamings of the non-head variables.
pub fn canonical_body(body: &[Lit], n: usize) -> Vec<Lit> {
    let fresh: Vec<usize> = body
        .iter()
        .flat_map(|(_, a)| a.iter().copied())
        .filter(|&v| v >= n)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut perm: Vec<usize> = (0..fresh.len()).collect();
    let mut best: Option<Vec<Lit>> = None;
    loop {
        let map = |v: usize| match fresh.iter().position(|&f| f == v) {
            Some(i) => n + perm[i],
            None => v,
        };
        let mut renamed: Vec<Lit> = body.iter().map(|(p, a)| (p.clone(), a.iter().map(|&v| map(v)).collect())).collect();
        renamed.sort();
        if best.as_ref().is_none_or(|b| &renamed < b) {
            best = Some(renamed);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Body of a learned rule in the oracle's representation; `Vn` is variable n.
pub fn rule_body(rule: &Rule) -> Vec<Lit> {
    let id = |t: &Term| match t {
        Term::Var(v) => v[1..].parse::<usize>().unwrap(),
        t => panic!("unexpected term {t}"),
    };
    rule.literals().map(|l| (l.atom.predicate.clone(), l.atom.args.iter().map(id).collect())).collect()
}
