//! Substitution enumeration for rules over a finite set of ground atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use super::ast::*;
use super::safety;

pub type Bindings = BTreeMap<String, Term>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("rule `{rule}` is unsafe: variable(s) {vars} not bound by a positive body literal")]
    Unsafe { rule: String, vars: String },
    #[error("rule `{0}` is not a normal rule or fact")]
    NotNormal(String),
}

/// Ground atoms indexed by predicate signature.
#[derive(Debug, Default, Clone)]
pub struct AtomIndex {
    by_pred: HashMap<PredicateSig, Vec<Atom>>,
    len: usize,
}

impl AtomIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_atoms<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> Self {
        let mut idx = Self::new();
        for a in atoms {
            idx.insert(a.clone());
        }
        idx
    }

    /// Caller guarantees `atom` is not yet present.
    pub fn insert(&mut self, atom: Atom) {
        self.len += 1;
        self.by_pred.entry(atom.sig()).or_default().push(atom);
    }

    pub fn get(&self, sig: &PredicateSig) -> &[Atom] {
        self.by_pred.get(sig).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

fn unify(pattern: &Atom, ground: &Atom, b: &mut Bindings, bound_here: &mut Vec<String>) -> bool {
    for (p, g) in pattern.args.iter().zip(&ground.args) {
        match p {
            Term::Var(v) if v == "_" => {}
            Term::Var(v) => match b.get(v) {
                Some(t) if t != g => return false,
                Some(_) => {}
                None => {
                    b.insert(v.clone(), g.clone());
                    bound_here.push(v.clone());
                }
            },
            c => {
                if c != g {
                    return false;
                }
            }
        }
    }
    true
}

pub fn subst_term(t: &Term, b: &Bindings) -> Term {
    match t {
        Term::Var(v) => b.get(v).cloned().unwrap_or_else(|| t.clone()),
        _ => t.clone(),
    }
}

pub fn subst_atom(a: &Atom, b: &Bindings) -> Atom {
    Atom {
        predicate: a.predicate.clone(),
        args: a.args.iter().map(|t| subst_term(t, b)).collect(),
    }
}

/// Evaluate an expression to a ground term. Arithmetic is integer-only;
/// `None` means unbound variables or an undefined operation.
pub fn eval_expr(e: &Expr, b: &Bindings) -> Option<Term> {
    match e {
        Expr::Term(Term::Var(v)) => b.get(v).cloned(),
        Expr::Term(t) => Some(t.clone()),
        Expr::Neg(inner) => match eval_expr(inner, b)? {
            Term::Int(i) => i.checked_neg().map(Term::Int),
            _ => None,
        },
        Expr::Bin(l, op, r) => {
            let (Term::Int(x), Term::Int(y)) = (eval_expr(l, b)?, eval_expr(r, b)?) else {
                return None;
            };
            let v = match op {
                ArithOp::Add => x.checked_add(y),
                ArithOp::Sub => x.checked_sub(y),
                ArithOp::Mul => x.checked_mul(y),
                ArithOp::Div => (y != 0).then(|| x.div_euclid(y)),
                ArithOp::Mod => (y != 0).then(|| x.rem_euclid(y)),
            }?;
            Some(Term::Int(v))
        }
    }
}

fn compare(op: CmpOp, l: &Term, r: &Term) -> bool {
    match op {
        CmpOp::Eq => l == r,
        CmpOp::Ne => l != r,
        CmpOp::Lt => l < r,
        CmpOp::Le => l <= r,
        CmpOp::Gt => l > r,
        CmpOp::Ge => l >= r,
    }
}

/// Evaluate the comparisons of a body under `b`, binding assignment
/// variables. Returns false if any comparison fails or cannot be evaluated.
pub fn eval_comparisons(cmps: &[&Comparison], b: &mut Bindings) -> bool {
    let mut pending: Vec<&Comparison> = cmps.to_vec();
    while !pending.is_empty() {
        let before = pending.len();
        let mut rest = Vec::new();
        for c in pending {
            match (eval_expr(&c.lhs, b), eval_expr(&c.rhs, b)) {
                (Some(l), Some(r)) => {
                    if !compare(c.op, &l, &r) {
                        return false;
                    }
                }
                (None, Some(r)) if c.op == CmpOp::Eq && c.lhs.as_var().is_some() => {
                    b.insert(c.lhs.as_var().unwrap().to_string(), r);
                }
                (Some(l), None) if c.op == CmpOp::Eq && c.rhs.as_var().is_some() => {
                    b.insert(c.rhs.as_var().unwrap().to_string(), l);
                }
                _ => rest.push(c),
            }
        }
        if rest.len() == before {
            return false;
        }
        pending = rest;
    }
    true
}

/// Enumerate bindings of `lits` (positive atoms) against `idx`, then filter
/// by `cmps`. When `delta` is given, the literal at that position draws
/// only from the delta index.
pub fn for_each_match<F: FnMut(&Bindings)>(
    lits: &[&Atom],
    cmps: &[&Comparison],
    idx: &AtomIndex,
    delta: Option<(usize, &AtomIndex)>,
    f: &mut F,
) {
    let mut order: Vec<usize> = (0..lits.len()).collect();
    if let Some((d, _)) = delta {
        order.retain(|&i| i != d);
        order.insert(0, d);
    }
    let mut b = Bindings::new();
    join(lits, &order, 0, cmps, idx, delta, &mut b, f);
}

#[allow(clippy::too_many_arguments)]
fn join<F: FnMut(&Bindings)>(
    lits: &[&Atom],
    order: &[usize],
    depth: usize,
    cmps: &[&Comparison],
    idx: &AtomIndex,
    delta: Option<(usize, &AtomIndex)>,
    b: &mut Bindings,
    f: &mut F,
) {
    if depth == order.len() {
        if cmps.is_empty() {
            f(b);
        } else {
            let mut local = b.clone();
            if eval_comparisons(cmps, &mut local) {
                f(&local);
            }
        }
        return;
    }
    let i = order[depth];
    let pattern = lits[i];
    let source = match delta {
        Some((d, didx)) if d == i => didx,
        _ => idx,
    };
    let mut bound_here = Vec::new();
    for cand in source.get(&pattern.sig()) {
        if unify(pattern, cand, b, &mut bound_here) {
            join(lits, order, depth + 1, cmps, idx, delta, b, f);
        }
        for v in bound_here.drain(..) {
            b.remove(&v);
        }
    }
}

/// Give every anonymous variable of a positive literal a unique name that
/// cannot clash with source variables, so that matches are recorded.
fn name_anonymous(rule: &Rule) -> Rule {
    let mut n = 0;
    let mut out = rule.clone();
    for item in &mut out.body {
        if let BodyItem::Literal(l) = item {
            if !l.positive {
                continue;
            }
            for t in &mut l.atom.args {
                if t.is_anonymous() {
                    *t = Term::Var(format!("_#{n}"));
                    n += 1;
                }
            }
        }
    }
    out
}

/// All instantiations of a normal rule (or fact) whose positive body atoms
/// are in `domain` and whose built-ins hold. Satisfied built-ins are dropped
/// from the ground bodies.
pub fn ground_instantiations(rule: &Rule, domain: &AtomSet) -> Result<Vec<Rule>, GroundError> {
    if rule.kind() == RuleKind::Choice {
        return Err(GroundError::NotNormal(rule.to_string()));
    }
    let missing = safety::unsafe_vars(&Statement::Rule(rule.clone()));
    if !missing.is_empty() {
        return Err(GroundError::Unsafe {
            rule: rule.to_string(),
            vars: missing.into_iter().collect::<Vec<_>>().join(", "),
        });
    }
    let rule = &name_anonymous(rule);
    let idx = AtomIndex::from_atoms(domain);
    let lits: Vec<&Atom> = rule.positive_atoms().collect();
    let cmps: Vec<&Comparison> = rule.comparisons().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for_each_match(&lits, &cmps, &idx, None, &mut |b| {
        let head = match &rule.head {
            Head::Atom(a) => Head::Atom(subst_atom(a, b)),
            _ => Head::None,
        };
        let body = rule
            .literals()
            .map(|l| {
                BodyItem::Literal(Literal {
                    atom: subst_atom(&l.atom, b),
                    positive: l.positive,
                })
            })
            .collect();
        let g = Rule { head, body };
        if seen.insert(g.to_string()) {
            out.push(g);
        }
    });
    Ok(out)
}
