//! Abstract syntax for the ASP-Core-2 subset handled by the toolchain.
//!
//! Statements cover facts, normal rules, integrity constraints, choice rules
//! (with optional bounds and element conditions), weak constraints and the
//! `#heuristic`, `#show` and `#const` directives. Comparison and arithmetic
//! built-ins may appear in bodies; function terms, aggregates, disjunction and
//! classical negation are rejected by the parser.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diag::Diagnostic;

/// A ground or non-ground term. Ordering puts integers before symbols, which
/// matches the solver's term order used by comparison built-ins.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Int(i64),
    Sym(String),
    Var(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// The anonymous variable `_`; every occurrence is distinct.
    pub fn is_anonymous(&self) -> bool {
        matches!(self, Term::Var(v) if v == "_")
    }

    pub fn is_ground(&self) -> bool {
        !self.is_var()
    }
}

/// Name and arity of a predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredicateSig {
    pub name: String,
    pub arity: usize,
}

impl PredicateSig {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        PredicateSig {
            name: name.into(),
            arity,
        }
    }
}

impl fmt::Display for PredicateSig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            args,
        }
    }

    pub fn sig(&self) -> PredicateSig {
        PredicateSig::new(self.predicate.clone(), self.args.len())
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    /// Named variables in order of first occurrence (anonymous ones skipped).
    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) if v != "_" => Some(v.as_str()),
            _ => None,
        })
    }
}

pub type AtomSet = BTreeSet<Atom>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub positive: bool,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal {
            atom,
            positive: true,
        }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal {
            atom,
            positive: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Mod => "\\",
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            ArithOp::Mul | ArithOp::Div | ArithOp::Mod => 2,
        }
    }
}

/// Arithmetic expression, only used inside built-ins and weak-constraint
/// annotations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Term(Term),
    Neg(Box<Expr>),
    Bin(Box<Expr>, ArithOp, Box<Expr>),
}

impl Expr {
    pub fn vars(&self, out: &mut Vec<String>) {
        match self {
            Expr::Term(Term::Var(v)) if v != "_" => out.push(v.clone()),
            Expr::Term(_) => {}
            Expr::Neg(e) => e.vars(out),
            Expr::Bin(l, _, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Expr::Term(Term::Var(v)) if v != "_" => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub lhs: Expr,
    pub op: CmpOp,
    pub rhs: Expr,
}

/// One conjunct of a rule body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BodyItem {
    Literal(Literal),
    Comparison(Comparison),
}

impl BodyItem {
    pub fn pos(atom: Atom) -> Self {
        BodyItem::Literal(Literal::pos(atom))
    }

    pub fn literal(&self) -> Option<&Literal> {
        match self {
            BodyItem::Literal(l) => Some(l),
            BodyItem::Comparison(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceElement {
    pub atom: Atom,
    pub condition: Vec<BodyItem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceHead {
    pub lower: Option<Term>,
    pub upper: Option<Term>,
    pub elements: Vec<ChoiceElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Head {
    /// Integrity constraint.
    None,
    Atom(Atom),
    Choice(ChoiceHead),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Fact,
    Normal,
    Constraint,
    Choice,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<BodyItem>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule {
            head: Head::Atom(atom),
            body: Vec::new(),
        }
    }

    pub fn normal(head: Atom, body: Vec<BodyItem>) -> Self {
        Rule {
            head: Head::Atom(head),
            body,
        }
    }

    pub fn kind(&self) -> RuleKind {
        match &self.head {
            Head::None => RuleKind::Constraint,
            Head::Choice(_) => RuleKind::Choice,
            Head::Atom(a) if self.body.is_empty() && a.is_ground() => RuleKind::Fact,
            Head::Atom(_) => RuleKind::Normal,
        }
    }

    pub fn head_atom(&self) -> Option<&Atom> {
        match &self.head {
            Head::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.body.iter().filter_map(BodyItem::literal)
    }

    pub fn positive_atoms(&self) -> impl Iterator<Item = &Atom> {
        self.literals().filter(|l| l.positive).map(|l| &l.atom)
    }

    pub fn comparisons(&self) -> impl Iterator<Item = &Comparison> {
        self.body.iter().filter_map(|b| match b {
            BodyItem::Comparison(c) => Some(c),
            _ => None,
        })
    }

    /// Definite: an atom head and a body of positive literals and built-ins.
    pub fn is_definite(&self) -> bool {
        matches!(self.head, Head::Atom(_)) && self.literals().all(|l| l.positive)
    }
}

/// Weak constraint `:~ body. [w@p, t1, ..., tn]`. The annotation is kept for
/// printing only; its semantics belong to the external solver.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakConstraint {
    pub body: Vec<BodyItem>,
    pub weight: Expr,
    pub priority: Option<Expr>,
    pub terms: Vec<Expr>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modifier {
    Sign,
    Level,
    True,
    False,
    Init,
    Factor,
}

impl Modifier {
    pub const ALL: [Modifier; 6] = [
        Modifier::Sign,
        Modifier::Level,
        Modifier::True,
        Modifier::False,
        Modifier::Init,
        Modifier::Factor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Modifier::Sign => "sign",
            Modifier::Level => "level",
            Modifier::True => "true",
            Modifier::False => "false",
            Modifier::Init => "init",
            Modifier::Factor => "factor",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Modifier::ALL.into_iter().find(|m| m.as_str() == name)
    }
}

impl fmt::Display for Modifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `#heuristic H : B. [w@p,m]`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HeuristicDirective {
    pub head: Atom,
    pub body: Vec<BodyItem>,
    pub weight: Term,
    pub priority: Option<Term>,
    pub modifier: Modifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Statement {
    Rule(Rule),
    Weak(WeakConstraint),
    Heuristic(HeuristicDirective),
    /// `#show.` (None) or `#show p/n.`
    Show(Option<PredicateSig>),
    Const { name: String, value: Term },
}

impl Statement {
    pub fn as_rule(&self) -> Option<&Rule> {
        match self {
            Statement::Rule(r) => Some(r),
            _ => None,
        }
    }
}

/// Byte range plus 1-based line/column of the start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

/// A parsed program. Equality compares statements only; spans and
/// diagnostics are metadata.
#[derive(Debug, Clone, Default)]
pub struct Program {
    pub statements: Vec<Statement>,
    pub spans: Vec<Option<Span>>,
    pub diagnostics: Vec<Diagnostic>,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.statements == other.statements
    }
}

impl Eq for Program {}

impl Program {
    pub fn new(statements: Vec<Statement>) -> Self {
        let spans = vec![None; statements.len()];
        Program {
            statements,
            spans,
            diagnostics: Vec::new(),
        }
    }

    pub fn from_rules(rules: impl IntoIterator<Item = Rule>) -> Self {
        Program::new(rules.into_iter().map(Statement::Rule).collect())
    }

    pub fn push(&mut self, statement: Statement) {
        self.statements.push(statement);
        self.spans.push(None);
    }

    pub fn extend(&mut self, other: &Program) {
        for s in &other.statements {
            self.push(s.clone());
        }
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.statements.iter().filter_map(Statement::as_rule)
    }

    pub fn span_of(&self, index: usize) -> Option<Span> {
        self.spans.get(index).copied().flatten()
    }

    /// Ground atoms of all facts in the program.
    pub fn facts(&self) -> AtomSet {
        self.rules()
            .filter(|r| r.kind() == RuleKind::Fact)
            .filter_map(|r| r.head_atom().cloned())
            .collect()
    }

    /// Predicates occurring anywhere in the program (heads, bodies,
    /// conditions, weak constraints, heuristic directives).
    pub fn predicates(&self) -> BTreeSet<PredicateSig> {
        let mut out = BTreeSet::new();
        let body = |items: &[BodyItem], out: &mut BTreeSet<PredicateSig>| {
            for l in items.iter().filter_map(BodyItem::literal) {
                out.insert(l.atom.sig());
            }
        };
        for s in &self.statements {
            match s {
                Statement::Rule(r) => {
                    match &r.head {
                        Head::None => {}
                        Head::Atom(a) => {
                            out.insert(a.sig());
                        }
                        Head::Choice(c) => {
                            for e in &c.elements {
                                out.insert(e.atom.sig());
                                body(&e.condition, &mut out);
                            }
                        }
                    }
                    body(&r.body, &mut out);
                }
                Statement::Weak(w) => body(&w.body, &mut out),
                Statement::Heuristic(h) => {
                    out.insert(h.head.sig());
                    body(&h.body, &mut out);
                }
                Statement::Show(_) | Statement::Const { .. } => {}
            }
        }
        out
    }

    /// Rules grouped by the predicate of their atom head.
    pub fn definitions(&self) -> BTreeMap<PredicateSig, Vec<&Rule>> {
        let mut out: BTreeMap<PredicateSig, Vec<&Rule>> = BTreeMap::new();
        for r in self.rules() {
            if let Some(a) = r.head_atom() {
                out.entry(a.sig()).or_default().push(r);
            }
        }
        out
    }
}
