//! Canonical rendering: one statement per line, no spaces inside atom
//! arguments, `", "` between body items, `" :- "` as separator.

use std::fmt::{self, Display, Formatter, Write as _};

use super::ast::*;

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(i) => write!(f, "{i}"),
            Term::Sym(s) | Term::Var(s) => f.write_str(s),
        }
    }
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_char('(')?;
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_char(',')?;
                }
                write!(f, "{t}")?;
            }
            f.write_char(')')?;
        }
        Ok(())
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(_, op, _) => op.precedence(),
        _ => u8::MAX,
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => write!(f, "{t}"),
            Expr::Neg(e) => {
                if matches!(**e, Expr::Bin(..)) {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Bin(l, op, r) => {
                let p = op.precedence();
                if precedence(l) < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                f.write_str(op.symbol())?;
                if precedence(r) <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

impl Display for Comparison {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}

impl Display for BodyItem {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            BodyItem::Literal(l) => write!(f, "{l}"),
            BodyItem::Comparison(c) => write!(f, "{c}"),
        }
    }
}

pub(crate) struct Joined<'a, T>(pub &'a [T], pub &'a str);

impl<T: Display> Display for Joined<'_, T> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(self.1)?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl Display for ChoiceElement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.atom)?;
        if !self.condition.is_empty() {
            write!(f, " : {}", Joined(&self.condition, ", "))?;
        }
        Ok(())
    }
}

impl Display for ChoiceHead {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Some(l) = &self.lower {
            write!(f, "{l} ")?;
        }
        write!(f, "{{ {} }}", Joined(&self.elements, "; "))?;
        if let Some(u) = &self.upper {
            write!(f, " {u}")?;
        }
        Ok(())
    }
}

impl Display for Rule {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::None => write!(f, ":- {}.", Joined(&self.body, ", ")),
            Head::Atom(a) if self.body.is_empty() => write!(f, "{a}."),
            Head::Atom(a) => write!(f, "{a} :- {}.", Joined(&self.body, ", ")),
            Head::Choice(c) if self.body.is_empty() => write!(f, "{c}."),
            Head::Choice(c) => write!(f, "{c} :- {}.", Joined(&self.body, ", ")),
        }
    }
}

impl Display for WeakConstraint {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            f.write_str(":~ .")?;
        } else {
            write!(f, ":~ {}.", Joined(&self.body, ", "))?;
        }
        write!(f, " [{}", self.weight)?;
        if let Some(p) = &self.priority {
            write!(f, "@{p}")?;
        }
        for t in &self.terms {
            write!(f, ",{t}")?;
        }
        f.write_char(']')
    }
}

impl Display for HeuristicDirective {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write!(f, "#heuristic {}", self.head)?;
        if !self.body.is_empty() {
            write!(f, " : {}", Joined(&self.body, ", "))?;
        }
        write!(f, ". [{}", self.weight)?;
        if let Some(p) = &self.priority {
            write!(f, "@{p}")?;
        }
        write!(f, ",{}]", self.modifier)
    }
}

impl Display for Statement {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Rule(r) => write!(f, "{r}"),
            Statement::Weak(w) => write!(f, "{w}"),
            Statement::Heuristic(h) => write!(f, "{h}"),
            Statement::Show(None) => f.write_str("#show."),
            Statement::Show(Some(sig)) => write!(f, "#show {sig}."),
            Statement::Const { name, value } => write!(f, "#const {name} = {value}."),
        }
    }
}

/// One statement per line, each terminated by a newline.
pub fn print_program(program: &Program) -> String {
    let mut out = String::new();
    for s in &program.statements {
        let _ = writeln!(out, "{s}");
    }
    out
}

impl Display for Program {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&print_program(self))
    }
}
