use std::fmt;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::safety;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: String, found: String },
    Unsupported { construct: String },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
}

impl ParseError {
    pub(crate) fn new(kind: ParseErrorKind, span: Span) -> Self {
        ParseError { kind, span }
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(self.kind, ParseErrorKind::Unsupported { .. })
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.span.line, self.span.col)?;
        match &self.kind {
            ParseErrorKind::Syntax { expected, found } => {
                write!(f, "syntax error: expected {expected}, found {found}")
            }
            ParseErrorKind::Unsupported { construct } => {
                write!(f, "unsupported construct: {construct}")
            }
        }
    }
}

type PResult<T> = Result<T, ParseError>;

/// Parse a complete program. Safety violations do not fail the parse; they
/// are attached to the program as diagnostics.
pub fn parse_program(text: &str) -> PResult<Program> {
    let mut p = Parser::new(text)?;
    let mut program = Program::default();
    while !p.at(&Tok::Eof) {
        let (stmt, span) = p.statement()?;
        for d in safety::check_statement(&stmt) {
            program.diagnostics.push(d.at(span));
        }
        program.statements.push(stmt);
        program.spans.push(Some(span));
    }
    Ok(program)
}

/// Parse a single atom, e.g. one entry of an answer set.
pub fn parse_atom(text: &str) -> PResult<Atom> {
    let mut p = Parser::new(text)?;
    let atom = p.atom()?;
    p.expect(&Tok::Eof, "end of input")?;
    Ok(atom)
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn peek_at(&self, n: usize) -> &Tok {
        let i = (self.pos + n).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    pub(crate) fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.toks[self.pos.saturating_sub(1)].span
    }

    pub(crate) fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub(crate) fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, t: &Tok, what: &str) -> PResult<Span> {
        if self.at(t) {
            Ok(self.bump().span)
        } else {
            Err(self.expected(what))
        }
    }

    pub(crate) fn expected(&self, what: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Syntax {
                expected: what.to_string(),
                found: self.peek().describe(),
            },
            self.span(),
        )
    }

    pub(crate) fn unsupported(&self, construct: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Unsupported {
                construct: construct.to_string(),
            },
            self.span(),
        )
    }

    pub(crate) fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.expected("identifier")),
        }
    }

    fn joined(&self, start: Span) -> Span {
        let end = self.prev_span();
        Span {
            start: start.start,
            end: end.end,
            line: start.line,
            col: start.col,
        }
    }

    pub(crate) fn statement(&mut self) -> PResult<(Statement, Span)> {
        let start = self.span();
        let stmt = match self.peek().clone() {
            Tok::If => {
                self.bump();
                let body = self.body()?;
                self.expect(&Tok::Dot, "',' or '.'")?;
                Statement::Rule(Rule {
                    head: Head::None,
                    body,
                })
            }
            Tok::WeakIf => {
                self.bump();
                self.weak()?
            }
            Tok::Directive(d) => self.directive(&d)?,
            Tok::LBrace => self.choice(None)?,
            Tok::Int(_) | Tok::Var(_) if self.peek_at(1) == &Tok::LBrace => {
                let lower = self.simple_term()?;
                self.choice(Some(lower))?
            }
            Tok::Ident(s) if s != "not" && self.peek_at(1) == &Tok::LBrace => {
                let lower = self.simple_term()?;
                self.choice(Some(lower))?
            }
            Tok::Minus if matches!(self.peek_at(1), Tok::Ident(_)) => {
                return Err(self.unsupported("classical negation"));
            }
            Tok::Ident(s) if s == "not" => {
                return Err(self.unsupported("default negation in rule head"));
            }
            Tok::Ident(_) => {
                let head = self.atom()?;
                match self.peek() {
                    Tok::Pipe | Tok::Semi => return Err(self.unsupported("disjunctive head")),
                    Tok::Colon => return Err(self.unsupported("conditional literal in rule head")),
                    _ => {}
                }
                let body = if self.eat(&Tok::If) {
                    if self.at(&Tok::Dot) {
                        Vec::new()
                    } else {
                        self.body()?
                    }
                } else {
                    Vec::new()
                };
                self.expect(&Tok::Dot, "'.'")?;
                Statement::Rule(Rule {
                    head: Head::Atom(head),
                    body,
                })
            }
            _ => return Err(self.expected("statement")),
        };
        Ok((stmt, self.joined(start)))
    }

    fn weak(&mut self) -> PResult<Statement> {
        let body = if self.at(&Tok::Dot) {
            Vec::new()
        } else {
            self.body()?
        };
        self.expect(&Tok::Dot, "',' or '.'")?;
        self.expect(&Tok::LBracket, "'['")?;
        let weight = self.expr()?;
        let priority = if self.eat(&Tok::At) {
            Some(self.expr()?)
        } else {
            None
        };
        let mut terms = Vec::new();
        while self.eat(&Tok::Comma) {
            terms.push(self.expr()?);
        }
        self.expect(&Tok::RBracket, "',' or ']'")?;
        Ok(Statement::Weak(WeakConstraint {
            body,
            weight,
            priority,
            terms,
        }))
    }

    fn directive(&mut self, name: &str) -> PResult<Statement> {
        match name {
            "heuristic" => {
                self.bump();
                let head = self.atom()?;
                let body = if self.eat(&Tok::Colon) {
                    self.body()?
                } else {
                    Vec::new()
                };
                self.expect(&Tok::Dot, "'.'")?;
                self.expect(&Tok::LBracket, "'['")?;
                let weight = self.simple_term()?;
                let priority = if self.eat(&Tok::At) {
                    Some(self.simple_term()?)
                } else {
                    None
                };
                self.expect(&Tok::Comma, "','")?;
                let modifier = match self.peek() {
                    Tok::Ident(m) => Modifier::from_name(m),
                    _ => None,
                }
                .ok_or_else(|| self.expected("modifier (sign, level, true, false, init, factor)"))?;
                self.bump();
                self.expect(&Tok::RBracket, "']'")?;
                Ok(Statement::Heuristic(HeuristicDirective {
                    head,
                    body,
                    weight,
                    priority,
                    modifier,
                }))
            }
            "show" => {
                self.bump();
                if self.eat(&Tok::Dot) {
                    return Ok(Statement::Show(None));
                }
                if !matches!(self.peek(), Tok::Ident(_)) || self.peek_at(1) != &Tok::Slash {
                    return Err(self.unsupported("#show with terms"));
                }
                let name = self.ident()?;
                self.expect(&Tok::Slash, "'/'")?;
                let arity = match self.peek() {
                    Tok::Int(n) if *n >= 0 => *n as usize,
                    _ => return Err(self.expected("arity")),
                };
                self.bump();
                self.expect(&Tok::Dot, "'.'")?;
                Ok(Statement::Show(Some(PredicateSig::new(name, arity))))
            }
            "const" => {
                self.bump();
                let name = self.ident()?;
                self.expect(&Tok::Eq, "'='")?;
                let value = self.simple_term()?;
                if value.is_var() {
                    return Err(self.expected("constant value"));
                }
                self.expect(&Tok::Dot, "'.'")?;
                Ok(Statement::Const { name, value })
            }
            "count" | "sum" | "sum+" | "min" | "max" => {
                Err(self.unsupported("aggregate"))
            }
            "minimize" | "maximize" | "minimise" | "maximise" => {
                Err(self.unsupported("optimization statement"))
            }
            other => Err(self.unsupported(&format!("#{other} directive"))),
        }
    }

    fn choice(&mut self, lower: Option<Term>) -> PResult<Statement> {
        self.expect(&Tok::LBrace, "'{'")?;
        if self.at(&Tok::RBrace) {
            return Err(self.expected("choice element"));
        }
        let mut elements = Vec::new();
        loop {
            let atom = self.atom()?;
            let condition = if self.eat(&Tok::Colon) {
                self.body()?
            } else {
                Vec::new()
            };
            elements.push(ChoiceElement { atom, condition });
            if !self.eat(&Tok::Semi) {
                break;
            }
        }
        self.expect(&Tok::RBrace, "';' or '}'")?;
        let upper = match self.peek() {
            Tok::Int(_) | Tok::Var(_) | Tok::Ident(_) => Some(self.simple_term()?),
            _ => None,
        };
        let body = if self.eat(&Tok::If) {
            self.body()?
        } else {
            Vec::new()
        };
        self.expect(&Tok::Dot, "'.'")?;
        Ok(Statement::Rule(Rule {
            head: Head::Choice(ChoiceHead {
                lower,
                upper,
                elements,
            }),
            body,
        }))
    }

    /// Comma-separated body items.
    pub(crate) fn body(&mut self) -> PResult<Vec<BodyItem>> {
        let mut items = vec![self.body_item()?];
        while self.eat(&Tok::Comma) {
            items.push(self.body_item()?);
        }
        Ok(items)
    }

    fn body_item(&mut self) -> PResult<BodyItem> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "not" => {
                self.bump();
                match self.peek() {
                    Tok::Ident(s) if s == "not" => return Err(self.unsupported("nested negation")),
                    Tok::Minus => return Err(self.unsupported("classical negation")),
                    Tok::Directive(_) | Tok::LBrace => return Err(self.unsupported("aggregate")),
                    _ => {}
                }
                Ok(BodyItem::Literal(Literal::neg(self.atom()?)))
            }
            Tok::Directive(_) | Tok::LBrace => Err(self.unsupported("aggregate")),
            Tok::Minus if matches!(self.peek_at(1), Tok::Ident(_)) => {
                Err(self.unsupported("classical negation"))
            }
            Tok::Int(_) | Tok::Var(_) if self.peek_at(1) == &Tok::LBrace => {
                Err(self.unsupported("aggregate"))
            }
            Tok::Ident(_) if self.peek_at(1) == &Tok::LBrace => Err(self.unsupported("aggregate")),
            Tok::Ident(_) if !is_cmp(self.peek_at(1)) => Ok(BodyItem::pos(self.atom()?)),
            _ => {
                let lhs = self.expr()?;
                let op = match self.peek() {
                    Tok::Eq => CmpOp::Eq,
                    Tok::Ne => CmpOp::Ne,
                    Tok::Lt => CmpOp::Lt,
                    Tok::Le => CmpOp::Le,
                    Tok::Gt => CmpOp::Gt,
                    Tok::Ge => CmpOp::Ge,
                    _ => return Err(self.expected("comparison operator")),
                };
                self.bump();
                let rhs = self.expr()?;
                Ok(BodyItem::Comparison(Comparison { lhs, op, rhs }))
            }
        }
    }

    pub(crate) fn atom(&mut self) -> PResult<Atom> {
        if self.at(&Tok::Minus) {
            return Err(self.unsupported("classical negation"));
        }
        let predicate = self.ident()?;
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.arg_term()?);
                match self.peek() {
                    Tok::Plus | Tok::Minus | Tok::Star | Tok::Slash | Tok::Backslash => {
                        return Err(self.unsupported("arithmetic in atom argument"))
                    }
                    Tok::DotDot => return Err(self.unsupported("interval term")),
                    Tok::Semi => return Err(self.unsupported("pooling")),
                    _ => {}
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen, "',' or ')'")?;
        }
        Ok(Atom { predicate, args })
    }

    fn arg_term(&mut self) -> PResult<Term> {
        match self.peek() {
            Tok::Ident(_) if self.peek_at(1) == &Tok::LParen => {
                Err(self.unsupported("function term"))
            }
            Tok::LParen => Err(self.unsupported("tuple term")),
            Tok::Str => Err(self.unsupported("string constant")),
            Tok::Minus if !matches!(self.peek_at(1), Tok::Int(_)) => {
                Err(self.unsupported("arithmetic in atom argument"))
            }
            _ => self.simple_term(),
        }
    }

    /// Variable, symbolic constant or (possibly negative) integer.
    pub(crate) fn simple_term(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(v))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Term::Sym(s))
            }
            Tok::Int(i) => {
                self.bump();
                Ok(Term::Int(i))
            }
            Tok::Minus => {
                if let Tok::Int(i) = self.peek_at(1).clone() {
                    self.bump();
                    self.bump();
                    Ok(Term::Int(-i))
                } else {
                    Err(self.expected("term"))
                }
            }
            _ => Err(self.expected("term")),
        }
    }

    pub(crate) fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.mul_expr()?;
            lhs = Expr::Bin(Box::new(lhs), op, Box::new(rhs));
        }
    }

    fn mul_expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ArithOp::Mul,
                Tok::Slash => ArithOp::Div,
                Tok::Backslash => ArithOp::Mod,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary_expr()?;
            lhs = Expr::Bin(Box::new(lhs), op, Box::new(rhs));
        }
    }

    fn unary_expr(&mut self) -> PResult<Expr> {
        if self.at(&Tok::Minus) {
            if let Tok::Int(i) = self.peek_at(1).clone() {
                self.bump();
                self.bump();
                return Ok(Expr::Term(Term::Int(-i)));
            }
            if matches!(self.peek_at(1), Tok::Ident(_)) {
                return Err(self.unsupported("classical negation"));
            }
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary_expr()?)));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.at(&Tok::Comma) {
                    return Err(self.unsupported("tuple term"));
                }
                self.expect(&Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(_) if self.peek_at(1) == &Tok::LParen => {
                Err(self.unsupported("function term"))
            }
            Tok::Str => Err(self.unsupported("string constant")),
            _ => Ok(Expr::Term(self.simple_term()?)),
        }
    }
}

fn is_cmp(t: &Tok) -> bool {
    matches!(t, Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule(src: &str) -> Rule {
        let p = parse_program(src).unwrap();
        assert_eq!(p.statements.len(), 1);
        p.statements[0].as_rule().unwrap().clone()
    }

    #[test]
    fn choice_rule_from_hrp() {
        let r = one_rule("{ cabinetTOthing(C,T) } :- cabinetDomain(C), thing(T).");
        assert_eq!(r.kind(), RuleKind::Choice);
        let Head::Choice(c) = &r.head else { panic!() };
        assert_eq!(c.elements.len(), 1);
        assert_eq!(c.elements[0].atom.predicate, "cabinetTOthing");
        assert!(c.lower.is_none() && c.upper.is_none());
        let body: Vec<_> = r.positive_atoms().map(|a| a.predicate.as_str()).collect();
        assert_eq!(body, ["cabinetDomain", "thing"]);
    }

    #[test]
    fn fact() {
        let r = one_rule("cabinetDomainNew(1).");
        assert_eq!(r.kind(), RuleKind::Fact);
        assert_eq!(r.head_atom().unwrap().args, vec![Term::Int(1)]);
    }

    #[test]
    fn unbalanced_parenthesis_fails_at_end_of_input() {
        let err = parse_program("p(X) :- q(X").unwrap_err();
        match &err.kind {
            ParseErrorKind::Syntax { found, .. } => assert_eq!(found, "end of input"),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(err.span.start, "p(X) :- q(X".len());
    }

    #[test]
    fn bounded_choice_with_conditions() {
        let r = one_rule("1 { cabinetHigh(C); cabinetSmall(C) : ok(C), not bad(C) } 1 :- cabinet(C).");
        let Head::Choice(c) = &r.head else { panic!() };
        assert_eq!(c.lower, Some(Term::Int(1)));
        assert_eq!(c.upper, Some(Term::Int(1)));
        assert_eq!(c.elements[1].condition.len(), 2);
    }

    #[test]
    fn weak_constraint_and_builtins() {
        let p = parse_program(":~ a(C), cost(W), C != 3. [W@1,a,C]").unwrap();
        let Statement::Weak(w) = &p.statements[0] else { panic!() };
        assert_eq!(w.body.len(), 3);
        assert_eq!(w.terms.len(), 2);
        assert!(p.diagnostics.is_empty());
    }

    #[test]
    fn unsupported_constructs_name_their_span() {
        for (src, what) in [
            ("p(f(X)) :- q(X).", "function term"),
            ("a | b.", "disjunctive head"),
            ("-a :- b.", "classical negation"),
            ("a :- #count { X : p(X) } > 2.", "aggregate"),
            ("a :- not not b.", "nested negation"),
            ("a :- 2 { p(X) : q(X) }.", "aggregate"),
            ("p(X+1) :- q(X).", "arithmetic in atom argument"),
            ("#minimize { 1 : a }.", "optimization statement"),
        ] {
            let err = parse_program(src).unwrap_err();
            assert!(err.is_unsupported(), "{src}: {err}");
            assert!(err.to_string().contains(what), "{src}: {err}");
            assert_eq!(err.span.line, 1);
        }
    }

    #[test]
    fn heuristic_directive() {
        let p = parse_program("#heuristic a(X) : b(X). [2@3,factor]").unwrap();
        let Statement::Heuristic(h) = &p.statements[0] else { panic!() };
        assert_eq!(h.weight, Term::Int(2));
        assert_eq!(h.priority, Some(Term::Int(3)));
        assert_eq!(h.modifier, Modifier::Factor);
        assert!(parse_program("#heuristic a. [1,often]").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let p = parse_program("% line\na. %* block\n spanning *% b.\n").unwrap();
        assert_eq!(p.statements.len(), 2);
        assert_eq!(p.span_of(1).unwrap().line, 3);
    }

    #[test]
    fn unsafe_rule_gets_diagnostic() {
        let p = parse_program("p(X, Y) :- q(X).\nok(X) :- q(X), not r(X).").unwrap();
        assert_eq!(p.diagnostics.len(), 1);
        assert!(p.diagnostics[0].message.contains('Y'));
        assert_eq!(p.diagnostics[0].span.unwrap().line, 1);
    }

    #[test]
    fn parse_single_atom() {
        assert_eq!(
            parse_atom("cabinetTOthing(1,2)").unwrap(),
            Atom::new("cabinetTOthing", vec![Term::Int(1), Term::Int(2)])
        );
        assert!(parse_atom("p(X) q").is_err());
    }
}
