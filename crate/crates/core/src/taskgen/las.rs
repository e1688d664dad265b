//! Reading and writing tasks in the `.las` dialect shared by ILASP and
//! FastLAS (positive examples only, no penalties, `var(...)` placeholders).

use std::fmt::Write as _;

use crate::asp_core::lexer::Tok;
use crate::asp_core::parser::Parser;
use crate::asp_core::{Atom, AtomSet, ParseError, Program};

use super::{sort_modes, Example, LearningTask, ModeDeclaration, ModeKind, TaskError};

fn atom_block(atoms: &AtomSet) -> String {
    if atoms.is_empty() {
        return "{}".to_string();
    }
    let items: Vec<String> = atoms.iter().map(Atom::to_string).collect();
    format!("{{\n  {}\n}}", items.join(", "))
}

fn context_block(ctx: &Program) -> String {
    if ctx.statements.is_empty() {
        return "{}".to_string();
    }
    let items: Vec<String> = ctx.statements.iter().map(|s| s.to_string()).collect();
    format!("{{\n  {}\n}}", items.join(" "))
}

pub fn serialize_example(e: &Example) -> String {
    format!(
        "#pos({}, {}, {}, {}).",
        e.id,
        atom_block(&e.inclusions),
        atom_block(&e.exclusions),
        context_block(&e.context)
    )
}

/// Background, then `#modeh` block, `#modeb` block and examples, separated
/// by blank lines.
pub fn serialize_task(task: &LearningTask) -> String {
    let mut sections = Vec::new();
    if !task.background.statements.is_empty() {
        sections.push(crate::asp_core::print_program(&task.background).trim_end().to_string());
    }
    let mut modes = task.modes.clone();
    sort_modes(&mut modes);
    for kind in [ModeKind::Head, ModeKind::Body] {
        let block: Vec<String> = modes.iter().filter(|m| m.kind == kind).map(|m| m.to_string()).collect();
        if !block.is_empty() {
            sections.push(block.join("\n"));
        }
    }
    if !task.examples.is_empty() {
        let mut block = String::new();
        for (i, e) in task.examples.iter().enumerate() {
            if i > 0 {
                block.push('\n');
            }
            let _ = write!(block, "{}", serialize_example(e));
        }
        sections.push(block);
    }
    let mut out = sections.join("\n\n");
    out.push('\n');
    out
}

fn syntax(e: ParseError) -> TaskError {
    TaskError::Syntax(e.to_string())
}

fn mode(p: &mut Parser, kind: ModeKind) -> Result<ModeDeclaration, ParseError> {
    p.expect(&Tok::LParen, "'('")?;
    if matches!(p.peek(), Tok::Int(_)) {
        p.bump();
        p.expect(&Tok::Comma, "','")?;
    }
    let predicate = p.ident()?;
    let mut types = Vec::new();
    if p.eat(&Tok::LParen) {
        loop {
            match p.peek() {
                Tok::Ident(s) if s == "var" => {
                    p.bump();
                }
                Tok::Ident(s) if s == "const" => return Err(p.unsupported("const(...) placeholder")),
                _ => return Err(p.expected("'var(...)' placeholder")),
            }
            p.expect(&Tok::LParen, "'('")?;
            types.push(p.ident()?);
            p.expect(&Tok::RParen, "')'")?;
            if !p.eat(&Tok::Comma) {
                break;
            }
        }
        p.expect(&Tok::RParen, "',' or ')'")?;
    }
    p.expect(&Tok::RParen, "')'")?;
    p.expect(&Tok::Dot, "'.'")?;
    Ok(ModeDeclaration {
        kind,
        predicate,
        types,
    })
}

fn ground_atoms(p: &mut Parser) -> Result<AtomSet, ParseError> {
    p.expect(&Tok::LBrace, "'{'")?;
    let mut out = AtomSet::new();
    if p.eat(&Tok::RBrace) {
        return Ok(out);
    }
    loop {
        let at = p.span();
        let a = p.atom()?;
        if !a.is_ground() {
            return Err(ParseError::new(
                crate::asp_core::ParseErrorKind::Syntax {
                    expected: "ground atom".into(),
                    found: format!("'{a}'"),
                },
                at,
            ));
        }
        out.insert(a);
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.expect(&Tok::RBrace, "',' or '}'")?;
    Ok(out)
}

fn example(p: &mut Parser, index: usize) -> Result<Example, ParseError> {
    p.expect(&Tok::LParen, "'('")?;
    let id = match (p.peek().clone(), p.peek_at(1).clone()) {
        (Tok::Ident(id), Tok::Comma) => {
            p.bump();
            p.bump();
            id
        }
        (Tok::Ident(_), Tok::At) => return Err(p.unsupported("example penalty")),
        _ => format!("ex{index}"),
    };
    let inclusions = ground_atoms(p)?;
    p.expect(&Tok::Comma, "','")?;
    let exclusions = ground_atoms(p)?;
    let mut context = Program::default();
    if p.eat(&Tok::Comma) {
        p.expect(&Tok::LBrace, "'{'")?;
        while !p.at(&Tok::RBrace) {
            if p.at(&Tok::Eof) {
                return Err(p.expected("'}'"));
            }
            let (stmt, span) = p.statement()?;
            context.statements.push(stmt);
            context.spans.push(Some(span));
        }
        p.bump();
    }
    p.expect(&Tok::RParen, "')'")?;
    p.expect(&Tok::Dot, "'.'")?;
    Ok(Example {
        id,
        inclusions,
        exclusions,
        context,
    })
}

pub fn parse_task(text: &str) -> Result<LearningTask, TaskError> {
    let mut p = Parser::new(text).map_err(syntax)?;
    let mut task = LearningTask::default();
    while !p.at(&Tok::Eof) {
        match p.peek().clone() {
            Tok::Directive(d) if d == "modeh" || d == "modeb" => {
                p.bump();
                let kind = if d == "modeh" { ModeKind::Head } else { ModeKind::Body };
                task.modes.push(mode(&mut p, kind).map_err(syntax)?);
            }
            Tok::Directive(d) if d == "pos" => {
                p.bump();
                let n = task.examples.len() + 1;
                task.examples.push(example(&mut p, n).map_err(syntax)?);
            }
            Tok::Directive(d) if d == "neg" => {
                return Err(syntax(p.unsupported("negative example")));
            }
            _ => {
                let (stmt, span) = p.statement().map_err(syntax)?;
                task.background.statements.push(stmt);
                task.background.spans.push(Some(span));
            }
        }
    }
    Ok(task)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp_core::{parse_atom, parse_program};

    fn toy() -> LearningTask {
        LearningTask {
            background: parse_program("cabinetDomain(C) :- cabinetDomainNew(C).").unwrap(),
            modes: vec![
                ModeDeclaration::body("thing", vec!["thing".into()]),
                ModeDeclaration::head("cabinetTOthing", vec!["cabinetDomain".into(), "thing".into()]),
                ModeDeclaration::body("cabinetDomain", vec!["cabinetDomain".into()]),
            ],
            examples: vec![Example {
                id: "ex1".into(),
                inclusions: [parse_atom("cabinetTOthing(1,2)").unwrap()].into(),
                exclusions: AtomSet::new(),
                context: parse_program("cabinetDomainNew(1). thing(2).").unwrap(),
            }],
        }
    }

    const TOY: &str = "cabinetDomain(C) :- cabinetDomainNew(C).

#modeh(cabinetTOthing(var(cabinetDomain), var(thing))).

#modeb(cabinetDomain(var(cabinetDomain))).
#modeb(thing(var(thing))).

#pos(ex1, {
  cabinetTOthing(1,2)
}, {}, {
  cabinetDomainNew(1). thing(2).
}).
";

    #[test]
    fn serializes_in_section_order() {
        assert_eq!(serialize_task(&toy()), TOY);
    }

    #[test]
    fn round_trip() {
        let parsed = parse_task(TOY).unwrap();
        let mut want = toy();
        sort_modes(&mut want.modes);
        assert_eq!(parsed, want);
    }

    #[test]
    fn foreign_dialect_features() {
        let t = parse_task("#modeb(2, p(var(t))).\n#pos({a}, {b}).").unwrap();
        assert_eq!(t.modes[0].types, ["t"]);
        assert_eq!(t.examples[0].id, "ex1");
        assert!(t.examples[0].context.statements.is_empty());
        for bad in ["#neg(e, {a}, {}).", "#modeh(p(const(t))).", "#pos(e@10, {a}, {})."] {
            let err = parse_task(bad).unwrap_err();
            assert!(err.to_string().contains("unsupported"), "{bad}: {err}");
        }
        assert!(parse_task("#pos(e, {a(X)}, {}).").is_err());
    }

    #[test]
    fn modes_only_file() {
        let t = LearningTask {
            modes: toy().modes,
            ..Default::default()
        };
        let text = serialize_task(&t);
        assert!(text.starts_with("#modeh("));
        assert!(!text.contains("#pos"));
    }
}
