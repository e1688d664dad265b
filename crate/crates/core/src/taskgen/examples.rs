use std::collections::BTreeSet;

use crate::asp_core::{parse_atom, parse_program, AtomSet, PredicateSig, Program, RuleKind, Statement};
use crate::diag::Diagnostic;

use super::{Example, ModeDeclaration, TaskError};

/// Turn a file stem into a valid example identifier: non-alphanumeric
/// characters become `_`, and a leading non-lowercase character gets an
/// `ex_` prefix.
pub fn sanitize_id(stem: &str) -> String {
    let mut id: String = stem
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if !id.starts_with(|c: char| c.is_ascii_lowercase()) {
        id.insert_str(0, "ex_");
    }
    id
}

/// Parse an answer set given either as dotted facts (one per line or
/// otherwise separated) or as a solver witness line of space-separated
/// atoms. A full solver transcript is accepted too: the witness after the
/// last `Answer:` line is taken.
pub fn parse_answer_set(text: &str) -> Result<AtomSet, TaskError> {
    let lines: Vec<&str> = text.lines().collect();
    if let Some(pos) = lines.iter().rposition(|l| l.trim_start().starts_with("Answer:")) {
        let witness = lines.get(pos + 1).copied().unwrap_or("");
        return parse_witness(witness);
    }
    if text.contains('.') {
        let program = parse_program(text).map_err(|e| TaskError::AnswerSet(e.to_string()))?;
        let mut out = AtomSet::new();
        for s in &program.statements {
            match s {
                Statement::Rule(r) if r.kind() == RuleKind::Fact => {
                    out.insert(r.head_atom().expect("fact has an atom head").clone());
                }
                other => return Err(TaskError::AnswerSet(format!("`{other}` is not a ground fact"))),
            }
        }
        Ok(out)
    } else {
        parse_witness(text)
    }
}

fn parse_witness(text: &str) -> Result<AtomSet, TaskError> {
    text.split_whitespace()
        .map(|tok| {
            let atom = parse_atom(tok).map_err(|e| TaskError::AnswerSet(format!("`{tok}`: {e}")))?;
            if atom.is_ground() {
                Ok(atom)
            } else {
                Err(TaskError::AnswerSet(format!("`{tok}` is not ground")))
            }
        })
        .collect()
}

/// One positive example per instance: inclusions are the answer-set atoms
/// of head-mode predicates, exclusions are empty, the context is the
/// instance's facts.
pub fn build_examples(
    instances: &[(String, Program)],
    answer_sets: &[(String, AtomSet)],
    head_modes: &[ModeDeclaration],
    encoding: &Program,
) -> Result<(Vec<Example>, Vec<Diagnostic>), TaskError> {
    if instances.len() != answer_sets.len() {
        return Err(TaskError::CountMismatch {
            instances: instances.len(),
            answer_sets: answer_sets.len(),
        });
    }
    let heads: BTreeSet<PredicateSig> = head_modes.iter().map(|m| m.sig()).collect();
    let known = encoding.predicates();
    let mut diagnostics = Vec::new();
    let mut examples = Vec::new();
    for ((id, instance), (as_id, answer)) in instances.iter().zip(answer_sets) {
        if id != as_id {
            return Err(TaskError::MismatchedIds {
                instance: id.clone(),
                answer_set: as_id.clone(),
            });
        }
        let mut unknown: BTreeSet<PredicateSig> = BTreeSet::new();
        for a in answer {
            let s = a.sig();
            if !known.contains(&s) {
                unknown.insert(s);
            }
        }
        for s in unknown {
            diagnostics.push(Diagnostic::warning(format!(
                "answer set of `{id}` contains {s}, which does not occur in the encoding"
            )));
        }
        let inclusions = answer.iter().filter(|a| heads.contains(&a.sig())).cloned().collect();
        let facts = instance.rules().filter(|r| r.kind() == RuleKind::Fact).cloned();
        examples.push(Example {
            id: id.clone(),
            inclusions,
            exclusions: AtomSet::new(),
            context: Program::from_rules(facts),
        });
    }
    Ok((examples, diagnostics))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atoms(xs: &[&str]) -> AtomSet {
        xs.iter().map(|a| parse_atom(a).unwrap()).collect()
    }

    fn toy() -> (Vec<(String, Program)>, Vec<ModeDeclaration>, Program) {
        let inst = parse_program("cabinetDomainNew(1). thing(2).").unwrap();
        let modes = vec![ModeDeclaration::head("cabinetTOthing", vec!["cabinetDomain".into(), "thing".into()])];
        let enc = parse_program("{ cabinetTOthing(C,T) } :- cabinetDomain(C), thing(T).").unwrap();
        (vec![("ex1".to_string(), inst)], modes, enc)
    }

    #[test]
    fn filters_to_head_predicates() {
        let (inst, modes, enc) = toy();
        let answer = atoms(&["cabinetTOthing(1,2)", "cabinetDomain(1)", "thing(2)"]);
        let (ex, diags) = build_examples(&inst, &[("ex1".into(), answer)], &modes, &enc).unwrap();
        assert_eq!(ex[0].inclusions, atoms(&["cabinetTOthing(1,2)"]));
        assert!(ex[0].exclusions.is_empty());
        assert_eq!(ex[0].context.facts(), atoms(&["cabinetDomainNew(1)", "thing(2)"]));
        assert!(diags.is_empty());
    }

    #[test]
    fn empty_filter_and_idempotence() {
        let (inst, modes, enc) = toy();
        let answers = vec![("ex1".to_string(), atoms(&["thing(2)"]))];
        let a = build_examples(&inst, &answers, &modes, &enc).unwrap().0;
        let b = build_examples(&inst, &answers, &modes, &enc).unwrap().0;
        assert!(a[0].inclusions.is_empty());
        assert_eq!(a, b);
    }

    #[test]
    fn mismatched_ids_and_unknown_predicates() {
        let (inst, modes, enc) = toy();
        let err = build_examples(&inst, &[("ex2".into(), AtomSet::new())], &modes, &enc).unwrap_err();
        assert!(matches!(err, TaskError::MismatchedIds { .. }));
        let (_, diags) = build_examples(&inst, &[("ex1".into(), atoms(&["foo(1)"]))], &modes, &enc).unwrap();
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn answer_set_formats() {
        let want = atoms(&["a(1)", "b(x,2)"]);
        assert_eq!(parse_answer_set("a(1).\nb(x,2).\n").unwrap(), want);
        assert_eq!(parse_answer_set("a(1) b(x,2)\n").unwrap(), want);
        let transcript = "clingo version 5.8.0\nReading from house.lp ...\nSolving...\nAnswer: 1\na(1)\nOptimization: 3\nAnswer: 2\na(1) b(x,2)\nOptimization: 2\nOPTIMUM FOUND\n";
        assert_eq!(parse_answer_set(transcript).unwrap(), want);
        assert!(parse_answer_set("a(X).").is_err());
        assert!(parse_answer_set("").unwrap().is_empty());
    }

    #[test]
    fn ids() {
        assert_eq!(sanitize_id("ec_1"), "ec_1");
        assert_eq!(sanitize_id("1-small"), "ex_1_small");
        assert_eq!(sanitize_id("House.v2"), "ex_House_v2");
    }
}
