mod common;

use std::collections::BTreeSet;

use common::read;
use heulearn::heuremit::{emit_heuristics, is_projection_type, postprocess, rule_to_directive, AnnotationMode};
use heulearn::learner::{Hypothesis, Provenance};
use heulearn::taskgen::parse_task;

fn hypothesis(rel: &str) -> Hypothesis {
    Hypothesis::parse(&read(rel), Provenance::External).unwrap()
}

#[test]
fn thirteen_rules_hard_and_soft() {
    let h = hypothesis("heuremit/hypothesis_13.lp");
    let types: BTreeSet<String> = ["cabinetDomain", "thing", "roomDomain", "legacyConfig_room"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let cleaned = postprocess(&h, &types).unwrap();
    assert_eq!(cleaned, h);
    let hard = emit_heuristics(&cleaned, AnnotationMode::Hard).unwrap();
    let soft = emit_heuristics(&cleaned, AnnotationMode::Soft).unwrap();
    assert_eq!(hard, read("heuremit/heuristics_hard.golden.heu"));
    assert_eq!(soft, read("heuremit/heuristics_soft.golden.heu"));
    assert_eq!(hard.lines().count(), 13);
    for ((src, h), s) in read("heuremit/hypothesis_13.lp").lines().zip(hard.lines()).zip(soft.lines()) {
        assert_eq!(h, format!("#heuristic {} [1,true]", src.replace(":-", ":")));
        assert_eq!(s, h.replace("[1,true]", "[2,factor]"));
    }
    for r in &cleaned.rules {
        assert!(rule_to_directive(r, AnnotationMode::Hard).unwrap().to_string().ends_with("[1,true]"));
    }
}

#[test]
fn raw_learner_output_is_stripped() {
    let raw = hypothesis("heuremit/hypothesis_raw.lp");
    let task = parse_task(&read("toy/task.golden.las")).unwrap();
    let mut types = task.type_names();
    types.extend(
        raw.rules
            .iter()
            .flat_map(|r| r.literals().map(|l| l.atom.predicate.clone()))
            .filter(|p| is_projection_type(p)),
    );
    let cleaned = postprocess(&raw, &types).unwrap();
    assert_eq!(cleaned.to_string(), read("heuremit/hypothesis_13.lp"));
    assert_eq!(
        emit_heuristics(&cleaned, AnnotationMode::Soft).unwrap(),
        read("heuremit/heuristics_soft.golden.heu")
    );
}
