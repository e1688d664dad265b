mod common;

use std::time::Instant;

use common::{fixture, hrp_inputs, read};
use heulearn::asp_core::parse_program;
use heulearn::learner::{
    covers, enumerate_rule_space, run_external_learner, search_hypothesis, ExternalLearner, Hypothesis, LearnError,
    Provenance,
};
use heulearn::taskgen::{generate_task, parse_task};

fn sorted_lines(text: &str) -> Vec<String> {
    let mut v: Vec<String> = text.lines().filter(|l| !l.starts_with('%')).map(String::from).collect();
    v.sort();
    v
}

#[test]
fn example_mode_rule_space_is_a_singleton() {
    let task = parse_task(&read("toy/task.golden.las")).unwrap();
    let space = enumerate_rule_space(&task.modes, &task.background, None);
    let texts: Vec<String> = space.rules.iter().map(|r| r.to_string()).collect();
    assert_eq!(texts, ["cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1)."]);
}

#[test]
fn toy_learning_from_generated_task() {
    let task = parse_task(&read("toy/task.golden.las")).unwrap();
    let start = Instant::now();
    let (h, report) = search_hypothesis(&task, None).unwrap();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(h.to_string(), "cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1).\n");
    assert_eq!(report.covered, [("ex1".to_string(), true)]);
}

#[test]
fn hrp_learns_the_thirteen_rules() {
    let (enc, inst, models) = hrp_inputs();
    let (task, _, _) = generate_task(&enc, &inst, &models).unwrap();
    let (h, report) = search_hypothesis(&task, None).unwrap();
    assert!(report.all_covered(), "{:?}", report.uncovered());
    assert_eq!(sorted_lines(&h.to_string()), sorted_lines(&read("heuremit/hypothesis_13.lp")));
    for e in &task.examples {
        assert!(covers(&task.background, &h, e).unwrap());
    }
}

#[test]
fn external_learner_adapter() {
    let task = fixture("toy/task.golden.las");
    let learner = ExternalLearner::new(fixture("mock/mock_learner.sh"));
    let h = run_external_learner(&task, &learner).unwrap();
    assert_eq!(h.provenance, Provenance::External);
    assert_eq!(h.rules.len(), 13);
    assert_eq!(h, Hypothesis::parse(&read("heuremit/hypothesis_raw.lp"), Provenance::External).unwrap());

    let mut failing = learner.clone();
    failing.flags.push("--fail".into());
    match run_external_learner(&task, &failing) {
        Err(LearnError::ExternalFailed { stderr, .. }) => assert!(stderr.contains("out of memory")),
        other => panic!("{other:?}"),
    }
    let mut garbage = learner.clone();
    garbage.flags = vec!["--garbage".into()];
    assert!(matches!(run_external_learner(&task, &garbage), Err(LearnError::Unparseable { line: 2, .. })));
    let missing = ExternalLearner::new("/nonexistent/learner");
    assert!(matches!(run_external_learner(&task, &missing), Err(LearnError::Config(_))));
}

#[test]
fn hypotheses_must_be_definite() {
    assert!(Hypothesis::parse("a :- not b.", Provenance::External).is_err());
    assert!(Hypothesis::parse("{ a }.", Provenance::External).is_err());
    let p = parse_program("a(X) :- b(X).").unwrap();
    assert_eq!(Hypothesis::new(p.rules().cloned().collect(), Provenance::Embedded).cost(), 2);
}
