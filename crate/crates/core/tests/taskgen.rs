mod common;

use std::time::Instant;

use common::{fixture, hrp_inputs, program, read};
use heulearn::taskgen::{generate_task, parse_answer_set, parse_task, serialize_task, ModeKind, TaskError};

const EXAMPLE_MODES: [&str; 3] = [
    "#modeh(cabinetTOthing(var(cabinetDomain), var(thing))).",
    "#modeb(cabinetDomain(var(cabinetDomain))).",
    "#modeb(thing(var(thing))).",
];

fn toy() -> (String, Vec<heulearn::taskgen::ModeDeclaration>) {
    let enc = program("toy/house_snippet.lp");
    let inst = vec![("ex1".to_string(), program("toy/ex1.lp"))];
    let models = vec![("ex1".to_string(), parse_answer_set(&read("toy/ex1.model")).unwrap())];
    let (task, text, _) = generate_task(&enc, &inst, &models).unwrap();
    (text, task.modes)
}

#[test]
fn toy_task_matches_golden() {
    let start = Instant::now();
    let (text, _) = toy();
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert_eq!(text, read("toy/task.golden.las"));
    for line in EXAMPLE_MODES {
        assert!(text.lines().any(|l| l == line), "missing {line}");
    }
    assert_eq!(text.lines().next(), Some("cabinetDomain(C) :- cabinetDomainNew(C)."));
}

#[test]
fn toy_task_round_trips() {
    let text = read("toy/task.golden.las");
    assert_eq!(serialize_task(&parse_task(&text).unwrap()), text);
}

#[test]
fn hrp_mode_counts() {
    let (enc, inst, models) = hrp_inputs();
    let (task, text, _) = generate_task(&enc, &inst, &models).unwrap();
    assert_eq!(task.modes.iter().filter(|m| m.kind == ModeKind::Head).count(), 16);
    assert_eq!(task.modes.iter().filter(|m| m.kind == ModeKind::Body).count(), 32);
    assert_eq!(text.lines().filter(|l| l.starts_with("#modeh(")).count(), 16);
    assert_eq!(text.lines().filter(|l| l.starts_with("#modeb(")).count(), 32);
    assert_eq!(task.examples.len(), 4);
    assert!(text.contains("#modeh(roomTOcabinet(var(roomDomain), var(cabinetDomain)))."));
    // Every example includes only head-mode atoms.
    let heads: Vec<_> = task.modes.iter().filter(|m| m.kind == ModeKind::Head).map(|m| m.sig()).collect();
    for e in &task.examples {
        assert!(e.exclusions.is_empty());
        assert!(e.inclusions.iter().all(|a| heads.contains(&a.sig())));
    }
}

#[test]
fn misaligned_inputs_are_rejected() {
    let (enc, inst, mut models) = hrp_inputs();
    models.swap(0, 1);
    assert!(matches!(generate_task(&enc, &inst, &models), Err(TaskError::MismatchedIds { .. })));
    models.pop();
    assert!(matches!(generate_task(&enc, &inst, &models), Err(TaskError::CountMismatch { .. })));
}

#[test]
fn answer_set_formats() {
    let witness = parse_answer_set(&read("hrp/ec_1.model")).unwrap();
    assert!(!witness.is_empty());
    let dotted = parse_answer_set(&read("hrp/lt_1.model")).unwrap();
    assert!(!dotted.is_empty());
    let transcript = std::fs::read_to_string(fixture("solver/improving.out")).unwrap();
    let last = parse_answer_set(&transcript).unwrap();
    assert_eq!(last.iter().map(|a| a.to_string()).collect::<Vec<_>>(), ["b"]);
}
