use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::asp_core::{Atom, AtomSet, PredicateSig, Program, Rule};
use crate::taskgen::{Example, LearningTask};

use super::model::{extend_model, least_model_of};
use super::{enumerate_rule_space, rule_cost, Hypothesis, LearnError, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoverageReport {
    /// (example id, covered) in task order.
    pub covered: Vec<(String, bool)>,
}

impl CoverageReport {
    pub fn uncovered(&self) -> Vec<&str> {
        self.covered.iter().filter(|(_, c)| !c).map(|(id, _)| id.as_str()).collect()
    }

    pub fn all_covered(&self) -> bool {
        self.covered.iter().all(|(_, c)| *c)
    }
}

/// An example is covered iff the least model of background, hypothesis and
/// context contains every inclusion and no exclusion.
pub fn covers(background: &Program, h: &Hypothesis, e: &Example) -> Result<bool, LearnError> {
    let hp = h.as_program();
    let m = least_model_of(&[background, &hp, &e.context])?;
    Ok(e.inclusions.is_subset(&m) && e.exclusions.is_disjoint(&m))
}

/// Example index and inclusion atom.
type Obligation = (usize, Atom);

struct Candidate {
    rule: Rule,
    text: String,
    cost: usize,
    covers: BTreeSet<Obligation>,
}

/// `a` has a strictly better covered/cost ratio than `b`, or the same ratio
/// and smaller rule text.
fn better(a_gain: usize, a: &Candidate, b_gain: usize, b: &Candidate) -> bool {
    match (a_gain * b.cost).cmp(&(b_gain * a.cost)) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => a.text < b.text,
    }
}

/// Greedy set cover of the per-example inclusion obligations, run
/// separately for each head predicate, followed by removal of rules the
/// others make redundant. Candidates deriving an exclusion are discarded.
pub fn search_hypothesis(task: &LearningTask, max_body: Option<usize>) -> Result<(Hypothesis, CoverageReport), LearnError> {
    let space = enumerate_rule_space(&task.modes, &task.background, max_body);
    for d in &space.diagnostics {
        log::warn!("{d}");
    }

    let base: Vec<AtomSet> = task
        .examples
        .iter()
        .map(|e| least_model_of(&[&task.background, &e.context]))
        .collect::<Result<_, _>>()?;
    let background_body: BTreeSet<PredicateSig> = task
        .background
        .rules()
        .flat_map(|r| r.literals().map(|l| l.atom.sig()))
        .collect();

    let mut obligations: BTreeMap<PredicateSig, BTreeSet<Obligation>> = BTreeMap::new();
    for (i, e) in task.examples.iter().enumerate() {
        for a in e.inclusions.iter().filter(|a| !base[i].contains(a)) {
            obligations.entry(a.sig()).or_default().insert((i, a.clone()));
        }
    }

    let evaluate = |rule: &Rule| -> Result<Option<Candidate>, LearnError> {
        let head = rule.head_atom().expect("rule space yields atom heads").sig();
        let fast = !background_body.contains(&head) && rule.literals().all(|l| l.atom.sig() != head);
        let mut covered = BTreeSet::new();
        for (i, e) in task.examples.iter().enumerate() {
            let model = if fast {
                extend_model(&base[i], &[rule])?
            } else {
                let single = Program::from_rules([rule.clone()]);
                least_model_of(&[&task.background, &e.context, &single])?
            };
            if !e.exclusions.is_disjoint(&model) {
                return Ok(None);
            }
            for a in e.inclusions.iter().filter(|a| !base[i].contains(a) && model.contains(a)) {
                covered.insert((i, a.clone()));
            }
        }
        Ok(Some(Candidate {
            text: rule.to_string(),
            cost: rule_cost(rule),
            rule: rule.clone(),
            covers: covered,
        }))
    };
    let candidates: Vec<Candidate> = space
        .rules
        .par_iter()
        .map(evaluate)
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut by_head: BTreeMap<PredicateSig, Vec<&Candidate>> = BTreeMap::new();
    for c in &candidates {
        by_head.entry(c.rule.head_atom().unwrap().sig()).or_default().push(c);
    }

    let mut rules = Vec::new();
    for (head, todo) in &obligations {
        let Some(cands) = by_head.get(head) else { continue };
        let mut uncovered = todo.clone();
        let mut chosen: Vec<&Candidate> = Vec::new();
        loop {
            let mut best: Option<(usize, &Candidate)> = None;
            for c in cands {
                let gain = c.covers.intersection(&uncovered).count();
                if gain == 0 {
                    continue;
                }
                if best.is_none_or(|(bg, b)| better(gain, c, bg, b)) {
                    best = Some((gain, c));
                }
            }
            let Some((_, c)) = best else { break };
            for o in &c.covers {
                uncovered.remove(o);
            }
            chosen.push(c);
        }
        let reached: BTreeSet<&Obligation> = chosen.iter().flat_map(|c| c.covers.intersection(todo)).collect();
        let mut i = 0;
        while i < chosen.len() {
            let rest: BTreeSet<&Obligation> = chosen
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .flat_map(|(_, c)| c.covers.intersection(todo))
                .collect();
            if rest == reached {
                chosen.remove(i);
            } else {
                i += 1;
            }
        }
        rules.extend(chosen.into_iter().map(|c| c.rule.clone()));
    }

    let hypothesis = Hypothesis::new(rules, Provenance::Embedded);
    let report = coverage_report(&task.background, &hypothesis, &task.examples)?;
    Ok((hypothesis, report))
}

pub(crate) fn coverage_report(background: &Program, h: &Hypothesis, examples: &[Example]) -> Result<CoverageReport, LearnError> {
    let flags: Vec<bool> = examples
        .par_iter()
        .map(|e| covers(background, h, e))
        .collect::<Result<_, _>>()?;
    Ok(CoverageReport {
        covered: examples.iter().map(|e| e.id.clone()).zip(flags).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp_core::{parse_atom, parse_program};
    use crate::taskgen::parse_task;

    const TOY: &str = "cabinetDomain(C) :- cabinetDomainNew(C).
#modeh(cabinetTOthing(var(cabinetDomain), var(thing))).
#modeb(cabinetDomain(var(cabinetDomain))).
#modeb(thing(var(thing))).
#pos(ex1, {cabinetTOthing(1,2)}, {}, {cabinetDomainNew(1). thing(2).}).";

    fn ex1() -> Example {
        parse_task(TOY).unwrap().examples.remove(0)
    }

    fn single_rule() -> Hypothesis {
        Hypothesis::parse("cabinetTOthing(V0,V1) :- cabinetDomain(V0), thing(V1).", Provenance::Embedded).unwrap()
    }

    #[test]
    fn coverage_of_learned_rules() {
        let bg = parse_program("cabinetDomain(C) :- cabinetDomainNew(C).").unwrap();
        assert!(covers(&bg, &single_rule(), &ex1()).unwrap());
        assert!(!covers(&bg, &Hypothesis::new(vec![], Provenance::Embedded), &ex1()).unwrap());
        let mut e = ex1();
        e.exclusions.insert(parse_atom("thing(2)").unwrap());
        assert!(!covers(&bg, &single_rule(), &e).unwrap());
    }

    #[test]
    fn toy_learning() {
        let task = parse_task(TOY).unwrap();
        let (h, report) = search_hypothesis(&task, None).unwrap();
        assert_eq!(h, single_rule());
        assert_eq!(report.covered, [("ex1".to_string(), true)]);
    }

    #[test]
    fn no_examples() {
        let mut task = parse_task(TOY).unwrap();
        task.examples.clear();
        let (h, report) = search_hypothesis(&task, None).unwrap();
        assert!(h.rules.is_empty());
        assert!(report.covered.is_empty());
    }

    #[test]
    fn uncoverable_is_reported() {
        let task = parse_task(
            "#modeh(a(var(t))).
             #pos(e1, {a(1)}, {}, {t(1).}).",
        )
        .unwrap();
        let (h, report) = search_hypothesis(&task, None).unwrap();
        assert!(h.rules.is_empty());
        assert_eq!(report.uncovered(), ["e1"]);
    }

    #[test]
    fn exclusions_rule_out_overgeneral_rules() {
        let task = parse_task(
            "#modeh(p(var(t))).
             #modeb(t(var(t))).
             #modeb(q(var(t))).
             #pos(e1, {p(1)}, {p(2)}, {t(1). t(2). q(1).}).",
        )
        .unwrap();
        let (h, report) = search_hypothesis(&task, None).unwrap();
        assert_eq!(h.to_string(), "p(V0) :- q(V0).\n");
        assert!(report.all_covered());
    }

    #[test]
    fn redundant_rules_are_pruned() {
        let task = parse_task(
            "#modeh(p(var(t))).
             #modeb(a(var(t))).
             #modeb(b(var(t))).
             #modeb(c(var(t))).
             #pos(e1, {p(1), p(2), p(3)}, {p(4)}, {a(1). a(2). b(2). b(3). c(1). c(3). a(4). b(5). c(6).}).",
        )
        .unwrap();
        let (h, report) = search_hypothesis(&task, None).unwrap();
        assert!(report.all_covered());
        assert_eq!(h.rules.len(), 2);
    }
}
