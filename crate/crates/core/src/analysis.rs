//! Predicate dependencies of an encoding and the split into choice heads and
//! predicates fixed by the problem instance.

use std::collections::{BTreeMap, BTreeSet};

use crate::asp_core::{BodyItem, Head, PredicateSig, Program, Statement};
use crate::diag::Diagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Choice,
    Normal,
}

/// `head` depends on `body`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub head: PredicateSig,
    pub body: PredicateSig,
    pub kind: EdgeKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DependencyGraph {
    pub nodes: BTreeSet<PredicateSig>,
    /// One entry per body occurrence, in program order.
    pub edges: Vec<Edge>,
}

impl DependencyGraph {
    /// Predicates `p` depends on directly.
    pub fn successors(&self, p: &PredicateSig) -> BTreeSet<&PredicateSig> {
        self.edges.iter().filter(|e| &e.head == p).map(|e| &e.body).collect()
    }
}

fn literal_sigs(items: &[BodyItem]) -> impl Iterator<Item = PredicateSig> + '_ {
    items.iter().filter_map(BodyItem::literal).map(|l| l.atom.sig())
}

pub fn build_dependency_graph(encoding: &Program) -> DependencyGraph {
    let mut g = DependencyGraph {
        nodes: encoding.predicates(),
        edges: Vec::new(),
    };
    for stmt in &encoding.statements {
        let Statement::Rule(rule) = stmt else { continue };
        match &rule.head {
            Head::None => {}
            Head::Atom(a) => {
                for b in literal_sigs(&rule.body) {
                    g.edges.push(Edge {
                        head: a.sig(),
                        body: b,
                        kind: EdgeKind::Normal,
                    });
                }
            }
            Head::Choice(c) => {
                for el in &c.elements {
                    for b in literal_sigs(&rule.body).chain(literal_sigs(&el.condition)) {
                        g.edges.push(Edge {
                            head: el.atom.sig(),
                            body: b,
                            kind: EdgeKind::Choice,
                        });
                    }
                }
            }
        }
    }
    g
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Classification {
    pub choice_heads: BTreeSet<PredicateSig>,
    pub instance_determined: BTreeSet<PredicateSig>,
    pub instance_predicates: BTreeSet<PredicateSig>,
    pub diagnostics: Vec<Diagnostic>,
}

impl Classification {
    pub fn is_determined(&self, p: &PredicateSig) -> bool {
        self.instance_determined.contains(p)
    }

    pub fn is_choice_head(&self, p: &PredicateSig) -> bool {
        self.choice_heads.contains(p)
    }
}

/// Choice-element predicates of the encoding.
pub fn choice_heads(encoding: &Program) -> BTreeSet<PredicateSig> {
    encoding
        .rules()
        .filter_map(|r| match &r.head {
            Head::Choice(c) => Some(c.elements.iter().map(|e| e.atom.sig())),
            _ => None,
        })
        .flatten()
        .collect()
}

/// Least fixpoint: `p` is instance-determined iff it is not a choice head
/// and every rule defining it is a normal rule whose body predicates are
/// already determined. Predicates without defining rules are determined.
pub fn classify(encoding: &Program, instance_predicates: &BTreeSet<PredicateSig>) -> Classification {
    let heads = choice_heads(encoding);
    let mut diagnostics = Vec::new();

    let mut defs: BTreeMap<PredicateSig, Vec<BTreeSet<PredicateSig>>> = BTreeMap::new();
    for r in encoding.rules() {
        if let Head::Atom(a) = &r.head {
            defs.entry(a.sig()).or_default().push(literal_sigs(&r.body).collect());
        }
    }

    let mut all = encoding.predicates();
    all.extend(instance_predicates.iter().cloned());

    let mut determined = BTreeSet::new();
    loop {
        let mut changed = false;
        for p in &all {
            if determined.contains(p) || heads.contains(p) {
                continue;
            }
            let ok = defs
                .get(p)
                .is_none_or(|bodies| bodies.iter().all(|b| b.is_subset(&determined)));
            if ok {
                determined.insert(p.clone());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut instance = BTreeSet::new();
    for p in instance_predicates {
        if heads.contains(p) {
            diagnostics.push(Diagnostic::warning(format!(
                "{p} occurs as an instance fact but is also a choice head; treated as choice head"
            )));
        } else if !determined.contains(p) {
            diagnostics.push(Diagnostic::warning(format!(
                "{p} occurs as an instance fact but is also derived from non-deterministic rules"
            )));
        } else {
            instance.insert(p.clone());
        }
    }

    Classification {
        choice_heads: heads,
        instance_determined: determined,
        instance_predicates: instance,
        diagnostics,
    }
}

/// Fact predicates of a set of instance programs.
pub fn instance_predicates<'a>(instances: impl IntoIterator<Item = &'a Program>) -> BTreeSet<PredicateSig> {
    instances
        .into_iter()
        .flat_map(|p| p.facts().into_iter().map(|a| a.sig()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asp_core::parse_program;

    fn sig(name: &str, arity: usize) -> PredicateSig {
        PredicateSig::new(name, arity)
    }

    #[test]
    fn choice_rule_edges() {
        let p = parse_program("{cabinetTOthing(C,T)} :- cabinetDomain(C), thing(T).").unwrap();
        let g = build_dependency_graph(&p);
        let pairs: Vec<_> = g.edges.iter().map(|e| (e.head.to_string(), e.body.to_string(), e.kind)).collect();
        assert_eq!(
            pairs,
            [
                ("cabinetTOthing/2".into(), "cabinetDomain/1".into(), EdgeKind::Choice),
                ("cabinetTOthing/2".to_string(), "thing/1".to_string(), EdgeKind::Choice),
            ]
        );
    }

    #[test]
    fn normal_rule_edge_and_empty_program() {
        let p = parse_program("cabinetDomain(C) :- cabinetDomainNew(C).").unwrap();
        let g = build_dependency_graph(&p);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].head, sig("cabinetDomain", 1));
        assert_eq!(g.edges[0].body, sig("cabinetDomainNew", 1));
        assert_eq!(g.edges[0].kind, EdgeKind::Normal);
        assert_eq!(build_dependency_graph(&Program::default()), DependencyGraph::default());
    }

    #[test]
    fn condition_atoms_are_bodies() {
        let p = parse_program("1 { a(X) : b(X) } 1 :- c.").unwrap();
        let g = build_dependency_graph(&p);
        let succ: Vec<_> = g.successors(&sig("a", 1)).into_iter().cloned().collect();
        assert_eq!(succ, [sig("b", 1), sig("c", 0)]);
    }

    #[test]
    fn hrp_domains() {
        let enc = parse_program(
            "cabinetDomain(C) :- cabinetDomainNew(C).
             cabinetDomain(C) :- legacyConfig_cabinet(C).
             { cabinetTOthing(C,T) } :- cabinetDomain(C), thing(T).
             cabinet(C) :- cabinetTOthing(C,T).
             p(X) :- p(X).",
        )
        .unwrap();
        let inst: BTreeSet<_> = [sig("cabinetDomainNew", 1), sig("legacyConfig_cabinet", 1), sig("thing", 1), sig("onlyInstance", 2)]
            .into_iter()
            .collect();
        let cls = classify(&enc, &inst);
        assert!(cls.is_determined(&sig("cabinetDomain", 1)));
        assert!(cls.is_determined(&sig("onlyInstance", 2)));
        assert!(cls.is_choice_head(&sig("cabinetTOthing", 2)));
        assert!(!cls.is_determined(&sig("cabinetTOthing", 2)));
        assert!(!cls.is_determined(&sig("cabinet", 1)));
        assert!(!cls.is_determined(&sig("p", 1)));
        assert!(cls.diagnostics.is_empty());
        assert_eq!(cls.instance_predicates, inst);
    }

    #[test]
    fn instance_fact_of_choice_head_warns() {
        let enc = parse_program("{ a(X) } :- b(X).").unwrap();
        let inst: BTreeSet<_> = [sig("a", 1), sig("b", 1)].into_iter().collect();
        let cls = classify(&enc, &inst);
        assert!(cls.is_choice_head(&sig("a", 1)));
        assert!(!cls.instance_predicates.contains(&sig("a", 1)));
        assert_eq!(cls.diagnostics.len(), 1);
    }

    #[test]
    fn negation_on_determined_is_allowed() {
        let enc = parse_program("a(X) :- b(X), not c(X). c(1).").unwrap();
        let cls = classify(&enc, &BTreeSet::new());
        assert!(cls.is_determined(&sig("a", 1)));
    }
}
