use std::collections::{BTreeMap, BTreeSet};

use crate::analysis::Classification;
use crate::asp_core::{Atom, BodyItem, Head, PredicateSig, Program, Rule, Term};
use crate::diag::Diagnostic;

use super::{sort_modes, ModeBias, ModeDeclaration, StrictTypeRules};

/// Name of the type holding the `index`-th (0-based) argument of `pred`.
pub fn projection_type(pred: &str, index: usize) -> String {
    format!("{pred}_arg{}", index + 1)
}

/// `p_argI(XI) :- p(X1,...,Xn).`
pub fn projection_rule(sig: &PredicateSig, index: usize) -> Rule {
    let vars: Vec<Term> = (1..=sig.arity).map(|i| Term::var(format!("X{i}"))).collect();
    Rule::normal(
        Atom::new(projection_type(&sig.name, index), vec![vars[index].clone()]),
        vec![BodyItem::pos(Atom::new(sig.name.clone(), vars))],
    )
}

/// Types requested while deriving modes, turned into rules at the end.
#[derive(Default)]
struct TypeRequests {
    /// Instance-determined predicates whose definitions must be copied.
    copy: BTreeSet<PredicateSig>,
    /// (predicate, argument index) pairs needing a projection type.
    projections: BTreeSet<(PredicateSig, usize)>,
    names: BTreeSet<String>,
}

impl TypeRequests {
    fn own(&mut self, sig: &PredicateSig) -> String {
        self.copy.insert(sig.clone());
        self.names.insert(sig.name.clone());
        sig.name.clone()
    }

    fn projection(&mut self, sig: &PredicateSig, index: usize, determined: bool) -> String {
        if determined {
            self.copy.insert(sig.clone());
        }
        self.projections.insert((sig.clone(), index));
        let name = projection_type(&sig.name, index);
        self.names.insert(name.clone());
        name
    }

    fn into_rules(self, encoding: &Program) -> StrictTypeRules {
        let defs = encoding.definitions();
        let mut closure = BTreeSet::new();
        let mut stack: Vec<PredicateSig> = self.copy.into_iter().collect();
        while let Some(p) = stack.pop() {
            if !closure.insert(p.clone()) {
                continue;
            }
            for r in defs.get(&p).into_iter().flatten() {
                for l in r.literals() {
                    let s = l.atom.sig();
                    if defs.contains_key(&s) && !closure.contains(&s) {
                        stack.push(s);
                    }
                }
            }
        }
        let mut rules: Vec<Rule> = encoding
            .rules()
            .filter(|r| r.head_atom().is_some_and(|a| closure.contains(&a.sig())))
            .cloned()
            .collect();
        let mut proj: Vec<Rule> = self
            .projections
            .iter()
            .map(|(s, i)| projection_rule(s, *i))
            .collect();
        proj.sort_by_cached_key(|r| r.to_string());
        rules.extend(proj);
        StrictTypeRules {
            rules,
            type_names: self.names,
        }
    }
}

/// Background of a task: copied definitions in encoding order followed by
/// projection rules in sorted order, without duplicates.
pub(super) fn merge_background(encoding: &Program, a: &StrictTypeRules, b: &StrictTypeRules) -> Program {
    let wanted: BTreeSet<String> = a.rules.iter().chain(&b.rules).map(|r| r.to_string()).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in encoding.rules() {
        let text = r.to_string();
        if wanted.contains(&text) && seen.insert(text) {
            out.push(r.clone());
        }
    }
    let mut rest: Vec<&Rule> = a
        .rules
        .iter()
        .chain(&b.rules)
        .filter(|r| !seen.contains(&r.to_string()))
        .collect();
    rest.sort_by_cached_key(|r| r.to_string());
    rest.dedup_by_key(|r| r.to_string());
    out.extend(rest.into_iter().cloned());
    Program::from_rules(out)
}

/// A choice element together with the context it is chosen under.
struct ChoiceSite<'a> {
    atom: &'a Atom,
    context: Vec<&'a Atom>,
}

fn choice_sites(encoding: &Program) -> BTreeMap<PredicateSig, Vec<ChoiceSite<'_>>> {
    let mut out: BTreeMap<PredicateSig, Vec<ChoiceSite<'_>>> = BTreeMap::new();
    for r in encoding.rules() {
        let Head::Choice(c) = &r.head else { continue };
        for el in &c.elements {
            let context = r
                .positive_atoms()
                .chain(el.condition.iter().filter_map(BodyItem::literal).filter(|l| l.positive).map(|l| &l.atom))
                .collect();
            out.entry(el.atom.sig()).or_default().push(ChoiceSite {
                atom: &el.atom,
                context,
            });
        }
    }
    out
}

#[derive(Clone)]
enum ArgType {
    /// Context predicate name (unary, instance-determined).
    Own(PredicateSig),
    /// Projection of a context predicate argument.
    Projection(PredicateSig, usize),
}

struct HeadResolver<'a> {
    cls: &'a Classification,
    sites: BTreeMap<PredicateSig, Vec<ChoiceSite<'a>>>,
    resolved: BTreeMap<PredicateSig, Option<Vec<ArgType>>>,
    in_progress: BTreeSet<PredicateSig>,
}

impl HeadResolver<'_> {
    /// Types of a choice head using only bullets 1 to 3, or `None` if no
    /// choice rule for it resolves every argument.
    fn resolve(&mut self, head: &PredicateSig) -> Option<Vec<ArgType>> {
        if let Some(r) = self.resolved.get(head) {
            return r.clone();
        }
        if !self.in_progress.insert(head.clone()) {
            return None;
        }
        let n = self.sites.get(head).map_or(0, Vec::len);
        let mut result = None;
        for i in 0..n {
            if let Some(types) = self.resolve_site(head, i) {
                result = Some(types);
                break;
            }
        }
        self.in_progress.remove(head);
        self.resolved.insert(head.clone(), result.clone());
        result
    }

    fn resolve_site(&mut self, head: &PredicateSig, site: usize) -> Option<Vec<ArgType>> {
        let (args, context): (Vec<Term>, Vec<Atom>) = {
            let s = &self.sites[head][site];
            (s.atom.args.clone(), s.context.iter().map(|a| (*a).clone()).collect())
        };
        args.iter().map(|t| self.resolve_arg(t, &context)).collect()
    }

    fn resolve_arg(&mut self, term: &Term, context: &[Atom]) -> Option<ArgType> {
        let Term::Var(v) = term else { return None };
        for atom in context {
            for (j, t) in atom.args.iter().enumerate() {
                if !matches!(t, Term::Var(w) if w == v) {
                    continue;
                }
                let sig = atom.sig();
                if self.cls.is_choice_head(&sig) {
                    if let Some(types) = self.resolve(&sig) {
                        return Some(types[j].clone());
                    }
                } else if self.cls.is_determined(&sig) {
                    return Some(if sig.arity == 1 {
                        ArgType::Own(sig)
                    } else {
                        ArgType::Projection(sig, j)
                    });
                }
            }
        }
        None
    }

    /// Fallback for heads no choice rule resolves: per unresolved argument,
    /// project the first context atom mentioning its variable, else the
    /// head itself.
    fn fallback(&mut self, head: &PredicateSig) -> Vec<ArgType> {
        let (args, context): (Vec<Term>, Vec<Atom>) = match self.sites.get(head).and_then(|s| s.first()) {
            Some(s) => (s.atom.args.clone(), s.context.iter().map(|a| (*a).clone()).collect()),
            None => (Vec::new(), Vec::new()),
        };
        args.iter()
            .enumerate()
            .map(|(i, t)| {
                if let Some(ty) = self.resolve_arg(t, &context) {
                    return ty;
                }
                let hit = context.iter().find_map(|a| {
                    a.args
                        .iter()
                        .position(|x| x.is_var() && x == t)
                        .map(|j| (a.sig(), j))
                });
                match hit {
                    Some((sig, j)) => ArgType::Projection(sig, j),
                    None => ArgType::Projection(head.clone(), i),
                }
            })
            .collect()
    }
}

/// One `#modeh` per choice-head predicate.
///
/// Argument types are resolved per argument from the context of the first
/// choice rule that resolves completely: a unary instance-determined context
/// predicate is used as the type itself; a context predicate that is a choice
/// head passes on its own type at that position; a non-unary determined
/// predicate contributes a projection type `p_argI`. Heads that no choice
/// rule resolves fall back to projection types with a diagnostic.
pub fn derive_head_modes(encoding: &Program, cls: &Classification) -> ModeBias {
    let mut resolver = HeadResolver {
        cls,
        sites: choice_sites(encoding),
        resolved: BTreeMap::new(),
        in_progress: BTreeSet::new(),
    };
    let mut req = TypeRequests::default();
    let mut modes = Vec::new();
    let mut diagnostics = Vec::new();
    for head in &cls.choice_heads {
        let types = match resolver.resolve(head) {
            Some(t) => t,
            None => {
                diagnostics.push(Diagnostic::warning(format!(
                    "choice head {head}: context is neither instance-determined nor typed by another head; using projection types"
                )));
                resolver.fallback(head)
            }
        };
        let names = types
            .iter()
            .map(|t| match t {
                ArgType::Own(sig) => req.own(sig),
                ArgType::Projection(sig, j) => {
                    let det = cls.is_determined(sig);
                    req.projection(sig, *j, det)
                }
            })
            .collect();
        modes.push(ModeDeclaration::head(head.name.clone(), names));
    }
    sort_modes(&mut modes);
    ModeBias {
        modes,
        types: req.into_rules(encoding),
        diagnostics,
    }
}

/// One `#modeb` per remaining predicate of the encoding. Unary
/// instance-determined predicates are their own type; everything else is
/// typed by per-argument projections.
pub fn derive_body_modes(encoding: &Program, cls: &Classification, head_modes: &[ModeDeclaration]) -> ModeBias {
    let heads: BTreeSet<PredicateSig> = head_modes.iter().map(|m| m.sig()).collect();
    let mut req = TypeRequests::default();
    let mut modes = Vec::new();
    let mut diagnostics = Vec::new();
    for sig in encoding.predicates() {
        if heads.contains(&sig) || cls.is_choice_head(&sig) {
            continue;
        }
        let det = cls.is_determined(&sig);
        let types = if sig.arity == 1 && det {
            vec![req.own(&sig)]
        } else {
            if sig.arity == 1 {
                diagnostics.push(Diagnostic::warning(format!(
                    "{sig} is not instance-determined; typed by projection {}",
                    projection_type(&sig.name, 0)
                )));
            }
            (0..sig.arity).map(|j| req.projection(&sig, j, det)).collect()
        };
        modes.push(ModeDeclaration::body(sig.name.clone(), types));
    }
    sort_modes(&mut modes);
    ModeBias {
        modes,
        types: req.into_rules(encoding),
        diagnostics,
    }
}
