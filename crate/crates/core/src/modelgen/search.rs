//! Bounded model search.
//!
//! The search is a chase: starting from the required facts it picks the
//! first violated clause instance and branches over the ways of making
//! that instance's body (in negation normal form) true by adding facts,
//! reusing existing entities before introducing fresh ones. A fresh
//! witness that no added fact mentions is brought into the domain by one
//! extra fact over the theory's predicates. Entity counts are tried in
//! increasing order, so the first model found has the least possible
//! number of entities.
//!
//! Guards are positive and every added fact uses a predicate of the theory
//! or of the required facts. Under closed-world evaluation other
//! predicates' extensions cannot change any verdict, so they never enter a
//! candidate.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::folk::{constraint_clauses, Binding, Clause, Constraint, Formula, Index, ShapeError, Term};
use crate::kb::{Assertion, EntityId, KbError, KnowledgeBase, Signature};
use crate::vocab::{gfo_signature, NamedAxiom};

/// Largest supported entity bound.
pub const MAX_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("entity bound {0} exceeds the supported maximum of {MAX_BOUND}")]
    BoundTooLarge(usize),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("required fact rejected: {0}")]
    Fact(#[from] KbError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Satisfiable,
    UnsatisfiableUpToBound,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Satisfiable => "satisfiable",
            Verdict::UnsatisfiableUpToBound => "unsatisfiable-up-to-bound",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ModelSearchResult {
    pub verdict: Verdict,
    /// Entity count of the witness when satisfiable, else the bound searched.
    pub bound: usize,
    pub witness: Option<KnowledgeBase>,
    /// Search nodes visited across all bounds.
    pub models_enumerated: u64,
}

impl ModelSearchResult {
    pub fn is_satisfiable(&self) -> bool {
        self.verdict == Verdict::Satisfiable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Offer only the next canonical fresh name (`e1`, `e2`, …) instead of
    /// every unused one.
    pub symmetry_breaking: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            symmetry_breaking: true,
        }
    }
}

/// Searches for a model of `axioms` over the GFO signature containing
/// `must_contain`, with at most `max_entities` entities.
pub fn find_model(
    axioms: &[NamedAxiom],
    max_entities: usize,
    must_contain: &[Assertion],
) -> Result<ModelSearchResult, ModelError> {
    find_model_with(gfo_signature(), axioms, max_entities, must_contain, SearchOptions::default())
}

/// Least entity count admitting a model, if any within `bound`.
pub fn minimal_model_size(
    axioms: &[NamedAxiom],
    must_contain: &[Assertion],
    bound: usize,
) -> Result<Option<usize>, ModelError> {
    let r = find_model(axioms, bound, must_contain)?;
    Ok(r.is_satisfiable().then_some(r.bound))
}

pub fn find_model_with<C: Constraint>(
    signature: Arc<Signature>,
    axioms: &[C],
    max_entities: usize,
    must_contain: &[Assertion],
    options: SearchOptions,
) -> Result<ModelSearchResult, ModelError> {
    if max_entities > MAX_BOUND {
        return Err(ModelError::BoundTooLarge(max_entities));
    }
    let mut clauses = Vec::new();
    for a in axioms {
        for mut c in constraint_clauses(a.formula())? {
            c.body = nnf(&c.body);
            clauses.push(c);
        }
    }
    let mut seed = KnowledgeBase::new(signature);
    for f in must_contain {
        match &f.instance_id {
            Some(id) => seed.assert_instance(&f.predicate, &f.args, id.clone())?,
            None => seed.assert_fact(&f.predicate, &f.args)?,
        };
    }

    let mut names = BTreeSet::new();
    for c in &clauses {
        names.extend(c.body.predicates());
        names.extend(c.guard.iter().flatten().map(|a| a.predicate.clone()));
    }
    names.extend(must_contain.iter().map(|f| f.predicate.clone()));
    let vocabulary: Vec<(String, usize)> = names
        .into_iter()
        .filter_map(|p| seed.signature().get(&p).map(|s| (p, s.arity())))
        .collect();

    let mut nodes = 0;
    for bound in seed.entity_count()..=max_entities {
        let mut search = Search {
            clauses: &clauses,
            vocabulary: &vocabulary,
            bound,
            options,
            visited: HashSet::new(),
            nodes: 0,
        };
        let found = search.run(seed.clone());
        nodes += search.nodes;
        if let Some(model) = found {
            return Ok(ModelSearchResult {
                verdict: Verdict::Satisfiable,
                bound: model.entity_count(),
                witness: Some(model),
                models_enumerated: nodes,
            });
        }
    }
    Ok(ModelSearchResult {
        verdict: Verdict::UnsatisfiableUpToBound,
        bound: max_entities,
        witness: None,
        models_enumerated: nodes,
    })
}

struct Search<'c> {
    clauses: &'c [Clause],
    /// Predicates of the theory and the required facts with their arities.
    vocabulary: &'c [(String, usize)],
    bound: usize,
    options: SearchOptions,
    visited: HashSet<Vec<Assertion>>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, kb: KnowledgeBase) -> Option<KnowledgeBase> {
        if kb.entity_count() > self.bound || !self.visited.insert(kb.canonical_form()) {
            return None;
        }
        self.nodes += 1;
        let Some((clause, binding)) = self.first_violation(&kb) else {
            return Some(kb);
        };
        let successors = self.satisfy(kb.clone(), &clause.body, &mut binding.clone());
        for next in successors {
            if next.len() > kb.len() {
                if let Some(model) = self.run(next) {
                    return Some(model);
                }
            }
        }
        None
    }

    fn first_violation(&self, kb: &KnowledgeBase) -> Option<(&Clause, Binding)> {
        let index = Index::new(kb);
        self.clauses.iter().find_map(|c| {
            index
                .clause_violations(c)
                .into_iter()
                .min()
                .map(|b| (c, b))
        })
    }

    fn holds(kb: &KnowledgeBase, f: &Formula, b: &mut Binding) -> bool {
        Index::new(kb).eval(f, b)
    }

    fn fresh(&self, kb: &KnowledgeBase) -> Vec<EntityId> {
        let unused = (1..=MAX_BOUND)
            .map(|i| format!("e{i}"))
            .filter(|n| !kb.contains_entity(n))
            .map(|n| EntityId::new(&n).expect("fresh names are identifiers"));
        if self.options.symmetry_breaking {
            unused.take(1).collect()
        } else {
            unused.collect()
        }
    }

    /// Extensions of `kb` that repair `f` under `b`, in preference order.
    /// `f` must be in negation normal form. A successor need not satisfy
    /// `f` outright; the caller re-checks every clause after each step.
    fn satisfy(&self, kb: KnowledgeBase, f: &Formula, b: &mut Binding) -> Vec<KnowledgeBase> {
        if kb.entity_count() > self.bound {
            return Vec::new();
        }
        if Self::holds(&kb, f, b) {
            return vec![kb];
        }
        match f {
            Formula::Atom(a) => {
                let args: Vec<EntityId> = a
                    .args
                    .iter()
                    .map(|t| b.resolve(t).expect("clause bodies are closed under the binding"))
                    .collect();
                let mut next = kb;
                match next.assert_fact(&a.predicate, &args) {
                    Ok(_) if next.entity_count() <= self.bound => vec![next],
                    _ => Vec::new(),
                }
            }
            // Literals that adding facts cannot make true.
            Formula::Not(_) | Formula::Eq(..) => Vec::new(),
            Formula::And(fs) => self.fold(vec![kb], fs.iter().map(|g| (g, None)), b),
            Formula::Or(fs) => {
                let mut out = Vec::new();
                let mut seen = BTreeSet::new();
                for g in fs {
                    for t in self.satisfy(kb.clone(), g, b) {
                        if seen.insert(t.canonical_form()) {
                            out.push(t);
                        }
                    }
                }
                out
            }
            Formula::Exists(v, g) => {
                let mut candidates: Vec<EntityId> = kb.entities().cloned().collect();
                candidates.extend(self.fresh(&kb));
                let mut out = Vec::new();
                let mut seen = BTreeSet::new();
                for e in candidates {
                    let prev = b.insert(v, e.clone());
                    let states = self.satisfy(kb.clone(), g, b);
                    b.restore(v, prev);
                    for t in states {
                        let mentioned = if t.contains_entity(e.as_str()) {
                            vec![t]
                        } else {
                            self.mention(&t, &e)
                        };
                        for t in mentioned {
                            if seen.insert(t.canonical_form()) {
                                out.push(t);
                            }
                        }
                    }
                }
                out
            }
            Formula::Forall(v, g) => {
                let domain: Vec<EntityId> = kb.entities().cloned().collect();
                self.fold(vec![kb], domain.into_iter().map(|e| (g.as_ref(), Some((v.as_str(), e)))), b)
            }
            Formula::Implies(..) | Formula::ExistsUnique(..) => {
                unreachable!("bodies are normalised before the search")
            }
        }
    }

    /// Ways of bringing `e` into the domain of `kb` with one fact over the
    /// theory's predicates, whose other arguments are existing entities or
    /// further fresh names.
    fn mention(&self, kb: &KnowledgeBase, e: &EntityId) -> Vec<KnowledgeBase> {
        let mut out = Vec::new();
        for (p, arity) in self.vocabulary {
            let mut pool: Vec<EntityId> = kb.entities().cloned().collect();
            pool.push(e.clone());
            pool.extend(
                (1..=MAX_BOUND)
                    .map(|i| format!("e{i}"))
                    .filter(|n| n != e.as_str() && !kb.contains_entity(n))
                    .take(arity - 1)
                    .map(|n| EntityId::new(&n).expect("fresh names are identifiers")),
            );
            let total = pool.len().pow(*arity as u32);
            for mut code in 0..total {
                let mut args = Vec::with_capacity(*arity);
                for _ in 0..*arity {
                    args.push(pool[code % pool.len()].clone());
                    code /= pool.len();
                }
                if !args.contains(e) {
                    continue;
                }
                let mut next = kb.clone();
                if next.assert_fact(p, &args).is_ok() && next.entity_count() <= self.bound {
                    out.push(next);
                }
            }
        }
        out
    }

    /// Repairs each step in turn, threading every alternative through.
    fn fold<'f>(
        &self,
        mut states: Vec<KnowledgeBase>,
        steps: impl Iterator<Item = (&'f Formula, Option<(&'f str, EntityId)>)>,
        b: &mut Binding,
    ) -> Vec<KnowledgeBase> {
        for (g, bind) in steps {
            let prev = bind.as_ref().map(|(v, e)| (*v, b.insert(v, e.clone())));
            let mut next = Vec::new();
            let mut seen = BTreeSet::new();
            for s in states {
                for t in self.satisfy(s, g, b) {
                    if seen.insert(t.canonical_form()) {
                        next.push(t);
                    }
                }
            }
            if let Some((v, p)) = prev {
                b.restore(v, p);
            }
            states = next;
        }
        states
    }
}

/// Negation normal form with `∃!` expanded and `→` rewritten, so that
/// negation only meets atoms and equalities.
fn nnf(f: &Formula) -> Formula {
    fn go(f: &Formula, positive: bool) -> Formula {
        match (f, positive) {
            (Formula::Atom(_) | Formula::Eq(..), true) => f.clone(),
            (Formula::Atom(_) | Formula::Eq(..), false) => Formula::Not(Box::new(f.clone())),
            (Formula::Not(g), _) => go(g, !positive),
            (Formula::And(fs), true) | (Formula::Or(fs), false) => {
                Formula::And(fs.iter().map(|g| go(g, positive)).collect())
            }
            (Formula::Or(fs), true) | (Formula::And(fs), false) => {
                Formula::Or(fs.iter().map(|g| go(g, positive)).collect())
            }
            (Formula::Implies(a, c), true) => Formula::Or(vec![go(a, false), go(c, true)]),
            (Formula::Implies(a, c), false) => Formula::And(vec![go(a, true), go(c, false)]),
            (Formula::Forall(v, g), true) | (Formula::Exists(v, g), false) => {
                Formula::Forall(v.clone(), Box::new(go(g, positive)))
            }
            (Formula::Exists(v, g), true) | (Formula::Forall(v, g), false) => {
                Formula::Exists(v.clone(), Box::new(go(g, positive)))
            }
            (Formula::ExistsUnique(..), _) => unreachable!("expanded first"),
        }
    }
    go(&f.expand_unique(), true)
}

/// Parses ground facts written as a pattern without variables, e.g.
/// `Artifact(x1), Maker(s, x1)`.
pub fn parse_facts(text: &str) -> Result<Vec<Assertion>, crate::folk::PatternError> {
    let atoms = crate::folk::parse_pattern(text)?;
    let mut out = Vec::with_capacity(atoms.len());
    for a in atoms {
        let mut args = Vec::with_capacity(a.args.len());
        for t in a.args {
            match t {
                Term::Const(e) => args.push(e),
                Term::Var(v) => {
                    return Err(crate::folk::PatternError::Syntax {
                        offset: 0,
                        message: format!("required facts must be ground, found ?{v}"),
                    })
                }
            }
        }
        out.push(Assertion {
            predicate: a.predicate,
            args,
            instance_id: None,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folk::{atom, eval_naive, exists, falsum, forall, implies};
    use crate::vocab::{axiom_by_id, axiom_catalog, CatalogOptions, Profile};

    fn fact(p: &str, args: &[&str]) -> Assertion {
        Assertion {
            predicate: p.to_string(),
            args: args.iter().map(|a| EntityId::new(a).unwrap()).collect(),
            instance_id: None,
        }
    }

    fn ax(id: &str) -> NamedAxiom {
        axiom_by_id(id, CatalogOptions::default()).unwrap()
    }

    #[test]
    fn empty_theory() {
        let r = find_model(&[], 0, &[]).unwrap();
        assert!(r.is_satisfiable());
        assert!(r.witness.unwrap().is_empty());
        assert_eq!(minimal_model_size(&[], &[], 5).unwrap(), Some(0));
    }

    #[test]
    fn bound_checked() {
        assert_eq!(
            find_model(&[], 13, &[]).unwrap_err(),
            ModelError::BoundTooLarge(13)
        );
    }

    #[test]
    fn contradiction_with_irreflexivity() {
        let r = find_model(&[ax("C1")], 3, &[fact("consists_of", &["a", "a"])]).unwrap();
        assert_eq!(r.verdict, Verdict::UnsatisfiableUpToBound);
        assert_eq!(r.bound, 3);
        assert!(r.witness.is_none());
    }

    #[test]
    fn a4_needs_a_kind() {
        let axioms: Vec<_> = ["A1", "A2", "A3", "A4"].map(ax).into();
        let r = find_model(&axioms, 4, &[fact("Artifact", &["x1"])]).unwrap();
        let w = r.witness.unwrap();
        for a in &axioms {
            assert!(eval_naive(&w, &a.formula, &Binding::new()).unwrap(), "{}", a.id);
        }
        assert!(w.tuples("is-instance-of").any(|t| t[0].as_str() == "x1"));
    }

    #[test]
    fn fresh_entities_when_reuse_is_forbidden() {
        // P(x) → ∃y Q(x,y), with Q irreflexive: needs two entities.
        let sig = Arc::new(
            Signature::new([
                crate::kb::PredicateSig::unary("P"),
                crate::kb::PredicateSig::binary("Q"),
            ])
            .unwrap(),
        );
        struct C(Formula);
        impl Constraint for C {
            fn id(&self) -> &str {
                "c"
            }
            fn formula(&self) -> &Formula {
                &self.0
            }
        }
        let theory = [
            C(forall(&["x"], implies(atom("P", &["x"]), exists(&["y"], atom("Q", &["x", "y"]))))),
            C(forall(&["x"], implies(atom("Q", &["x", "x"]), falsum()))),
        ];
        let r = find_model_with(sig, &theory, 4, &[fact("P", &["a"])], SearchOptions::default()).unwrap();
        assert_eq!(r.bound, 2);
        let w = r.witness.unwrap();
        assert!(w.contains("Q", &[EntityId::new("a").unwrap(), EntityId::new("e1").unwrap()]));
    }

    #[test]
    fn artifact_profile_minimum_is_the_required_entity() {
        let axioms = axiom_catalog(&[Profile::Artifact].into());
        assert_eq!(
            minimal_model_size(&axioms, &[fact("Artifact", &["x1"])], 12).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn parse_required_facts() {
        let f = parse_facts("Artifact(x1), Maker(s, x1)").unwrap();
        assert_eq!(f[1], fact("Maker", &["s", "x1"]));
        assert!(parse_facts("Artifact(?x)").is_err());
    }
}
