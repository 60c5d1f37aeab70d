//! Index-driven evaluator producing violation witnesses.
//!
//! Candidate bindings come from per-predicate, per-position indices: a
//! guard is evaluated as a join, and a quantifier whose body contains a
//! positive atom over the bound variable only visits the values that atom
//! admits. Only quantifiers without such an anchor fall back to the whole
//! domain.

use std::collections::{BTreeSet, HashMap};

use super::formula::{Atom, Binding, Formula, Term};
use super::naive::{check_evaluable, EvalError};
use super::shape::{constraint_clauses, Clause, ShapeError};
use crate::kb::{EntityId, KnowledgeBase};

/// Something with an identifier and a closed constraint-shaped formula.
pub trait Constraint {
    fn id(&self) -> &str;
    fn formula(&self) -> &Formula;
}

/// A binding of a clause's outer variables that satisfies its guard but
/// falsifies its body.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Witness {
    pub axiom_id: String,
    pub binding: Binding,
    /// Index of the clause within the axiom (0 for single-clause axioms).
    pub clause: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ViolationError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Every witness of `axiom` in `kb`, sorted by binding.
pub fn find_violations<C: Constraint + ?Sized>(
    kb: &KnowledgeBase,
    axiom: &C,
) -> Result<Vec<Witness>, ViolationError> {
    let clauses = constraint_clauses(axiom.formula())?;
    check_evaluable(kb, axiom.formula(), &Binding::new())?;
    let index = Index::new(kb);
    let mut out = Vec::new();
    for (i, clause) in clauses.iter().enumerate() {
        for binding in index.clause_violations(clause) {
            out.push(Witness {
                axiom_id: axiom.id().to_string(),
                binding,
                clause: i,
            });
        }
    }
    out.sort_by(|a, b| (&a.binding, a.clause).cmp(&(&b.binding, b.clause)));
    Ok(out)
}

/// Per-position lookup tables over a knowledge base.
pub struct Index<'a> {
    kb: &'a KnowledgeBase,
    domain: Vec<EntityId>,
    by_position: HashMap<(&'a str, usize, &'a EntityId), Vec<&'a [EntityId]>>,
}

impl<'a> Index<'a> {
    pub fn new(kb: &'a KnowledgeBase) -> Self {
        let mut by_position: HashMap<_, Vec<&[EntityId]>> = HashMap::new();
        for (predicate, args) in kb.facts() {
            for (i, e) in args.iter().enumerate() {
                by_position.entry((predicate, i, e)).or_default().push(args);
            }
        }
        Index {
            kb,
            domain: kb.entities().cloned().collect(),
            by_position,
        }
    }

    pub fn kb(&self) -> &'a KnowledgeBase {
        self.kb
    }

    /// Bindings of the outer variables that pass the guard and fail the body.
    pub fn clause_violations(&self, clause: &Clause) -> Vec<Binding> {
        let mut candidates = BTreeSet::new();
        for conjunct in &clause.guard {
            for partial in self.join(conjunct, Binding::new()) {
                self.complete(&clause.vars, partial, &mut candidates);
            }
        }
        candidates
            .into_iter()
            .filter(|b| {
                let mut b = b.clone();
                !self.eval(&clause.body, &mut b)
            })
            .collect()
    }

    // Extends `partial` over the outer variables the guard left unbound.
    fn complete(&self, vars: &[String], partial: Binding, out: &mut BTreeSet<Binding>) {
        match vars.iter().find(|v| partial.get(v).is_none()) {
            None => {
                out.insert(partial);
            }
            Some(v) => {
                for e in &self.domain {
                    let mut next = partial.clone();
                    next.insert(v, e.clone());
                    self.complete(vars, next, out);
                }
            }
        }
    }

    /// All extensions of `binding` satisfying every atom in `atoms`.
    pub fn join(&self, atoms: &[Atom], binding: Binding) -> Vec<Binding> {
        let mut results = Vec::new();
        let mut pending: Vec<&Atom> = atoms.iter().collect();
        self.join_rec(&mut pending, binding, &mut results);
        results
    }

    fn join_rec(&self, pending: &mut Vec<&Atom>, binding: Binding, out: &mut Vec<Binding>) {
        if pending.is_empty() {
            out.push(binding);
            return;
        }
        // most constrained atom first
        let pos = (0..pending.len())
            .max_by_key(|&i| {
                let a = pending[i];
                let bound = a
                    .args
                    .iter()
                    .filter(|t| matches!(t, Term::Const(_)) || t.as_var().is_some_and(|v| binding.get(v).is_some()))
                    .count();
                (bound, std::cmp::Reverse(i))
            })
            .expect("non-empty");
        let atom = pending.remove(pos);
        for ext in self.matches(atom, &binding) {
            self.join_rec(pending, ext, out);
        }
        pending.insert(pos, atom);
    }

    /// Extensions of `binding` under which `atom` holds.
    pub fn matches(&self, atom: &Atom, binding: &Binding) -> Vec<Binding> {
        let resolved: Vec<Option<EntityId>> = atom.args.iter().map(|t| binding.resolve(t)).collect();
        let tuples: Vec<&[EntityId]> = {
            let shortest = resolved
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.as_ref().map(|e| (i, e)))
                .map(|(i, e)| {
                    self.by_position
                        .get(&(atom.predicate.as_str(), i, e))
                        .map_or(&[][..], Vec::as_slice)
                })
                .min_by_key(|l| l.len());
            match shortest {
                Some(list) => list.to_vec(),
                None => self.kb.tuples(&atom.predicate).collect(),
            }
        };
        let mut out = Vec::new();
        'tuples: for tuple in tuples {
            let mut ext = binding.clone();
            for (i, term) in atom.args.iter().enumerate() {
                match (&resolved[i], term) {
                    (Some(e), _) => {
                        if tuple[i] != *e {
                            continue 'tuples;
                        }
                    }
                    (None, Term::Var(v)) => match ext.get(v) {
                        Some(e) if *e != tuple[i] => continue 'tuples,
                        Some(_) => {}
                        None => {
                            ext.insert(v, tuple[i].clone());
                        }
                    },
                    (None, Term::Const(_)) => unreachable!("constants always resolve"),
                }
            }
            out.push(ext);
        }
        out
    }

    /// Evaluates a formula whose free variables are bound in `b`.
    pub fn eval(&self, f: &Formula, b: &mut Binding) -> bool {
        match f {
            Formula::Atom(a) => {
                let args: Vec<EntityId> = a
                    .args
                    .iter()
                    .map(|t| b.resolve(t).expect("bound"))
                    .collect();
                self.kb.contains(&a.predicate, &args)
            }
            Formula::Eq(x, y) => b.resolve(x) == b.resolve(y),
            Formula::Not(g) => !self.eval(g, b),
            Formula::And(gs) => gs.iter().all(|g| self.eval(g, b)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval(g, b)),
            Formula::Implies(g, h) => !self.eval(g, b) || self.eval(h, b),
            Formula::Exists(v, g) => self
                .candidates(v, anchor(v, g), b)
                .iter()
                .any(|e| self.with(v, e, g, b)),
            Formula::ExistsUnique(v, g) => {
                let mut found = 0;
                for e in self.candidates(v, anchor(v, g), b) {
                    if self.with(v, &e, g, b) {
                        found += 1;
                        if found > 1 {
                            return false;
                        }
                    }
                }
                found == 1
            }
            Formula::Forall(v, g) => {
                let guard = match g.as_ref() {
                    Formula::Implies(a, _) => anchor(v, a),
                    _ => None,
                };
                self.candidates(v, guard, b)
                    .iter()
                    .all(|e| self.with(v, e, g, b))
            }
        }
    }

    fn candidates(&self, var: &str, anchor: Option<&Atom>, b: &mut Binding) -> Vec<EntityId> {
        let Some(atom) = anchor else {
            return self.domain.clone();
        };
        let shadowed = b.remove(var);
        let values: BTreeSet<EntityId> = self
            .matches(atom, b)
            .into_iter()
            .filter_map(|ext| ext.get(var).cloned())
            .collect();
        b.restore(var, shadowed);
        values.into_iter().collect()
    }

    fn with(&self, var: &str, value: &EntityId, f: &Formula, b: &mut Binding) -> bool {
        let previous = b.insert(var, value.clone());
        let result = self.eval(f, b);
        b.restore(var, previous);
        result
    }
}

// A positive atom mentioning `var` among the top-level conjuncts of `f`.
// Any value satisfying `f` must satisfy that atom.
fn anchor<'f>(var: &str, f: &'f Formula) -> Option<&'f Atom> {
    match f {
        Formula::Atom(a) if a.vars().any(|v| v == var) => Some(a),
        Formula::And(gs) => gs.iter().find_map(|g| anchor(var, g)),
        _ => None,
    }
}
