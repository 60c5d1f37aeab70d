//! Reference evaluator: Tarskian satisfaction by structural recursion.
//!
//! Quantifiers range over every entity of the knowledge base. Nothing is
//! indexed or cached; this is the ground truth the indexed evaluator is
//! tested against.

use thiserror::Error;

use super::formula::{Binding, Formula, Term};
use crate::kb::{EntityId, KnowledgeBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("`{predicate}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        got: usize,
    },
}

pub(crate) fn check_evaluable(
    kb: &KnowledgeBase,
    f: &Formula,
    b: &Binding,
) -> Result<(), EvalError> {
    if let Some(v) = f.free_vars().into_iter().find(|v| b.get(v).is_none()) {
        return Err(EvalError::UnboundVariable(v));
    }
    let mut err = None;
    f.visit_atoms(&mut |a| {
        if err.is_some() {
            return;
        }
        match kb.signature().get(&a.predicate) {
            None => err = Some(EvalError::UnknownPredicate(a.predicate.clone())),
            Some(sig) if sig.arity() != a.args.len() => {
                err = Some(EvalError::ArityMismatch {
                    predicate: a.predicate.clone(),
                    expected: sig.arity(),
                    got: a.args.len(),
                })
            }
            Some(_) => {}
        }
    });
    err.map_or(Ok(()), Err)
}

/// Truth value of `f` in `kb` under `b`.
pub fn eval_naive(kb: &KnowledgeBase, f: &Formula, b: &Binding) -> Result<bool, EvalError> {
    check_evaluable(kb, f, b)?;
    let domain: Vec<EntityId> = kb.entities().cloned().collect();
    let mut binding = b.clone();
    Ok(Naive { kb, domain: &domain }.eval(f, &mut binding))
}

struct Naive<'a> {
    kb: &'a KnowledgeBase,
    domain: &'a [EntityId],
}

impl Naive<'_> {
    fn term(&self, t: &Term, b: &Binding) -> EntityId {
        b.resolve(t).expect("free variables checked before evaluation")
    }

    fn eval(&self, f: &Formula, b: &mut Binding) -> bool {
        match f {
            Formula::Atom(a) => {
                let args: Vec<EntityId> = a.args.iter().map(|t| self.term(t, b)).collect();
                self.kb.contains(&a.predicate, &args)
            }
            Formula::Eq(x, y) => self.term(x, b) == self.term(y, b),
            Formula::Not(g) => !self.eval(g, b),
            Formula::And(gs) => gs.iter().all(|g| self.eval(g, b)),
            Formula::Or(gs) => gs.iter().any(|g| self.eval(g, b)),
            Formula::Implies(g, h) => !self.eval(g, b) || self.eval(h, b),
            Formula::Forall(v, g) => self.domain.iter().all(|e| self.with(v, e, g, b)),
            Formula::Exists(v, g) => self.domain.iter().any(|e| self.with(v, e, g, b)),
            Formula::ExistsUnique(v, g) => {
                let mut count = 0;
                for e in self.domain {
                    if self.with(v, e, g, b) {
                        count += 1;
                    }
                }
                count == 1
            }
        }
    }

    fn with(&self, var: &str, value: &EntityId, f: &Formula, b: &mut Binding) -> bool {
        let previous = b.insert(var, value.clone());
        let result = self.eval(f, b);
        b.restore(var, previous);
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folk::formula::*;
    use crate::kb::PredicateSig;

    fn kb() -> KnowledgeBase {
        KnowledgeBase::with_predicates(vec![
            PredicateSig::unary("P"),
            PredicateSig::unary("Artifact"),
            PredicateSig::unary("MOB"),
            PredicateSig::unary("Fluid"),
            PredicateSig::unary("Gas"),
            PredicateSig::unary("MatE"),
        ])
        .unwrap()
    }

    #[test]
    fn tautology_holds() {
        let mut k = kb();
        k.assert_str("P", &["a"]).unwrap();
        let f = forall(&["x"], implies(atom("P", &["x"]), atom("P", &["x"])));
        assert!(eval_naive(&k, &f, &Binding::new()).unwrap());
        assert!(eval_naive(&kb(), &f, &Binding::new()).unwrap());
    }

    #[test]
    fn empty_domain_has_no_witness() {
        let f = exists(&["x"], atom("Artifact", &["x"]));
        assert!(!eval_naive(&kb(), &f, &Binding::new()).unwrap());
    }

    #[test]
    fn material_entity_cover_fails_on_fluid() {
        let mut k = kb();
        k.assert_str("MOB", &["a"]).unwrap();
        k.assert_str("Fluid", &["b"]).unwrap();
        k.assert_str("MatE", &["a"]).unwrap();
        let body = implies(
            or(vec![atom("MOB", &["x"]), atom("Fluid", &["x"]), atom("Gas", &["x"])]),
            atom("MatE", &["x"]),
        );
        let f = forall(&["x"], body.clone());
        assert!(!eval_naive(&k, &f, &Binding::new()).unwrap());

        let at = |name: &str| -> Binding {
            [("x".to_string(), EntityId::new(name).unwrap())].into_iter().collect()
        };
        assert!(!eval_naive(&k, &body, &at("b")).unwrap());
        assert!(eval_naive(&k, &body, &at("a")).unwrap());
    }

    #[test]
    fn errors_are_reported_up_front() {
        let k = kb();
        assert_eq!(
            eval_naive(&k, &atom("P", &["x"]), &Binding::new()),
            Err(EvalError::UnboundVariable("x".into()))
        );
        // the unknown predicate sits behind a short-circuit
        let f = or(vec![and(vec![]), exists(&["x"], atom("Q", &["x"]))]);
        assert_eq!(
            eval_naive(&k, &f, &Binding::new()),
            Err(EvalError::UnknownPredicate("Q".into()))
        );
    }

    #[test]
    fn exists_unique_counts_exactly_one() {
        let mut k = kb();
        k.assert_str("P", &["a"]).unwrap();
        let f = exists_unique("x", atom("P", &["x"]));
        assert!(eval_naive(&k, &f, &Binding::new()).unwrap());
        k.assert_str("P", &["b"]).unwrap();
        assert!(!eval_naive(&k, &f, &Binding::new()).unwrap());
    }
}
