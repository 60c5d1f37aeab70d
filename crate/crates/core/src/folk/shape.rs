//! Constraint shape: `∀v1…vk (guard → body)` with a positive guard.
//!
//! The guard may be any `∧`/`∨` combination of atoms; it is normalised to
//! disjunctive form so that candidate bindings can be generated from the
//! predicate indices. A closed `∧` of such clauses is also accepted and
//! yields one clause per conjunct. A matrix without `→` is an empty-guard
//! clause, which enumerates every binding of the outer variables.

use thiserror::Error;

use super::formula::{Atom, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("not constraint-shaped: {0}")]
    NotConstraintShape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    /// Outer universal variables in quantifier order.
    pub vars: Vec<String>,
    /// Guard in disjunctive normal form; `[[]]` is the empty guard.
    pub guard: Vec<Vec<Atom>>,
    pub body: Formula,
}

impl Clause {
    /// `guard → body` as a formula over the outer variables.
    pub fn matrix(&self) -> Formula {
        let guard = Formula::Or(
            self.guard
                .iter()
                .map(|c| Formula::And(c.iter().cloned().map(Formula::Atom).collect()))
                .collect(),
        );
        Formula::Implies(Box::new(guard), Box::new(self.body.clone()))
    }
}

pub fn constraint_clauses(f: &Formula) -> Result<Vec<Clause>, ShapeError> {
    let free = f.free_vars();
    if !free.is_empty() {
        let names: Vec<_> = free.into_iter().collect();
        return Err(ShapeError::NotConstraintShape(format!(
            "free variables {}",
            names.join(", ")
        )));
    }
    let mut out = Vec::new();
    collect(f, &mut out)?;
    Ok(out)
}

fn collect(f: &Formula, out: &mut Vec<Clause>) -> Result<(), ShapeError> {
    match f {
        Formula::And(fs) => fs.iter().try_for_each(|g| collect(g, out)),
        Formula::Forall(..) => {
            let mut vars = Vec::new();
            let mut matrix = f;
            while let Formula::Forall(v, g) = matrix {
                if vars.contains(v) {
                    return Err(ShapeError::NotConstraintShape(format!(
                        "variable `{v}` quantified twice in the prefix"
                    )));
                }
                vars.push(v.clone());
                matrix = g;
            }
            let clause = match matrix {
                Formula::Implies(guard, body) => Clause {
                    vars,
                    guard: dnf(guard).ok_or_else(|| {
                        ShapeError::NotConstraintShape(format!("guard `{guard}` is not positive"))
                    })?,
                    body: (**body).clone(),
                },
                other => Clause {
                    vars,
                    guard: vec![Vec::new()],
                    body: other.clone(),
                },
            };
            out.push(clause);
            Ok(())
        }
        other => Err(ShapeError::NotConstraintShape(format!(
            "expected a universal constraint, found `{other}`"
        ))),
    }
}

fn dnf(f: &Formula) -> Option<Vec<Vec<Atom>>> {
    match f {
        Formula::Atom(a) => Some(vec![vec![a.clone()]]),
        Formula::Or(fs) => {
            let mut out = Vec::new();
            for g in fs {
                out.extend(dnf(g)?);
            }
            Some(out)
        }
        Formula::And(fs) => {
            let mut acc: Vec<Vec<Atom>> = vec![Vec::new()];
            for g in fs {
                let parts = dnf(g)?;
                let mut next = Vec::with_capacity(acc.len() * parts.len());
                for a in &acc {
                    for p in &parts {
                        let mut c = a.clone();
                        c.extend(p.iter().cloned());
                        next.push(c);
                    }
                }
                acc = next;
            }
            Some(acc)
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folk::formula::*;

    #[test]
    fn single_guarded_clause() {
        let f = forall(
            &["x", "y"],
            implies(atom("consists_of", &["x", "y"]), not(atom("consists_of", &["y", "x"]))),
        );
        let cs = constraint_clauses(&f).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].vars, ["x", "y"]);
        assert_eq!(cs[0].guard.len(), 1);
    }

    #[test]
    fn disjunctive_guard_splits() {
        let f = forall(
            &["x"],
            implies(
                or(vec![atom("MOB", &["x"]), atom("Fluid", &["x"]), atom("Gas", &["x"])]),
                atom("MatE", &["x"]),
            ),
        );
        let cs = constraint_clauses(&f).unwrap();
        assert_eq!(cs[0].guard.len(), 3);
    }

    #[test]
    fn conjunction_of_clauses() {
        let c = |p: &str| forall(&["x"], implies(atom(p, &["x"]), atom("Q", &["x"])));
        let cs = constraint_clauses(&and(vec![c("A"), c("B")])).unwrap();
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn rejects_non_universal_and_negative_guards() {
        assert!(constraint_clauses(&exists(&["x"], atom("P", &["x"]))).is_err());
        let neg = forall(&["x"], implies(not(atom("P", &["x"])), atom("Q", &["x"])));
        assert!(constraint_clauses(&neg).is_err());
        assert!(constraint_clauses(&atom("P", &["x"])).is_err());
    }

    #[test]
    fn empty_guard_allowed() {
        let cs = constraint_clauses(&forall(&["x"], atom("P", &["x"]))).unwrap();
        assert_eq!(cs[0].guard, vec![Vec::<Atom>::new()]);
    }
}
