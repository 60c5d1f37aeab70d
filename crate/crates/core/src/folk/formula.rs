use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::kb::{EntityId, Signature};

/// Argument of an atom: a variable or a fixed entity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(EntityId),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, args: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.to_string(),
            args,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> + '_ {
        self.args.iter().filter_map(Term::as_var)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, t) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

/// First-order formula over a knowledge-base signature.
///
/// `And(vec![])` is truth and `Or(vec![])` is falsity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(String, Box<Formula>),
    Exists(String, Box<Formula>),
    ExistsUnique(String, Box<Formula>),
    Eq(Term, Term),
}

/// Atom with variable arguments only.
pub fn atom(predicate: &str, vars: &[&str]) -> Formula {
    Formula::Atom(Atom::new(predicate, vars.iter().map(|v| Term::var(v)).collect()))
}

pub fn not(f: Formula) -> Formula {
    Formula::Not(Box::new(f))
}

pub fn and(fs: Vec<Formula>) -> Formula {
    Formula::And(fs)
}

pub fn or(fs: Vec<Formula>) -> Formula {
    Formula::Or(fs)
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Formula::Implies(Box::new(a), Box::new(b))
}

/// `a ↔ b`, expanded to two implications.
pub fn iff(a: Formula, b: Formula) -> Formula {
    and(vec![implies(a.clone(), b.clone()), implies(b, a)])
}

pub fn eq(a: &str, b: &str) -> Formula {
    Formula::Eq(Term::var(a), Term::var(b))
}

pub fn falsum() -> Formula {
    Formula::Or(Vec::new())
}

pub fn forall(vars: &[&str], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |f, v| Formula::Forall(v.to_string(), Box::new(f)))
}

pub fn exists(vars: &[&str], body: Formula) -> Formula {
    vars.iter()
        .rev()
        .fold(body, |f, v| Formula::Exists(v.to_string(), Box::new(f)))
}

pub fn exists_unique(var: &str, body: Formula) -> Formula {
    Formula::ExistsUnique(var.to_string(), Box::new(body))
}

impl Formula {
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.to_string());
                    }
                }
            }
            Formula::Eq(a, b) => {
                for v in [a, b].into_iter().filter_map(Term::as_var) {
                    if !bound.iter().any(|b| b == v) {
                        out.insert(v.to_string());
                    }
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(v, f) | Formula::Exists(v, f) | Formula::ExistsUnique(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Predicate names occurring anywhere in the formula.
    pub fn predicates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| {
            out.insert(a.predicate.clone());
        });
        out
    }

    pub fn visit_atoms(&self, visit: &mut impl FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => visit(a),
            Formula::Eq(..) => {}
            Formula::Not(f)
            | Formula::Forall(_, f)
            | Formula::Exists(_, f)
            | Formula::ExistsUnique(_, f) => f.visit_atoms(visit),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.visit_atoms(visit)),
            Formula::Implies(a, b) => {
                a.visit_atoms(visit);
                b.visit_atoms(visit);
            }
        }
    }

    /// Replaces free occurrences of `var` with `term`.
    ///
    /// `term` must not be captured by a binder inside `self`; callers pass
    /// fresh variables or constants.
    pub fn substitute(&self, var: &str, term: &Term) -> Formula {
        let sub = |t: &Term| match t {
            Term::Var(v) if v == var => term.clone(),
            other => other.clone(),
        };
        match self {
            Formula::Atom(a) => Formula::Atom(Atom {
                predicate: a.predicate.clone(),
                args: a.args.iter().map(sub).collect(),
            }),
            Formula::Eq(a, b) => Formula::Eq(sub(a), sub(b)),
            Formula::Not(f) => not(f.substitute(var, term)),
            Formula::And(fs) => and(fs.iter().map(|f| f.substitute(var, term)).collect()),
            Formula::Or(fs) => or(fs.iter().map(|f| f.substitute(var, term)).collect()),
            Formula::Implies(a, b) => implies(a.substitute(var, term), b.substitute(var, term)),
            Formula::Forall(v, _) | Formula::Exists(v, _) | Formula::ExistsUnique(v, _)
                if v == var =>
            {
                self.clone()
            }
            Formula::Forall(v, f) => Formula::Forall(v.clone(), Box::new(f.substitute(var, term))),
            Formula::Exists(v, f) => Formula::Exists(v.clone(), Box::new(f.substitute(var, term))),
            Formula::ExistsUnique(v, f) => {
                Formula::ExistsUnique(v.clone(), Box::new(f.substitute(var, term)))
            }
        }
    }

    /// Rewrites every `∃!v φ` as `∃v (φ ∧ ∀u (φ[v:=u] → u = v))`.
    pub fn expand_unique(&self) -> Formula {
        let mut counter = 0usize;
        self.expand_unique_with(&mut counter)
    }

    fn expand_unique_with(&self, counter: &mut usize) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Eq(..) => self.clone(),
            Formula::Not(f) => not(f.expand_unique_with(counter)),
            Formula::And(fs) => and(fs.iter().map(|f| f.expand_unique_with(counter)).collect()),
            Formula::Or(fs) => or(fs.iter().map(|f| f.expand_unique_with(counter)).collect()),
            Formula::Implies(a, b) => {
                implies(a.expand_unique_with(counter), b.expand_unique_with(counter))
            }
            Formula::Forall(v, f) => Formula::Forall(v.clone(), Box::new(f.expand_unique_with(counter))),
            Formula::Exists(v, f) => Formula::Exists(v.clone(), Box::new(f.expand_unique_with(counter))),
            Formula::ExistsUnique(v, f) => {
                let body = f.expand_unique_with(counter);
                let taken = body.all_var_names();
                let other = loop {
                    *counter += 1;
                    let candidate = format!("{v}'{counter}");
                    if !taken.contains(&candidate) {
                        break candidate;
                    }
                };
                let renamed = body.substitute(v, &Term::Var(other.clone()));
                Formula::Exists(
                    v.clone(),
                    Box::new(and(vec![
                        body,
                        Formula::Forall(
                            other.clone(),
                            Box::new(implies(renamed, Formula::Eq(Term::Var(other), Term::var(v)))),
                        ),
                    ])),
                )
            }
        }
    }

    fn all_var_names(&self) -> BTreeSet<String> {
        let mut out = self.free_vars();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Forall(v, g) | Formula::Exists(v, g) | Formula::ExistsUnique(v, g) => {
                    out.insert(v.clone());
                    stack.push(g);
                }
                Formula::Not(g) => stack.push(g),
                Formula::And(gs) | Formula::Or(gs) => stack.extend(gs.iter()),
                Formula::Implies(a, b) => {
                    stack.push(a);
                    stack.push(b);
                }
                Formula::Atom(_) | Formula::Eq(..) => {}
            }
        }
        out
    }
}

// Binding strength used by the pretty printer: quantifiers and → bind
// loosest, then ∨, ∧, ¬.
fn precedence(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) | Formula::ExistsUnique(..) => 0,
        Formula::Implies(..) => 1,
        Formula::Or(fs) if fs.len() >= 2 => 2,
        Formula::And(fs) if fs.len() >= 2 => 3,
        _ => 4,
    }
}

fn write_prec(f: &Formula, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if precedence(f) < min {
        write!(out, "({f})")
    } else {
        write!(out, "{f}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Eq(a, b) => write!(f, "{a} = {b}"),
            Formula::Not(g) => match g.as_ref() {
                Formula::Eq(a, b) => write!(f, "{a} ≠ {b}"),
                _ => {
                    f.write_str("¬")?;
                    write_prec(g, 4, f)
                }
            },
            Formula::And(fs) if fs.is_empty() => f.write_str("⊤"),
            Formula::Or(fs) if fs.is_empty() => f.write_str("⊥"),
            Formula::And(fs) | Formula::Or(fs) if fs.len() == 1 => write!(f, "{}", fs[0]),
            Formula::And(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∧ ")?;
                    }
                    write_prec(g, 4, f)?;
                }
                Ok(())
            }
            Formula::Or(fs) => {
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∨ ")?;
                    }
                    write_prec(g, 3, f)?;
                }
                Ok(())
            }
            Formula::Implies(a, b) => {
                write_prec(a, 2, f)?;
                f.write_str(" → ")?;
                match b.as_ref() {
                    Formula::Forall(..) | Formula::Exists(..) | Formula::ExistsUnique(..) => {
                        write!(f, "{b}")
                    }
                    _ => write_prec(b, 1, f),
                }
            }
            Formula::Forall(..) | Formula::Exists(..) | Formula::ExistsUnique(..) => {
                // Collapse runs of the same quantifier: ∀xyz (…)
                let (symbol, mut vars, mut body) = match self {
                    Formula::Forall(v, b) => ("∀", vec![v.as_str()], b.as_ref()),
                    Formula::Exists(v, b) => ("∃", vec![v.as_str()], b.as_ref()),
                    Formula::ExistsUnique(v, b) => ("∃!", vec![v.as_str()], b.as_ref()),
                    _ => unreachable!(),
                };
                while let ("∀", Formula::Forall(v, b)) | ("∃", Formula::Exists(v, b)) = (symbol, body) {
                    vars.push(v);
                    body = b;
                }
                let sep = if vars.iter().all(|v| v.chars().count() == 1) { "" } else { " " };
                write!(f, "{symbol}{} ", vars.join(sep))?;
                match body {
                    Formula::Atom(_) | Formula::Not(_) => write!(f, "{body}"),
                    _ => write!(f, "({body})"),
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diagnostic {
    UnboundVariable(String),
    UnknownPredicate(String),
    ArityMismatch {
        predicate: String,
        expected: usize,
        got: usize,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::UnboundVariable(v) => write!(f, "unbound variable `{v}`"),
            Diagnostic::UnknownPredicate(p) => write!(f, "unknown predicate `{p}`"),
            Diagnostic::ArityMismatch {
                predicate,
                expected,
                got,
            } => write!(f, "`{predicate}` expects {expected} arguments, got {got}"),
        }
    }
}

/// Reports everything that would stop `f` from being evaluated as a
/// closed formula over `signature`. Empty means evaluable.
pub fn well_formed(f: &Formula, signature: &Signature) -> Vec<Diagnostic> {
    let mut out = BTreeSet::new();
    for v in f.free_vars() {
        out.insert(Diagnostic::UnboundVariable(v));
    }
    f.visit_atoms(&mut |a| match signature.get(&a.predicate) {
        None => {
            out.insert(Diagnostic::UnknownPredicate(a.predicate.clone()));
        }
        Some(sig) if sig.arity() != a.args.len() => {
            out.insert(Diagnostic::ArityMismatch {
                predicate: a.predicate.clone(),
                expected: sig.arity(),
                got: a.args.len(),
            });
        }
        Some(_) => {}
    });
    out.into_iter().collect()
}

/// Variable assignment used during evaluation.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binding(BTreeMap<String, EntityId>);

impl Binding {
    pub fn new() -> Self {
        Binding::default()
    }

    pub fn get(&self, var: &str) -> Option<&EntityId> {
        self.0.get(var)
    }

    pub fn insert(&mut self, var: &str, value: EntityId) -> Option<EntityId> {
        self.0.insert(var.to_string(), value)
    }

    pub fn remove(&mut self, var: &str) -> Option<EntityId> {
        self.0.remove(var)
    }

    /// Restores `var` to `previous` after a scoped insert.
    pub fn restore(&mut self, var: &str, previous: Option<EntityId>) {
        match previous {
            Some(p) => {
                self.0.insert(var.to_string(), p);
            }
            None => {
                self.0.remove(var);
            }
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &EntityId)> + '_ {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn resolve(&self, t: &Term) -> Option<EntityId> {
        match t {
            Term::Const(c) => Some(c.clone()),
            Term::Var(v) => self.0.get(v).cloned(),
        }
    }
}

impl FromIterator<(String, EntityId)> for Binding {
    fn from_iter<I: IntoIterator<Item = (String, EntityId)>>(iter: I) -> Self {
        Binding(iter.into_iter().collect())
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::PredicateSig;

    fn sig() -> Signature {
        Signature::new(vec![PredicateSig::unary("P"), PredicateSig::binary("R")]).unwrap()
    }

    #[test]
    fn unbound_variable_reported() {
        assert_eq!(
            well_formed(&atom("P", &["x"]), &sig()),
            vec![Diagnostic::UnboundVariable("x".into())]
        );
    }

    #[test]
    fn unknown_predicate_reported() {
        let s = Signature::new(vec![]).unwrap();
        assert_eq!(
            well_formed(&forall(&["x"], atom("P", &["x"])), &s),
            vec![Diagnostic::UnknownPredicate("P".into())]
        );
    }

    #[test]
    fn arity_mismatch_reported() {
        let f = forall(&["x"], atom("R", &["x"]));
        assert_eq!(
            well_formed(&f, &sig()),
            vec![Diagnostic::ArityMismatch {
                predicate: "R".into(),
                expected: 2,
                got: 1
            }]
        );
    }

    #[test]
    fn pretty_prints_in_logical_notation() {
        let m1 = forall(
            &["x"],
            implies(
                or(vec![atom("MOB", &["x"]), atom("Fluid", &["x"]), atom("Gas", &["x"])]),
                atom("MatE", &["x"]),
            ),
        );
        assert_eq!(m1.to_string(), "∀x (MOB(x) ∨ Fluid(x) ∨ Gas(x) → MatE(x))");

        let m6 = forall(
            &["x", "y", "z"],
            implies(
                and(vec![atom("MOB", &["x"]), atom("mbd", &["y", "x"]), atom("mpart", &["z", "y"])]),
                atom("mbd", &["z", "x"]),
            ),
        );
        assert_eq!(m6.to_string(), "∀xyz (MOB(x) ∧ mbd(y,x) ∧ mpart(z,y) → mbd(z,x))");

        let c1 = forall(&["x"], implies(atom("consists_of", &["x", "x"]), falsum()));
        assert_eq!(c1.to_string(), "∀x (consists_of(x,x) → ⊥)");

        let u = exists_unique("K", and(vec![atom("P", &["K"]), not(eq("K", "x"))]));
        assert_eq!(u.to_string(), "∃!K (P(K) ∧ K ≠ x)");
    }

    #[test]
    fn expand_unique_avoids_capture() {
        let f = exists_unique("u", atom("R", &["u", "u'1"]));
        let g = f.expand_unique();
        assert_eq!(g.free_vars(), ["u'1".to_string()].into_iter().collect());
    }
}
