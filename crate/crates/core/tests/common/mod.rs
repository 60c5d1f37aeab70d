//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use gfoart_core::folk::{
    and, atom, constraint_clauses, eq, eval_naive, exists, exists_unique, falsum, forall, implies,
    not, or, Binding, Constraint, Formula,
};
use gfoart_core::kb::{Assertion, EntityId, KnowledgeBase, PredicateSig, Signature};
use gfoart_core::vocab::{axiom_catalog, gfo_kb, NamedAxiom, Profile, VOCABULARY};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn id(name: &str) -> EntityId {
    EntityId::new(name).unwrap()
}

pub fn fact(p: &str, args: &[&str]) -> Assertion {
    Assertion {
        predicate: p.to_string(),
        args: args.iter().map(|a| id(a)).collect(),
        instance_id: None,
    }
}

pub fn full_catalog() -> Vec<NamedAxiom> {
    axiom_catalog(&Profile::ALL.into())
}

/// Predicates mentioned by some catalog axiom.
pub fn catalog_predicates() -> Vec<String> {
    let mut out = BTreeSet::new();
    for a in full_catalog() {
        out.extend(a.formula.predicates());
    }
    out.into_iter().collect()
}

/// A random GFO knowledge base with at most `max_entities` entities.
/// Most facts use predicates some axiom mentions so that guards fire.
pub fn random_gfo_kb(rng: &mut impl Rng, max_entities: usize) -> KnowledgeBase {
    let relevant = catalog_predicates();
    let sig = gfoart_core::vocab::gfo_signature();
    let n = rng.gen_range(1..=max_entities);
    let pool: Vec<EntityId> = (0..n).map(|i| id(&format!("e{i}"))).collect();
    let mut kb = gfo_kb();
    let facts = rng.gen_range(0..=4 * n + 6);
    for _ in 0..facts {
        let p = if rng.gen_bool(0.85) {
            relevant.choose(rng).unwrap().as_str()
        } else {
            VOCABULARY.choose(rng).unwrap().name
        };
        let arity = sig.get(p).unwrap().arity();
        let args: Vec<EntityId> = (0..arity).map(|_| pool.choose(rng).unwrap().clone()).collect();
        kb.assert_fact(p, &args).unwrap();
    }
    kb
}

/// A random knowledge base over any signature using its declared
/// predicates, with entities drawn from `e0..e{n-1}`.
pub fn random_kb_over(rng: &mut impl Rng, sig: &Arc<Signature>, max_entities: usize, max_facts: usize) -> KnowledgeBase {
    let n = rng.gen_range(1..=max_entities);
    let pool: Vec<EntityId> = (0..n).map(|i| id(&format!("e{i}"))).collect();
    let preds: Vec<&PredicateSig> = sig.iter().collect();
    let mut kb = KnowledgeBase::new(sig.clone());
    for _ in 0..rng.gen_range(0..=max_facts) {
        let p = preds.choose(rng).unwrap();
        let args: Vec<EntityId> = (0..p.arity()).map(|_| pool.choose(rng).unwrap().clone()).collect();
        kb.assert_fact(p.name(), &args).unwrap();
    }
    kb
}

/// Small signature for generated theories.
pub fn toy_signature() -> Arc<Signature> {
    Arc::new(
        Signature::new([
            PredicateSig::unary("P"),
            PredicateSig::unary("R"),
            PredicateSig::binary("Q"),
        ])
        .unwrap(),
    )
}

pub struct Toy {
    pub id: String,
    pub formula: Formula,
}

impl Constraint for Toy {
    fn id(&self) -> &str {
        &self.id
    }

    fn formula(&self) -> &Formula {
        &self.formula
    }
}

fn random_atom(rng: &mut impl Rng, vars: &[&str]) -> Formula {
    let v = |rng: &mut dyn rand::RngCore| *vars.choose(rng).unwrap();
    match rng.gen_range(0..3) {
        0 => atom("P", &[v(rng)]),
        1 => atom("R", &[v(rng)]),
        _ => atom("Q", &[v(rng), v(rng)]),
    }
}

const FRESH: [&str; 4] = ["u", "w", "z", "t"];

/// Random formula over `P/1`, `R/1`, `Q/2` whose free variables are
/// among `vars`.
pub fn random_formula(rng: &mut impl Rng, vars: &[&str], depth: u32) -> Formula {
    if depth == 0 {
        return random_atom(rng, vars);
    }
    match rng.gen_range(0..10) {
        0 | 1 => random_atom(rng, vars),
        2 => not(random_formula(rng, vars, depth - 1)),
        3 => and(vec![random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)]),
        4 => or(vec![random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)]),
        5 => implies(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)),
        6..=8 => {
            let v = FRESH[vars.len() % FRESH.len()];
            let mut inner: Vec<&str> = vars.to_vec();
            inner.push(v);
            let body = random_formula(rng, &inner, depth - 1);
            match rng.gen_range(0..3) {
                0 => exists(&[v], body),
                1 => exists_unique(v, body),
                _ => forall(&[v], body),
            }
        }
        _ => {
            if vars.len() >= 2 {
                eq(vars[0], vars[1])
            } else {
                falsum()
            }
        }
    }
}

/// Random constraint-shaped formula: `∀x (guard → body)` or
/// `∀xy (Q(x,y) ∧ … → body)`.
pub fn random_constraint(rng: &mut impl Rng) -> Formula {
    if rng.gen_bool(0.5) {
        let guard = if rng.gen_bool(0.5) {
            atom("P", &["x"])
        } else {
            or(vec![atom("P", &["x"]), atom("R", &["x"])])
        };
        forall(&["x"], implies(guard, random_formula(rng, &["x"], 2)))
    } else {
        let mut guard = vec![atom("Q", &["x", "y"])];
        if rng.gen_bool(0.4) {
            guard.push(random_atom(rng, &["x", "y"]));
        }
        forall(&["x", "y"], implies(and(guard), random_formula(rng, &["x", "y"], 2)))
    }
}

/// Every binding of each clause's outer variables over the whole domain
/// whose guard holds and body fails, found by exhaustive naive evaluation.
pub fn brute_force_witnesses(kb: &KnowledgeBase, f: &Formula) -> BTreeSet<(Binding, usize)> {
    let domain: Vec<EntityId> = kb.entities().cloned().collect();
    let mut out = BTreeSet::new();
    for (ci, clause) in constraint_clauses(f).unwrap().iter().enumerate() {
        let guard = or(clause
            .guard
            .iter()
            .map(|c| and(c.iter().cloned().map(Formula::Atom).collect()))
            .collect());
        let k = clause.vars.len();
        let total = domain.len().pow(k as u32);
        for mut code in 0..total {
            let mut b = Binding::new();
            for v in &clause.vars {
                b.insert(v, domain[code % domain.len()].clone());
                code /= domain.len();
            }
            if eval_naive(kb, &guard, &b).unwrap() && !eval_naive(kb, &clause.body, &b).unwrap() {
                out.insert((b, ci));
            }
        }
    }
    out
}

/// Least number of entities of a model of `theory` containing `seed`,
/// found by trying every subset of ground atoms over a growing entity
/// pool. Only predicates mentioned by the theory or the seed are used.
pub fn brute_force_min_model<C: Constraint>(
    sig: &Arc<Signature>,
    theory: &[C],
    seed: &[Assertion],
    max_entities: usize,
) -> Option<usize> {
    let mut preds = BTreeSet::new();
    for c in theory {
        preds.extend(c.formula().predicates());
    }
    preds.extend(seed.iter().map(|f| f.predicate.clone()));
    let mut seed_names: Vec<EntityId> = Vec::new();
    for f in seed {
        for a in &f.args {
            if !seed_names.contains(a) {
                seed_names.push(a.clone());
            }
        }
    }
    let mut best = None;
    for n in seed_names.len()..=max_entities {
        let mut pool = seed_names.clone();
        let mut i = 1;
        while pool.len() < n {
            let e = id(&format!("e{i}"));
            if !pool.contains(&e) {
                pool.push(e);
            }
            i += 1;
        }
        let mut ground: Vec<(String, Vec<EntityId>)> = Vec::new();
        for p in &preds {
            let arity = sig.get(p).unwrap().arity();
            let total = pool.len().pow(arity as u32);
            for mut code in 0..total {
                let mut args = Vec::new();
                for _ in 0..arity {
                    args.push(pool[code % pool.len()].clone());
                    code /= pool.len();
                }
                if !seed.iter().any(|f| &f.predicate == p && f.args == args) {
                    ground.push((p.clone(), args));
                }
            }
        }
        assert!(ground.len() <= 20, "brute force space too large: {}", ground.len());
        for mask in 0u32..(1 << ground.len()) {
            let mut kb = KnowledgeBase::new(sig.clone());
            for f in seed {
                kb.assert_fact(&f.predicate, &f.args).unwrap();
            }
            for (j, (p, args)) in ground.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    kb.assert_fact(p, args).unwrap();
                }
            }
            let size = kb.entity_count();
            if best.is_some_and(|b| size >= b) {
                continue;
            }
            if theory
                .iter()
                .all(|c| eval_naive(&kb, c.formula(), &Binding::new()).unwrap())
            {
                best = Some(size);
            }
        }
        if best.is_some() {
            return best;
        }
    }
    best
}
