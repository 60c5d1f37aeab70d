//! Finite assertion store.
//!
//! A [`KnowledgeBase`] holds unary memberships, binary links and reified
//! n-ary relation instances over named entities. Lookup is closed-world:
//! a fact holds iff it was asserted. Entities exist only by being mentioned
//! in some assertion, so the entity set is always the closure of the
//! assertion arguments.
//!
//! Relation instances (arity 3 and up) carry a node name. Names given
//! explicitly (e.g. by the Turtle reader) are kept; otherwise a name is
//! minted from the predicate name and a zero-padded ordinal assigned in
//! canonical order, so the minted names depend only on the assertion set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KbError {
    #[error("duplicate predicate `{0}` in signature")]
    DuplicatePredicate(String),
    #[error("predicate `{predicate}` declares role `{role}` twice")]
    DuplicateRole { predicate: String, role: String },
    #[error("predicate `{0}` must have at least one role")]
    EmptyRoles(String),
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("name `{0}` is used both as an entity and as a relation instance")]
    NameClash(String),
    #[error("relation instance `{0}` already names a different assertion")]
    InstanceReused(String),
}

/// Name of an individual in a knowledge base.
///
/// Identifiers must be usable as Turtle local names in the `:` namespace:
/// an ASCII letter, digit or `_`, followed by letters, digits, `_` or `-`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EntityId(Arc<str>);

impl EntityId {
    pub fn new(name: &str) -> Result<Self, KbError> {
        if is_identifier(name) {
            Ok(EntityId(Arc::from(name)))
        } else {
            Err(KbError::InvalidIdentifier(name.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl std::str::FromStr for EntityId {
    type Err = KbError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        EntityId::new(s)
    }
}

pub fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphanumeric() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

/// Predicate symbol with its ordered role names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSig {
    name: String,
    roles: Vec<String>,
}

impl PredicateSig {
    pub fn new<S: Into<String>>(name: &str, roles: Vec<S>) -> Result<Self, KbError> {
        let roles: Vec<String> = roles.into_iter().map(Into::into).collect();
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(KbError::InvalidIdentifier(name.to_string()));
        }
        if roles.is_empty() {
            return Err(KbError::EmptyRoles(name.to_string()));
        }
        let mut seen = BTreeSet::new();
        for role in &roles {
            if !seen.insert(role.as_str()) {
                return Err(KbError::DuplicateRole {
                    predicate: name.to_string(),
                    role: role.clone(),
                });
            }
        }
        Ok(PredicateSig {
            name: name.to_string(),
            roles,
        })
    }

    pub fn unary(name: &str) -> Self {
        Self::new(name, vec!["subject"]).expect("valid unary signature")
    }

    pub fn binary(name: &str) -> Self {
        Self::new(name, vec!["subject", "object"]).expect("valid binary signature")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.roles.len()
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    pub fn is_reified(&self) -> bool {
        self.arity() >= 3
    }
}

/// Set of predicate signatures, keyed by name.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    predicates: BTreeMap<String, PredicateSig>,
}

impl Signature {
    pub fn new(predicates: impl IntoIterator<Item = PredicateSig>) -> Result<Self, KbError> {
        let mut map = BTreeMap::new();
        for sig in predicates {
            let name = sig.name.clone();
            if map.insert(name.clone(), sig).is_some() {
                return Err(KbError::DuplicatePredicate(name));
            }
        }
        Ok(Signature { predicates: map })
    }

    pub fn get(&self, name: &str) -> Option<&PredicateSig> {
        self.predicates.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &PredicateSig> {
        self.predicates.values()
    }

    pub fn len(&self) -> usize {
        self.predicates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.predicates.is_empty()
    }

    fn check(&self, predicate: &str, got: usize) -> Result<&PredicateSig, KbError> {
        let sig = self
            .get(predicate)
            .ok_or_else(|| KbError::UnknownPredicate(predicate.to_string()))?;
        if sig.arity() != got {
            return Err(KbError::ArityMismatch {
                expected: sig.arity(),
                got,
            });
        }
        Ok(sig)
    }
}

/// One asserted fact as reported by [`KnowledgeBase::canonical_form`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assertion {
    pub predicate: String,
    pub args: Vec<EntityId>,
    /// Relation-instance node; `Some` iff the predicate has arity ≥ 3.
    pub instance_id: Option<EntityId>,
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.predicate)?;
        for (i, a) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}

type Tuples = BTreeMap<Vec<EntityId>, Option<EntityId>>;

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    signature: Arc<Signature>,
    // predicate -> argument tuple -> explicit instance name
    relations: BTreeMap<String, Tuples>,
    // entity -> number of argument slots mentioning it
    mentions: BTreeMap<EntityId, usize>,
    // explicit instance names -> (predicate, args)
    instances: BTreeMap<EntityId, (String, Vec<EntityId>)>,
    len: usize,
}

impl KnowledgeBase {
    /// Empty knowledge base over `signature`.
    pub fn new(signature: Arc<Signature>) -> Self {
        KnowledgeBase {
            signature,
            relations: BTreeMap::new(),
            mentions: BTreeMap::new(),
            instances: BTreeMap::new(),
            len: 0,
        }
    }

    /// Builds the signature from a list, rejecting duplicate names.
    pub fn with_predicates(predicates: Vec<PredicateSig>) -> Result<Self, KbError> {
        Ok(Self::new(Arc::new(Signature::new(predicates)?)))
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.signature
    }

    /// Empty knowledge base sharing this one's signature.
    pub fn empty_like(&self) -> Self {
        Self::new(self.signature.clone())
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityId> + '_ {
        self.mentions.keys()
    }

    pub fn entity_count(&self) -> usize {
        self.mentions.len()
    }

    pub fn contains_entity(&self, name: &str) -> bool {
        self.mentions.keys().any(|e| e.as_str() == name)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds a fact. Returns `true` if it was not already present.
    ///
    /// Re-asserting an existing fact changes nothing, including its
    /// relation-instance name.
    pub fn assert_fact(&mut self, predicate: &str, args: &[EntityId]) -> Result<bool, KbError> {
        self.insert(predicate, args, None)
    }

    /// Like [`assert_fact`](Self::assert_fact) but parses identifiers.
    pub fn assert_str(&mut self, predicate: &str, args: &[&str]) -> Result<bool, KbError> {
        let args = args
            .iter()
            .map(|a| EntityId::new(a))
            .collect::<Result<Vec<_>, _>>()?;
        self.assert_fact(predicate, &args)
    }

    /// Adds an n-ary fact under an explicit relation-instance name.
    ///
    /// If the fact is already present the existing name is kept unless the
    /// new one sorts before it.
    pub fn assert_instance(
        &mut self,
        predicate: &str,
        args: &[EntityId],
        instance: EntityId,
    ) -> Result<bool, KbError> {
        let sig = self.signature.check(predicate, args.len())?;
        if !sig.is_reified() {
            return Err(KbError::ArityMismatch {
                expected: sig.arity(),
                got: args.len(),
            });
        }
        self.insert(predicate, args, Some(instance))
    }

    fn insert(
        &mut self,
        predicate: &str,
        args: &[EntityId],
        instance: Option<EntityId>,
    ) -> Result<bool, KbError> {
        self.signature.check(predicate, args.len())?;
        for a in args {
            if self.instances.contains_key(a) {
                return Err(KbError::NameClash(a.to_string()));
            }
        }
        if let Some(id) = &instance {
            if self.mentions.contains_key(id) || args.contains(id) {
                return Err(KbError::NameClash(id.to_string()));
            }
            if let Some((p, a)) = self.instances.get(id) {
                if p != predicate || a.as_slice() != args {
                    return Err(KbError::InstanceReused(id.to_string()));
                }
            }
        }

        let tuples = self.relations.entry(predicate.to_string()).or_default();
        if let Some(existing) = tuples.get_mut(args) {
            if let Some(id) = instance {
                let replace = match existing {
                    Some(old) => id < *old,
                    None => true,
                };
                if replace {
                    if let Some(old) = existing.take() {
                        self.instances.remove(&old);
                    }
                    self.instances
                        .insert(id.clone(), (predicate.to_string(), args.to_vec()));
                    *existing = Some(id);
                }
            }
            return Ok(false);
        }
        if let Some(id) = &instance {
            self.instances
                .insert(id.clone(), (predicate.to_string(), args.to_vec()));
        }
        tuples.insert(args.to_vec(), instance);
        for a in args {
            *self.mentions.entry(a.clone()).or_insert(0) += 1;
        }
        self.len += 1;
        Ok(true)
    }

    /// Removes a fact. Entities no longer mentioned disappear with it.
    pub fn retract(&mut self, predicate: &str, args: &[EntityId]) -> bool {
        let Some(tuples) = self.relations.get_mut(predicate) else {
            return false;
        };
        let Some(instance) = tuples.remove(args) else {
            return false;
        };
        if tuples.is_empty() {
            self.relations.remove(predicate);
        }
        if let Some(id) = instance {
            self.instances.remove(&id);
        }
        for a in args {
            if let Some(n) = self.mentions.get_mut(a) {
                *n -= 1;
                if *n == 0 {
                    self.mentions.remove(a);
                }
            }
        }
        self.len -= 1;
        true
    }

    /// Closed-world lookup.
    pub fn holds(&self, predicate: &str, args: &[EntityId]) -> Result<bool, KbError> {
        self.signature.check(predicate, args.len())?;
        Ok(self.contains(predicate, args))
    }

    /// Lookup without signature checks.
    pub fn contains(&self, predicate: &str, args: &[EntityId]) -> bool {
        self.relations
            .get(predicate)
            .is_some_and(|t| t.contains_key(args))
    }

    /// All argument tuples of one predicate, in canonical order.
    pub fn tuples(&self, predicate: &str) -> impl Iterator<Item = &[EntityId]> + '_ {
        self.relations
            .get(predicate)
            .into_iter()
            .flat_map(|t| t.keys().map(Vec::as_slice))
    }

    /// Names of the predicates that have at least one fact.
    pub fn used_predicates(&self) -> impl Iterator<Item = &str> + '_ {
        self.relations.keys().map(String::as_str)
    }

    /// Relation-instance node of an n-ary fact, explicit or minted.
    pub fn instance_id(&self, predicate: &str, args: &[EntityId]) -> Option<EntityId> {
        let tuples = self.relations.get(predicate)?;
        match tuples.get(args)? {
            Some(id) => Some(id.clone()),
            None => self
                .minted_ids(predicate, tuples)
                .into_iter()
                .find(|(a, _)| a.as_slice() == args)
                .map(|(_, id)| id),
        }
    }

    fn minted_ids<'a>(
        &self,
        predicate: &str,
        tuples: &'a Tuples,
    ) -> Vec<(&'a Vec<EntityId>, EntityId)> {
        let arity = self.signature.get(predicate).map_or(0, PredicateSig::arity);
        if arity < 3 {
            return Vec::new();
        }
        let mut ordinal = 0usize;
        let mut out = Vec::new();
        for (args, explicit) in tuples {
            if explicit.is_some() {
                continue;
            }
            let id = loop {
                ordinal += 1;
                let candidate = format!("{predicate}_{ordinal:04}");
                if self.is_free_name(&candidate) {
                    break EntityId::new(&candidate).expect("minted names are identifiers");
                }
            };
            out.push((args, id));
        }
        out
    }

    fn is_free_name(&self, name: &str) -> bool {
        !self.mentions.keys().any(|e| e.as_str() == name)
            && !self.instances.keys().any(|e| e.as_str() == name)
    }

    /// Assertions sorted by predicate name, then argument names.
    pub fn canonical_form(&self) -> Vec<Assertion> {
        let mut out = Vec::with_capacity(self.len);
        for (predicate, tuples) in &self.relations {
            let minted: BTreeMap<&Vec<EntityId>, EntityId> =
                self.minted_ids(predicate, tuples).into_iter().collect();
            for (args, explicit) in tuples {
                let instance_id = explicit.clone().or_else(|| minted.get(args).cloned());
                out.push(Assertion {
                    predicate: predicate.clone(),
                    args: args.clone(),
                    instance_id,
                });
            }
        }
        out
    }

    /// Facts without instance names, in canonical order.
    pub fn facts(&self) -> impl Iterator<Item = (&str, &[EntityId])> + '_ {
        self.relations
            .iter()
            .flat_map(|(p, t)| t.keys().map(move |a| (p.as_str(), a.as_slice())))
    }
}

impl PartialEq for KnowledgeBase {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && self.mentions.keys().eq(other.mentions.keys())
            && self.canonical_form() == other.canonical_form()
    }
}

impl Eq for KnowledgeBase {}
