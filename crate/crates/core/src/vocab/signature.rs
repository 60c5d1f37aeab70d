use std::sync::{Arc, LazyLock};

use crate::kb::{KnowledgeBase, PredicateSig, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `:x a gfo:Name .`
    Unary,
    /// `:x gfo:name :y .`
    Binary,
    /// A typed node with one triple per role.
    Reified,
}

/// One predicate of the GFO artifact vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VocabEntry {
    /// Predicate name used in formulas, patterns and the knowledge base.
    pub name: &'static str,
    /// Local name in the `gfo:` namespace.
    pub turtle: &'static str,
    pub roles: &'static [&'static str],
    pub shape: Shape,
}

const SUBJECT: &[&str] = &["subject"];
const SUBJECT_OBJECT: &[&str] = &["subject", "object"];

const fn unary(name: &'static str) -> VocabEntry {
    VocabEntry {
        name,
        turtle: name,
        roles: SUBJECT,
        shape: Shape::Unary,
    }
}

const fn binary(name: &'static str, turtle: &'static str) -> VocabEntry {
    VocabEntry {
        name,
        turtle,
        roles: SUBJECT_OBJECT,
        shape: Shape::Binary,
    }
}

const fn binary_roles(
    name: &'static str,
    turtle: &'static str,
    roles: &'static [&'static str],
) -> VocabEntry {
    VocabEntry {
        name,
        turtle,
        roles,
        shape: Shape::Binary,
    }
}

const fn nary(name: &'static str, turtle: &'static str, roles: &'static [&'static str]) -> VocabEntry {
    VocabEntry {
        name,
        turtle,
        roles,
        shape: Shape::Reified,
    }
}

/// The complete vocabulary, in declaration order.
pub const VOCABULARY: &[VocabEntry] = &[
    // material entities and space
    unary("MatE"),
    unary("MOB"),
    unary("Fluid"),
    unary("Gas"),
    unary("Stuff"),
    unary("SReg"),
    unary("Conn"),
    unary("ObSit"),
    unary("ML"),
    unary("MS"),
    unary("MStr"),
    unary("MVert"),
    binary("consists_of", "consistsOf"),
    binary("contained_in", "containedIn"),
    binary("environ", "environ"),
    binary("has_density", "hasDensity"),
    binary("has_mass", "hasMass"),
    binary("lifetime", "lifetime"),
    binary("maxbd", "maxbd"),
    binary("mbd", "mbd"),
    binary("mpart", "mpart"),
    binary("natmbd", "natmbd"),
    binary("occ", "occ"),
    binary("occbd", "occbd"),
    binary("touch", "touch"),
    binary("spart", "spart"),
    binary("sb", "sb"),
    // individuals and categories
    unary("Individual"),
    unary("Category"),
    binary("is-instance-of", "isInstanceOf"),
    // artifacts, kinds, designs, models, makers
    unary("Artifact"),
    unary("ArtifKind"),
    unary("ArtifDesign"),
    unary("ArtifModel"),
    binary("hasDesign", "hasDesign"),
    binary("hasModel", "hasModel"),
    binary("Maker", "maker"),
    nary("intendToBuild", "IntendToBuild", &["agent", "object", "kind"]),
    nary(
        "intendToBuildSpec",
        "IntendToBuildSpec",
        &["agent", "object", "model", "design", "kind"],
    ),
    // concepts and criterial features
    nary("ConceptOf", "ConceptOf", &["concept", "kind", "features"]),
    nary("hasConcept", "HasConcept", &["agent", "concept", "kind", "features"]),
    binary_roles("Is-Criterial-Feature", "isCriterialFeature", &["feature", "kind"]),
    binary_roles("Criterial-Features", "criterialFeatures", &["set", "kind"]),
    binary("isDefinedby", "isDefinedBy"),
    binary("hasMember", "hasMember"),
    nary("hasCriterialFeature", "HasCriterialFeature", &["artifact", "feature", "kind"]),
    // audiences, standards and requirements
    unary("Audienceof"),
    nary("StandardDef", "StandardDef", &["def", "kind", "features", "audience"]),
    nary("specifiesStandDef", "SpecifiesStandDef", &["audience", "kind", "features", "def"]),
    binary("Designer", "designer"),
    binary("Researcher", "researcher"),
    binary("User", "user"),
    binary("OtherStakeholder", "otherStakeholder"),
    binary("Institution", "institution"),
    nary("Krequirement", "KRequirement", &["requirement", "kind", "audience"]),
    nary("requirement", "Requirement", &["requirement", "artifact", "audience"]),
    nary("DesignRequirement", "DesignRequirement", &["requirement", "design", "audience"]),
    nary("ModelRequirement", "ModelRequirement", &["requirement", "model", "audience"]),
    nary(
        "PartRequirement",
        "PartRequirement",
        &["requirement", "part", "artifact", "audience"],
    ),
    nary(
        "FeatRequirement",
        "FeatRequirement",
        &["requirement", "feature", "artifact", "audience"],
    ),
    nary("specifiesKRequirement", "SpecifiesKRequirement", &["audience", "requirement", "kind"]),
    nary("specifiesRequirement", "SpecifiesRequirement", &["audience", "requirement", "artifact"]),
    nary("specifiesDRequirement", "SpecifiesDRequirement", &["audience", "requirement", "design"]),
    nary("specifiesMRequirement", "SpecifiesMRequirement", &["audience", "requirement", "model"]),
    nary(
        "specifiesFeatRequirement",
        "SpecifiesFeatRequirement",
        &["audience", "requirement", "feature", "artifact"],
    ),
    nary(
        "specifiesPartRequirement",
        "SpecifiesPartRequirement",
        &["audience", "requirement", "part", "artifact"],
    ),
    // production actions
    nary("IntentionalBuild", "IntentionalBuild", &["artifact", "agent", "kind"]),
    nary("IntentionalBestow", "IntentionalBestow", &["artifact", "agent", "kind", "features"]),
    nary("IntentionalSelect", "IntentionalSelect", &["agent", "material", "artifact", "kind"]),
    // mental representations
    nary(
        "MentRepresArt",
        "MentRepresArt",
        &["repr", "artifact", "kind", "model", "design", "features"],
    ),
    nary("hasMentRepresentation", "HasMentRepresentation", &["agent", "repr", "artifact"]),
    nary(
        "transformsTo",
        "TransformsTo",
        &["agent", "repr", "artifact", "design", "model"],
    ),
    // object-process integration
    unary("MatCont"),
    unary("Proc"),
    unary("Presential"),
    unary("TimePoint"),
    binary("tempext", "tempext"),
    nary("exhib", "Exhib", &["continuant", "time", "presential"]),
    nary("procbd", "Procbd", &["process", "time", "presential"]),
];

static SIGNATURE: LazyLock<Arc<Signature>> = LazyLock::new(|| {
    let sigs = VOCABULARY
        .iter()
        .map(|v| PredicateSig::new(v.name, v.roles.to_vec()).expect("vocabulary roles are valid"));
    Arc::new(Signature::new(sigs).expect("vocabulary names are unique"))
});

/// The GFO artifact signature, shared by every knowledge base built here.
pub fn gfo_signature() -> Arc<Signature> {
    SIGNATURE.clone()
}

/// Empty knowledge base over [`gfo_signature`].
pub fn gfo_kb() -> KnowledgeBase {
    KnowledgeBase::new(gfo_signature())
}

pub fn entry(name: &str) -> Option<&'static VocabEntry> {
    VOCABULARY.iter().find(|v| v.name == name)
}

pub fn entry_by_turtle(local: &str) -> Option<&'static VocabEntry> {
    VOCABULARY.iter().find(|v| v.turtle == local)
}

/// True if `local` is a role property of some reified predicate.
pub fn is_role(local: &str) -> bool {
    VOCABULARY
        .iter()
        .any(|v| v.shape == Shape::Reified && v.roles.contains(&local))
}

/// Predicate name for either spelling (`consists_of` or `consistsOf`).
pub fn resolve_predicate(name: &str) -> Option<&'static str> {
    entry(name).or_else(|| entry_by_turtle(name)).map(|v| v.name)
}
