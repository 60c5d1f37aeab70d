use crate::kb::{Assertion, EntityId, KbError, KnowledgeBase};
use crate::vocab::gfo_kb;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScaffoldOptions {
    /// Adds one requirement of each kind together with its specification.
    pub with_requirements: bool,
    /// Adds material-object facts for the artifact: stuff, mass, density,
    /// region, boundary and environment.
    pub with_space: bool,
}

/// Criterial features used for a kind. Bikes get wheels, handlebars and a
/// saddle; any other kind gets a single generic feature.
fn features(kind: &str) -> Vec<String> {
    if kind == "Bike" {
        ["wheels", "handlebars", "saddle"].map(String::from).to_vec()
    } else {
        vec![format!("{kind}Feature")]
    }
}

/// A knowledge base with one artifact of kind `kind` that satisfies the
/// artifact profile (and the requirements and space profiles when asked).
pub fn scaffold_artifact(kind: &str, options: ScaffoldOptions) -> Result<KnowledgeBase, KbError> {
    EntityId::new(kind)?;
    let x = format!("{}1", kind.to_lowercase());
    let design = format!("{kind}Design");
    let model = format!("{kind}Model");
    let maker = format!("{x}Maker");
    let concept = format!("{kind}Concept");
    let set = format!("{kind}Features");
    let standard = format!("{kind}Standard");
    let audience = format!("{kind}Audience");
    let features = features(kind);

    let mut kb = gfo_kb();
    let mut add = |p: &str, args: &[&str]| kb.assert_str(p, args).map(|_| ());
    add("Artifact", &[&x])?;
    add("ArtifKind", &[kind])?;
    add("Category", &[kind])?;
    add("is-instance-of", &[&x, kind])?;
    add("ArtifDesign", &[&design])?;
    add("hasDesign", &[&x, &design])?;
    add("ArtifModel", &[&model])?;
    add("hasModel", &[&x, &model])?;
    add("Maker", &[&maker, &x])?;
    add("intendToBuild", &[&maker, &x, kind])?;
    add("ConceptOf", &[&concept, kind, &set])?;
    add("hasConcept", &[&maker, &concept, kind, &set])?;
    for p in &features {
        add("Is-Criterial-Feature", &[p, kind])?;
        add("hasMember", &[&set, p])?;
    }
    add("Criterial-Features", &[&set, kind])?;
    add("isDefinedby", &[kind, &set])?;
    add("Audienceof", &[&audience])?;
    add("StandardDef", &[&standard, kind, &set, &audience])?;
    add("specifiesStandDef", &[&audience, kind, &set, &standard])?;

    if options.with_requirements {
        let req = |tag: &str| format!("{kind}{tag}Req");
        let part = format!("{x}Frame");
        let (kr, ir, dr, mr, pr, fr) = (
            req("Kind"),
            req("Instance"),
            req("Design"),
            req("Model"),
            req("Part"),
            req("Feature"),
        );
        add("Krequirement", &[&kr, kind, &audience])?;
        add("specifiesKRequirement", &[&audience, &kr, kind])?;
        add("requirement", &[&ir, &x, &audience])?;
        add("specifiesRequirement", &[&audience, &ir, &x])?;
        add("DesignRequirement", &[&dr, &design, &audience])?;
        add("specifiesDRequirement", &[&audience, &dr, &design])?;
        add("ModelRequirement", &[&mr, &model, &audience])?;
        add("specifiesMRequirement", &[&audience, &mr, &model])?;
        add("PartRequirement", &[&pr, &part, &x, &audience])?;
        add("specifiesPartRequirement", &[&audience, &pr, &part, &x])?;
        add("FeatRequirement", &[&fr, &features[0], &x, &audience])?;
        add("specifiesFeatRequirement", &[&audience, &fr, &features[0], &x])?;
    }

    if options.with_space {
        let n = |tag: &str| format!("{x}{tag}");
        let (stuff, mass, density, region, surface, region_bd, env) = (
            n("Material"),
            n("Mass"),
            n("Density"),
            n("Region"),
            n("Surface"),
            n("RegionBoundary"),
            n("Environment"),
        );
        add("MOB", &[&x])?;
        add("MatE", &[&x])?;
        add("Stuff", &[&stuff])?;
        add("consists_of", &[&x, &stuff])?;
        add("has_mass", &[&x, &mass])?;
        add("has_density", &[&x, &density])?;
        add("SReg", &[&region])?;
        add("Conn", &[&region])?;
        add("occ", &[&x, &region])?;
        add("mbd", &[&surface, &x])?;
        add("sb", &[&region_bd, &region])?;
        add("occ", &[&surface, &region_bd])?;
        add("environ", &[&env, &x])?;
        add("ObSit", &[&env])?;
        add("contained_in", &[&x, &env])?;
    }
    Ok(kb)
}

/// Every single-assertion deletion of `kb`, in canonical order.
pub fn mutations(kb: &KnowledgeBase) -> Vec<(Assertion, KnowledgeBase)> {
    kb.canonical_form()
        .into_iter()
        .map(|a| {
            let mut m = kb.clone();
            m.retract(&a.predicate, &a.args);
            (a, m)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vocab::{check, Profile};

    #[test]
    fn bike_features_from_the_example() {
        let kb = scaffold_artifact("Bike", ScaffoldOptions::default()).unwrap();
        let mut members: Vec<_> = kb.tuples("hasMember").map(|t| t[1].to_string()).collect();
        members.sort();
        assert_eq!(members, ["handlebars", "saddle", "wheels"]);
    }

    #[test]
    fn scaffolds_comply() {
        let all = ScaffoldOptions {
            with_requirements: true,
            with_space: true,
        };
        for kind in ["Bike", "Chair", "x"] {
            let kb = scaffold_artifact(kind, all).unwrap();
            let r = check(&kb, &[Profile::Artifact, Profile::Requirements, Profile::Space, Profile::Constitution].into())
                .unwrap();
            assert!(r.is_empty(), "{kind}: {:?}", r.violated_ids());
        }
    }

    #[test]
    fn invalid_kind() {
        assert!(matches!(
            scaffold_artifact("", ScaffoldOptions::default()),
            Err(KbError::InvalidIdentifier(_))
        ));
        assert!(scaffold_artifact("two words", ScaffoldOptions::default()).is_err());
    }

    #[test]
    fn mutation_cardinality() {
        assert!(mutations(&gfo_kb()).is_empty());
        let mut kb = gfo_kb();
        kb.assert_str("Gas", &["a"]).unwrap();
        kb.assert_str("Gas", &["b"]).unwrap();
        kb.assert_str("consists_of", &["a", "b"]).unwrap();
        let m = mutations(&kb);
        assert_eq!(m.len(), 3);
        for (deleted, smaller) in &m {
            assert_eq!(smaller.len(), 2);
            assert!(!smaller.contains(&deleted.predicate, &deleted.args));
        }
    }
}
