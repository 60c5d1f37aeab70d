use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::LazyLock;

use thiserror::Error;

use crate::folk::{
    and, atom, constraint_clauses, eq, exists, exists_unique, forall, iff, implies, not, or,
    well_formed, Binding, Constraint, Formula,
};

use super::signature::gfo_signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Profile {
    Space,
    Artifact,
    Requirements,
    Integration,
    Constitution,
}

impl Profile {
    pub const ALL: [Profile; 5] = [
        Profile::Space,
        Profile::Artifact,
        Profile::Requirements,
        Profile::Integration,
        Profile::Constitution,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Space => "space",
            Profile::Artifact => "artifact",
            Profile::Requirements => "requirements",
            Profile::Integration => "integration",
            Profile::Constitution => "constitution",
        }
    }

    /// Profiles checked when none are requested.
    pub fn defaults() -> BTreeSet<Profile> {
        [Profile::Artifact, Profile::Requirements, Profile::Constitution].into()
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown profile `{0}` (expected space, artifact, requirements, integration or constitution)")]
pub struct UnknownProfile(pub String);

impl FromStr for Profile {
    type Err = UnknownProfile;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| UnknownProfile(s.to_string()))
    }
}

/// Parses a comma-separated profile list; `all` selects every profile.
pub fn parse_profiles(list: &str) -> Result<BTreeSet<Profile>, UnknownProfile> {
    let mut out = BTreeSet::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            out.extend(Profile::ALL);
        } else {
            out.insert(name.parse()?);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citation {
    /// Section and item label, e.g. `§14 (4)`.
    pub section: &'static str,
    /// Verbatim anchor phrase from the source text.
    pub quote: &'static str,
}

impl fmt::Display for Citation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} \"{}\"", self.section, self.quote)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NamedAxiom {
    pub id: &'static str,
    pub formula: Formula,
    pub citation: Citation,
    pub profile: Profile,
    /// Explanation template; `{v}` is replaced by the binding of `v`.
    pub message: &'static str,
}

impl NamedAxiom {
    pub fn render_message(&self, binding: &Binding) -> String {
        let mut out = self.message.to_string();
        for (var, value) in binding.iter() {
            out = out.replace(&format!("{{{var}}}"), value.as_str());
        }
        out
    }
}

impl Constraint for NamedAxiom {
    fn id(&self) -> &str {
        self.id
    }

    fn formula(&self) -> &Formula {
        &self.formula
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Upgrades A12 to `∃!` and adds the ITB implication.
    pub strict: bool,
}

/// Catalog axioms tagged with one of `profiles`, in catalog order.
pub fn axiom_catalog(profiles: &BTreeSet<Profile>) -> Vec<NamedAxiom> {
    axiom_catalog_with(profiles, CatalogOptions::default())
}

pub fn axiom_catalog_with(profiles: &BTreeSet<Profile>, options: CatalogOptions) -> Vec<NamedAxiom> {
    let source: &[NamedAxiom] = if options.strict { &STRICT } else { &DEFAULT };
    source
        .iter()
        .filter(|a| profiles.contains(&a.profile))
        .cloned()
        .collect()
}

/// Looks an axiom up by id in the default or strict catalog.
pub fn axiom_by_id(id: &str, options: CatalogOptions) -> Option<NamedAxiom> {
    let source: &[NamedAxiom] = if options.strict { &STRICT } else { &DEFAULT };
    source.iter().find(|a| a.id == id).cloned()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("axiom {id} is malformed: {problem}")]
pub struct CatalogError {
    pub id: String,
    pub problem: String,
}

/// Verifies that every axiom is well formed over the GFO signature and
/// constraint-shaped.
pub fn self_check(axioms: &[NamedAxiom]) -> Result<(), CatalogError> {
    let sig = gfo_signature();
    let mut seen = BTreeSet::new();
    for a in axioms {
        let fail = |problem: String| CatalogError {
            id: a.id.to_string(),
            problem,
        };
        if !seen.insert(a.id) {
            return Err(fail("duplicate id".into()));
        }
        if let Some(d) = well_formed(&a.formula, &sig).first() {
            return Err(fail(d.to_string()));
        }
        constraint_clauses(&a.formula).map_err(|e| fail(e.to_string()))?;
    }
    Ok(())
}

static DEFAULT: LazyLock<Vec<NamedAxiom>> = LazyLock::new(|| build(false));
static STRICT: LazyLock<Vec<NamedAxiom>> = LazyLock::new(|| build(true));

fn ax(
    id: &'static str,
    profile: Profile,
    section: &'static str,
    quote: &'static str,
    message: &'static str,
    formula: Formula,
) -> NamedAxiom {
    NamedAxiom {
        id,
        formula,
        citation: Citation { section, quote },
        profile,
        message,
    }
}

fn a(p: &str, args: &[&str]) -> Formula {
    atom(p, args)
}

/// `∀vars (guard → body)`.
fn rule(vars: &[&str], guard: Vec<Formula>, body: Formula) -> Formula {
    let guard = if guard.len() == 1 {
        guard.into_iter().next().unwrap()
    } else {
        and(guard)
    };
    forall(vars, implies(guard, body))
}

fn build(strict: bool) -> Vec<NamedAxiom> {
    use Profile::*;
    let mut out = vec![
        ax(
            "M1",
            Space,
            "§5 M1",
            "MOB(x) ∨ Fluid(x) ∨ Gas(x) → MatE(x)",
            "{x} is a solid, fluid or gaseous entity but not a material entity",
            forall(
                &["x"],
                implies(
                    or(vec![a("MOB", &["x"]), a("Fluid", &["x"]), a("Gas", &["x"])]),
                    a("MatE", &["x"]),
                ),
            ),
        ),
        ax(
            "M2",
            Space,
            "§5 M2",
            "Stuff(y) ∧ consists_of(x,y)",
            "material entity {x} consists of no stuff",
            rule(
                &["x"],
                vec![a("MatE", &["x"])],
                exists(&["y"], and(vec![a("Stuff", &["y"]), a("consists_of", &["x", "y"])])),
            ),
        ),
        ax(
            "M3",
            Space,
            "§5 M3",
            "has_mass(x,y) ∧ has_density(x,z)",
            "material entity {x} lacks a mass or a density",
            rule(
                &["x"],
                vec![a("MatE", &["x"])],
                exists(
                    &["y", "z"],
                    and(vec![a("has_mass", &["x", "y"]), a("has_density", &["x", "z"])]),
                ),
            ),
        ),
        ax(
            "M4",
            Space,
            "§5 M4",
            "Every material object occupies a connected space region",
            "material object {x} occupies no connected space region",
            rule(
                &["x"],
                vec![a("MOB", &["x"])],
                exists(
                    &["y"],
                    and(vec![a("SReg", &["y"]), a("occ", &["x", "y"]), a("Conn", &["y"])]),
                ),
            ),
        ),
        ax(
            "M5",
            Space,
            "§5 M5",
            "the boundary that must exist is not assumed to be maximal",
            "material object {x} has no material boundary",
            rule(&["x"], vec![a("MOB", &["x"])], exists(&["y"], a("mbd", &["y", "x"]))),
        ),
        ax(
            "M6",
            Space,
            "§5 M6",
            "Every material part of the boundary of a material object is itself a material boundary",
            "{z} is a material part of boundary {y} of {x} but not a boundary of {x}",
            rule(
                &["x", "y", "z"],
                vec![a("MOB", &["x"]), a("mbd", &["y", "x"]), a("mpart", &["z", "y"])],
                a("mbd", &["z", "x"]),
            ),
        ),
        ax(
            "M7",
            Space,
            "§5 M7",
            "any boundary of the material object occupies a uniquely determined boundary of the occupied space region",
            "boundary {z} of {x} does not occupy exactly one boundary of region {y}",
            rule(
                &["x", "y", "z"],
                vec![a("MOB", &["x"]), a("occ", &["x", "y"]), a("mbd", &["z", "x"])],
                exists_unique("u", and(vec![a("sb", &["u", "y"]), a("occ", &["z", "u"])])),
            ),
        ),
        ax(
            "M8",
            Space,
            "§5 M8",
            "For every material object there exists an environment",
            "material object {x} has no environment",
            rule(&["x"], vec![a("MOB", &["x"])], exists(&["y"], a("environ", &["y", "x"]))),
        ),
        ax(
            "M9",
            Space,
            "§5 M9",
            "The environment of a material object is an object-situation that contains this material object",
            "environment {y} of {x} is not an object-situation containing it",
            rule(
                &["x", "y"],
                vec![a("MOB", &["x"]), a("environ", &["y", "x"])],
                and(vec![a("ObSit", &["y"]), a("contained_in", &["x", "y"])]),
            ),
        ),
        ax(
            "M13",
            Space,
            "§5 M13",
            "Any material part of a material object occupies a spatial part of the space region occupied by the material object",
            "part {y} of {x} occupies no spatial part of region {z}",
            rule(
                &["x", "y", "z"],
                vec![a("mpart", &["y", "x"]), a("occ", &["x", "z"])],
                exists(&["u"], and(vec![a("spart", &["u", "z"]), a("occ", &["y", "u"])])),
            ),
        ),
        ax(
            "M15",
            Space,
            "§5 M15",
            "A material object has no common material part with an environment",
            "material object {x} shares a material part with its environment {y}",
            rule(
                &["x", "y"],
                vec![a("MOB", &["x"]), a("environ", &["y", "x"])],
                not(exists(
                    &["z"],
                    and(vec![
                        a("MatE", &["z"]),
                        a("mpart", &["z", "x"]),
                        a("mpart", &["z", "y"]),
                    ]),
                )),
            ),
        ),
        ax(
            "A1",
            Artifact,
            "§12 (1)",
            "individuals and categories are disjoint",
            "{x} is both an individual and a category",
            rule(&["x"], vec![a("Individual", &["x"])], not(a("Category", &["x"]))),
        ),
        ax(
            "A2",
            Artifact,
            "§12 (2)",
            "individuals instantiate categories, not being instantiated themselves",
            "{y} is instantiated by {x} but is not a category",
            rule(&["x", "y"], vec![a("is-instance-of", &["x", "y"])], a("Category", &["y"])),
        ),
        ax(
            "A3",
            Artifact,
            "§12 (3)",
            "individuals instantiate categories",
            "individual {x} instantiates no category",
            rule(
                &["x"],
                vec![a("Individual", &["x"])],
                exists(&["y"], and(vec![a("Category", &["y"]), a("is-instance-of", &["x", "y"])])),
            ),
        ),
        ax(
            "A4",
            Artifact,
            "§14 (4)",
            "For all artifacts x there exists exactly one artifact kind K that x is an instance of",
            "artifact {x} has no (or multiple) artifact kind",
            rule(
                &["x"],
                vec![a("Artifact", &["x"])],
                exists_unique(
                    "K",
                    and(vec![a("ArtifKind", &["K"]), a("is-instance-of", &["x", "K"])]),
                ),
            ),
        ),
        ax(
            "A5",
            Artifact,
            "§14 (5)",
            "Every artifact x has one design d",
            "artifact {x} has no (or multiple) design",
            rule(
                &["x"],
                vec![a("Artifact", &["x"])],
                exists_unique("d", and(vec![a("ArtifDesign", &["d"]), a("hasDesign", &["x", "d"])])),
            ),
        ),
        ax(
            "A6",
            Artifact,
            "§14 (6)",
            "Every artifact x has one model m",
            "artifact {x} has no (or multiple) model",
            rule(
                &["x"],
                vec![a("Artifact", &["x"])],
                exists_unique("m", and(vec![a("ArtifModel", &["m"]), a("hasModel", &["x", "m"])])),
            ),
        ),
        ax(
            "A7",
            Artifact,
            "§14 (7)",
            "For every artifact kind, there exists at least one model",
            "artifact kind {K} exists but no artifact model does",
            rule(&["K"], vec![a("ArtifKind", &["K"])], exists(&["m"], a("ArtifModel", &["m"]))),
        ),
        ax(
            "A8",
            Artifact,
            "§14 (8)",
            "For every artifact model, there exists at least one design",
            "artifact model {m} exists but no artifact design does",
            rule(&["m"], vec![a("ArtifModel", &["m"])], exists(&["d"], a("ArtifDesign", &["d"]))),
        ),
        ax(
            "A9",
            Artifact,
            "§14 (9)",
            "there exists exactly one artifact kind K and at least one maker y and y intends to build artifact x of kind K",
            "artifact {x} lacks a unique kind that one of its makers intends to build",
            rule(
                &["x"],
                vec![a("Artifact", &["x"])],
                exists_unique(
                    "K",
                    and(vec![
                        a("ArtifKind", &["K"]),
                        exists(
                            &["y"],
                            and(vec![a("Maker", &["y", "x"]), a("intendToBuild", &["y", "x", "K"])]),
                        ),
                    ]),
                ),
            ),
        ),
        ax(
            "A10",
            Artifact,
            "§15 (10)",
            "then s has a concept C associated with K and listing its criterial features Q",
            "maker {s} intends to build {x} as {K} without a concept of {K}",
            rule(
                &["s", "x", "K"],
                vec![
                    a("Maker", &["s", "x"]),
                    a("Artifact", &["x"]),
                    a("ArtifKind", &["K"]),
                    a("intendToBuild", &["s", "x", "K"]),
                ],
                exists(
                    &["c", "Q"],
                    and(vec![
                        a("ConceptOf", &["c", "K", "Q"]),
                        a("hasConcept", &["s", "c", "K", "Q"]),
                    ]),
                ),
            ),
        ),
        ax(
            "A11",
            Artifact,
            "§15 (11)",
            "for all artifact kinds there exists at least one criterial feature p",
            "artifact kind {K} has no criterial feature",
            rule(
                &["K"],
                vec![a("ArtifKind", &["K"])],
                exists(&["p"], a("Is-Criterial-Feature", &["p", "K"])),
            ),
        ),
    ];

    let defined_by = and(vec![a("Criterial-Features", &["Q", "K"]), a("isDefinedby", &["K", "Q"])]);
    out.push(ax(
        "A12",
        Artifact,
        "§15 (12)",
        "there exists one set of criterial features Q such that Q defines K",
        "artifact kind {K} is not defined by a set of criterial features",
        rule(
            &["K"],
            vec![a("ArtifKind", &["K"])],
            if strict {
                exists_unique("Q", defined_by)
            } else {
                exists(&["Q"], defined_by)
            },
        ),
    ));

    out.push(ax(
        "A13",
        Artifact,
        "§17 (13)",
        "there is an audience y that specifies that standard definition",
        "artifact kind {K} has no standard definition specified by an audience",
        rule(
            &["K"],
            vec![a("ArtifKind", &["K"])],
            exists(
                &["s", "Q", "y"],
                and(vec![
                    a("StandardDef", &["s", "K", "Q", "y"]),
                    a("Criterial-Features", &["Q", "K"]),
                    a("Audienceof", &["y"]),
                    a("specifiesStandDef", &["y", "K", "Q", "s"]),
                ]),
            ),
        ),
    ));

    if strict {
        out.push(ax(
            "ITB",
            Artifact,
            "§14",
            "further specify the relation “intend-To-Build” into a quintary relation",
            "maker {s} intends a specified build of {x} but not a build of kind {K}",
            rule(
                &["s", "x", "m", "d", "K"],
                vec![a("intendToBuildSpec", &["s", "x", "m", "d", "K"])],
                a("intendToBuild", &["s", "x", "K"]),
            ),
        ));
    }

    out.push(ax(
        "A14",
        Requirements,
        "§17",
        "there is an audience which specifies them",
        "requirement {n} is not specified by any audience",
        and(REQUIREMENTS
            .iter()
            .map(|&(req, spec, targets)| {
                let mut vars = vec!["n"];
                vars.extend_from_slice(targets);
                vars.push("y");
                let mut spec_args = vec!["a", "n"];
                spec_args.extend_from_slice(targets);
                rule(
                    &vars,
                    vec![a(req, &vars)],
                    exists(&["a"], and(vec![a("Audienceof", &["a"]), a(spec, &spec_args)])),
                )
            })
            .collect()),
    ));

    out.push(ax(
        "INT1",
        Integration,
        "§8",
        "the process boundaries of",
        "material continuant {C} has no process whose boundaries coincide with its presentials",
        rule(
            &["C"],
            vec![a("MatCont", &["C"])],
            exists(
                &["P"],
                and(vec![
                    a("Proc", &["P"]),
                    exists(&["e"], and(vec![a("lifetime", &["e", "C"]), a("tempext", &["e", "P"])])),
                    forall(
                        &["t", "M"],
                        implies(
                            and(vec![a("TimePoint", &["t"]), a("Presential", &["M"])]),
                            iff(a("exhib", &["C", "t", "M"]), a("procbd", &["P", "t", "M"])),
                        ),
                    ),
                ]),
            ),
        ),
    ));

    out.push(ax(
        "C1",
        Constitution,
        "§7",
        "material constitution is not reflexive",
        "{x} consists of itself",
        rule(&["x"], vec![a("consists_of", &["x", "x"])], Formula::Or(Vec::new())),
    ));
    out.push(ax(
        "C2",
        Constitution,
        "§7",
        "material constitution is not symmetric",
        "{x} and {y} consist of each other",
        rule(
            &["x", "y"],
            vec![a("consists_of", &["x", "y"])],
            or(vec![eq("x", "y"), not(a("consists_of", &["y", "x"]))]),
        ),
    ));
    out
}

/// Requirement relations, their specifies counterparts, and the target
/// arguments shared between the two.
const REQUIREMENTS: &[(&str, &str, &[&str])] = &[
    ("Krequirement", "specifiesKRequirement", &["K"]),
    ("requirement", "specifiesRequirement", &["x"]),
    ("DesignRequirement", "specifiesDRequirement", &["d"]),
    ("ModelRequirement", "specifiesMRequirement", &["m"]),
    ("PartRequirement", "specifiesPartRequirement", &["p", "x"]),
    ("FeatRequirement", "specifiesFeatRequirement", &["p", "x"]),
];
