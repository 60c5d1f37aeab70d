use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::folk::{find_violations, Binding, ViolationError, Witness};
use crate::kb::KnowledgeBase;

use super::catalog::{axiom_catalog_with, CatalogOptions, NamedAxiom, Profile};

/// Violations of one axiom.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationEntry {
    pub axiom: NamedAxiom,
    pub witnesses: Vec<Witness>,
}

impl ViolationEntry {
    pub fn id(&self) -> &str {
        self.axiom.id
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ViolationReport {
    pub profiles: BTreeSet<Profile>,
    pub axioms_checked: usize,
    /// Violated axioms in catalog order; entries never have empty witness lists.
    pub violations: Vec<ViolationEntry>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violated_ids(&self) -> Vec<&str> {
        self.violations.iter().map(ViolationEntry::id).collect()
    }

    pub fn witness_count(&self) -> usize {
        self.violations.iter().map(|v| v.witnesses.len()).sum()
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            profiles: self.profiles.iter().map(|p| p.name().to_string()).collect(),
            violations: self
                .violations
                .iter()
                .map(|v| ViolationJson {
                    axiom: v.axiom.id.to_string(),
                    citation: v.axiom.citation.section.to_string(),
                    witnesses: v
                        .witnesses
                        .iter()
                        .map(|w| {
                            w.binding
                                .iter()
                                .map(|(k, e)| (k.to_string(), e.as_str().to_string()))
                                .collect()
                        })
                        .collect(),
                    message: v
                        .witnesses
                        .iter()
                        .map(|w| v.axiom.render_message(&w.binding))
                        .collect::<Vec<_>>()
                        .join("; "),
                })
                .collect(),
            counts: Counts {
                axioms_checked: self.axioms_checked,
                violated: self.violations.len(),
            },
        }
    }
}

/// Serialized report. Field order is the on-disk key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportJson {
    pub profiles: Vec<String>,
    pub violations: Vec<ViolationJson>,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationJson {
    pub axiom: String,
    pub citation: String,
    pub witnesses: Vec<BTreeMap<String, String>>,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    pub axioms_checked: usize,
    pub violated: usize,
}

/// Checks `kb` against the default catalog restricted to `profiles`.
pub fn check(kb: &KnowledgeBase, profiles: &BTreeSet<Profile>) -> Result<ViolationReport, ViolationError> {
    check_with(kb, profiles, CatalogOptions::default())
}

pub fn check_with(
    kb: &KnowledgeBase,
    profiles: &BTreeSet<Profile>,
    options: CatalogOptions,
) -> Result<ViolationReport, ViolationError> {
    let axioms = axiom_catalog_with(profiles, options);
    check_axioms(kb, profiles, &axioms)
}

/// Evaluates the given axioms in parallel; entries keep the input order.
pub fn check_axioms(
    kb: &KnowledgeBase,
    profiles: &BTreeSet<Profile>,
    axioms: &[NamedAxiom],
) -> Result<ViolationReport, ViolationError> {
    let results: Vec<Result<Vec<Witness>, ViolationError>> =
        axioms.par_iter().map(|a| find_violations(kb, a)).collect();
    let mut violations = Vec::new();
    for (axiom, witnesses) in axioms.iter().zip(results) {
        let witnesses = witnesses?;
        if !witnesses.is_empty() {
            violations.push(ViolationEntry {
                axiom: axiom.clone(),
                witnesses,
            });
        }
    }
    Ok(ViolationReport {
        profiles: profiles.clone(),
        axioms_checked: axioms.len(),
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub enum Verbosity {
    /// Summary line only.
    Quiet,
    /// One line per witness plus the summary.
    #[default]
    Normal,
    /// Also prints each violated axiom's formula.
    Full,
}

/// Renders a report as text, one `ID: citation: binding: message` line per
/// witness followed by a summary line.
pub fn explain(report: &ViolationReport, verbosity: Verbosity) -> String {
    let mut out = String::new();
    if verbosity >= Verbosity::Normal {
        for v in &report.violations {
            if verbosity == Verbosity::Full {
                let _ = writeln!(out, "{}: {}", v.axiom.id, v.axiom.formula);
            }
            for w in &v.witnesses {
                let _ = writeln!(
                    out,
                    "{}: {}: {}: {}",
                    v.axiom.id,
                    v.axiom.citation,
                    binding_text(&w.binding),
                    v.axiom.render_message(&w.binding)
                );
            }
        }
    }
    if report.is_empty() {
        out.push_str("OK: 0 violations");
    } else {
        let _ = write!(
            out,
            "FAIL: {} violations of {} axioms",
            report.witness_count(),
            report.violations.len()
        );
    }
    out
}

fn binding_text(b: &Binding) -> String {
    if b.is_empty() {
        "{}".to_string()
    } else {
        b.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folk::eval_naive;
    use crate::vocab::gfo_kb;

    fn bare() -> KnowledgeBase {
        let mut kb = gfo_kb();
        kb.assert_str("Artifact", &["x1"]).unwrap();
        kb
    }

    #[test]
    fn bare_artifact_violations() {
        let r = check(&bare(), &[Profile::Artifact].into()).unwrap();
        assert_eq!(r.violated_ids(), ["A4", "A5", "A6", "A9"]);
        for v in &r.violations {
            assert_eq!(v.witnesses.len(), 1);
            assert_eq!(v.witnesses[0].binding.to_string(), "x=x1");
            assert!(!eval_naive(&bare(), &v.axiom.formula, &Binding::new()).unwrap());
        }
    }

    #[test]
    fn empty_report_explains_ok() {
        let r = check(&gfo_kb(), &Profile::ALL.into()).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.axioms_checked, 28);
        assert_eq!(explain(&r, Verbosity::Normal), "OK: 0 violations");
    }

    #[test]
    fn explain_lines() {
        let r = check(&bare(), &[Profile::Artifact].into()).unwrap();
        let text = explain(&r, Verbosity::Normal);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("A4: §14 (4) \""));
        assert!(lines[0].ends_with(": x=x1: artifact x1 has no (or multiple) artifact kind"));
        assert_eq!(lines[4], "FAIL: 4 violations of 4 axioms");
        assert_eq!(explain(&r, Verbosity::Quiet), lines[4]);
        let full = explain(&r, Verbosity::Full);
        assert!(full.contains("A4: ∀x (Artifact(x) → ∃!K (ArtifKind(K) ∧ is-instance-of(x,K)))"), "{full}");
    }

    #[test]
    fn json_shape() {
        let r = check(&bare(), &[Profile::Artifact].into()).unwrap();
        let v = serde_json::to_value(r.to_json()).unwrap();
        assert_eq!(v["profiles"], serde_json::json!(["artifact"]));
        assert_eq!(v["violations"][0]["axiom"], "A4");
        assert_eq!(v["violations"][0]["citation"], "§14 (4)");
        assert_eq!(v["violations"][0]["witnesses"], serde_json::json!([{"x": "x1"}]));
        assert_eq!(v["counts"], serde_json::json!({"axioms_checked": 13, "violated": 4}));
        let text = serde_json::to_string(&r.to_json()).unwrap();
        assert!(text.starts_with("{\"profiles\":"));
    }

    #[test]
    fn constitution_counterexamples() {
        let mut kb = gfo_kb();
        kb.assert_str("consists_of", &["h", "h"]).unwrap();
        let r = check(&kb, &[Profile::Constitution].into()).unwrap();
        assert_eq!(r.violated_ids(), ["C1"]);

        let mut kb = gfo_kb();
        kb.assert_str("consists_of", &["a", "b"]).unwrap();
        kb.assert_str("consists_of", &["b", "a"]).unwrap();
        let r = check(&kb, &[Profile::Constitution].into()).unwrap();
        assert_eq!(r.violated_ids(), ["C2"]);
        assert_eq!(r.violations[0].witnesses.len(), 2);
    }
}
