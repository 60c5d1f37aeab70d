//! GFO artifact vocabulary, axiom catalog and validation reports.
//!
//! Axioms are integrity constraints over the asserted facts: a knowledge
//! base complies with a profile iff no catalog axiom of that profile has a
//! violating binding.

mod catalog;
mod report;
mod signature;

pub use catalog::{
    axiom_by_id, axiom_catalog, axiom_catalog_with, parse_profiles, self_check, CatalogError,
    CatalogOptions, Citation, NamedAxiom, Profile, UnknownProfile,
};
pub use report::{
    check, check_axioms, check_with, explain, Counts, ReportJson, Verbosity, ViolationEntry,
    ViolationJson, ViolationReport,
};
pub use signature::{
    entry, entry_by_turtle, gfo_kb, gfo_signature, is_role, resolve_predicate, Shape, VocabEntry,
    VOCABULARY,
};
