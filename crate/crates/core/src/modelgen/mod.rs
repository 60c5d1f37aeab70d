//! Finite model search, compliant scaffolds and single-deletion mutants.

mod scaffold;
mod search;

pub use scaffold::{mutations, scaffold_artifact, ScaffoldOptions};
pub use search::{
    find_model, find_model_with, minimal_model_size, parse_facts, ModelError, ModelSearchResult,
    SearchOptions, Verdict, MAX_BOUND,
};
