//! Turtle subset reader and canonical writer.
//!
//! Unary facts are `:x a gfo:Type .`, binary facts `:x gfo:prop :y .`,
//! and n-ary facts are typed relation-instance nodes with one role triple
//! per argument. The grammar lives in `docs/turtle.ebnf`.

mod parse;
mod write;

pub use parse::{parse, DiagnosticKind, ParseDiagnostic};
pub use write::{prefix_block, serialize};

pub const GFO_IRI: &str = "https://example.org/gfo-artifact#";
pub const KB_IRI: &str = "https://example.org/kb#";
