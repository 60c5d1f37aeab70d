use std::fmt::Write as _;

use crate::kb::KnowledgeBase;
use crate::vocab::entry;

use super::{GFO_IRI, KB_IRI};

/// Prefix block that starts every serialized document.
pub fn prefix_block() -> String {
    format!("@prefix gfo: <{GFO_IRI}> .\n@prefix : <{KB_IRI}> .\n")
}

/// Canonical Turtle text of `kb`: the prefix block, a blank line, then one
/// statement per assertion in canonical order. Relation instances list
/// their roles in signature order.
pub fn serialize(kb: &KnowledgeBase) -> String {
    let mut out = prefix_block();
    let facts = kb.canonical_form();
    if facts.is_empty() {
        return out;
    }
    out.push('\n');
    for f in facts {
        let turtle = entry(&f.predicate).map_or(f.predicate.as_str(), |e| e.turtle);
        match f.args.as_slice() {
            [s] => {
                let _ = writeln!(out, ":{s} a gfo:{turtle} .");
            }
            [s, o] => {
                let _ = writeln!(out, ":{s} gfo:{turtle} :{o} .");
            }
            args => {
                let id = f.instance_id.as_ref().expect("n-ary facts are named");
                let _ = write!(out, ":{id} a gfo:{turtle}");
                let sig = kb.signature().get(&f.predicate).expect("asserted predicates are declared");
                for (role, arg) in sig.roles().iter().zip(args) {
                    let _ = write!(out, " ;\n    gfo:{role} :{arg}");
                }
                out.push_str(" .\n");
            }
        }
    }
    out
}
