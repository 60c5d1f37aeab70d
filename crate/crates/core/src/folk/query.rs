//! Conjunctive pattern queries and the textual atom syntax.
//!
//! Patterns are comma-separated atoms such as
//! `consists_of(?x, ?y), Stuff(?y)`. Arguments starting with `?` are
//! variables; anything else names an entity.

use std::collections::BTreeSet;

use thiserror::Error;

use super::formula::{Atom, Binding, Term};
use super::indexed::Index;
use crate::kb::{EntityId, KnowledgeBase};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("pattern syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("`{predicate}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        predicate: String,
        expected: usize,
        got: usize,
    },
}

/// Parses a comma-separated list of atoms.
pub fn parse_pattern(text: &str) -> Result<Vec<Atom>, PatternError> {
    let mut p = Cursor { text, pos: 0 };
    let mut atoms = Vec::new();
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty pattern"));
    }
    loop {
        atoms.push(p.atom()?);
        p.skip_ws();
        if p.at_end() {
            break;
        }
        p.expect(',')?;
    }
    Ok(atoms)
}

struct Cursor<'t> {
    text: &'t str,
    pos: usize,
}

impl Cursor<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, message: &str) -> PatternError {
        PatternError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PatternError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{c}`")))
        }
    }

    fn name(&mut self) -> Result<&str, PatternError> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn atom(&mut self) -> Result<Atom, PatternError> {
        let predicate = self.name()?.to_string();
        self.expect('(')?;
        let mut args = Vec::new();
        loop {
            self.skip_ws();
            let start = self.pos;
            let term = if self.peek() == Some('?') {
                self.pos += 1;
                Term::Var(self.name()?.to_string())
            } else {
                let name = self.name()?;
                Term::Const(EntityId::new(name).map_err(|_| PatternError::Syntax {
                    offset: start,
                    message: format!("invalid entity name `{name}`"),
                })?)
            };
            args.push(term);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.error("expected `,` or `)`")),
            }
        }
        Ok(Atom { predicate, args })
    }
}

/// Answers of a conjunctive pattern: every distinct binding of its
/// variables under which all atoms hold, in lexicographic order.
pub fn query(kb: &KnowledgeBase, pattern: &[Atom]) -> Result<Vec<Binding>, PatternError> {
    for a in pattern {
        let sig = kb
            .signature()
            .get(&a.predicate)
            .ok_or_else(|| PatternError::UnknownPredicate(a.predicate.clone()))?;
        if sig.arity() != a.args.len() {
            return Err(PatternError::ArityMismatch {
                predicate: a.predicate.clone(),
                expected: sig.arity(),
                got: a.args.len(),
            });
        }
    }
    let answers: BTreeSet<Binding> = Index::new(kb)
        .join(pattern, Binding::new())
        .into_iter()
        .collect();
    Ok(answers.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::PredicateSig;

    fn kb() -> KnowledgeBase {
        let mut kb = KnowledgeBase::with_predicates(vec![
            PredicateSig::unary("Stuff"),
            PredicateSig::binary("consists_of"),
            PredicateSig::binary("is-instance-of"),
        ])
        .unwrap();
        kb.assert_str("consists_of", &["house", "bricks"]).unwrap();
        kb.assert_str("consists_of", &["house", "mortar"]).unwrap();
        kb.assert_str("consists_of", &["wall", "bricks"]).unwrap();
        kb.assert_str("Stuff", &["bricks"]).unwrap();
        kb
    }

    #[test]
    fn parses_variables_and_constants() {
        let atoms = parse_pattern("consists_of(?x, bricks), is-instance-of(?x,?k)").unwrap();
        assert_eq!(atoms.len(), 2);
        assert_eq!(atoms[0].args[0], Term::var("x"));
        assert_eq!(atoms[0].args[1], Term::Const(EntityId::new("bricks").unwrap()));
        assert_eq!(atoms[1].predicate, "is-instance-of");
    }

    #[test]
    fn syntax_errors_have_offsets() {
        assert!(matches!(
            parse_pattern("consists_of(?x"),
            Err(PatternError::Syntax { offset: 14, .. })
        ));
        assert!(parse_pattern("").is_err());
        assert!(parse_pattern("P(a) Q(b)").is_err());
    }

    #[test]
    fn join_answers() {
        let answers = query(&kb(), &parse_pattern("consists_of(?x, ?y), Stuff(?y)").unwrap()).unwrap();
        let rendered: Vec<_> = answers.iter().map(ToString::to_string).collect();
        assert_eq!(rendered, ["x=house, y=bricks", "x=wall, y=bricks"]);
    }

    #[test]
    fn unknown_predicate() {
        assert_eq!(
            query(&kb(), &parse_pattern("Nope(?x)").unwrap()),
            Err(PatternError::UnknownPredicate("Nope".into()))
        );
    }
}
