use std::collections::BTreeMap;
use std::fmt;

use crate::kb::{EntityId, KnowledgeBase};
use crate::vocab::{entry_by_turtle, gfo_kb, is_role, Shape, VocabEntry};

use super::{GFO_IRI, KB_IRI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    Syntax,
    UnknownPredicate,
    Arity,
    MissingRole,
    DuplicateRole,
}

impl DiagnosticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticKind::Syntax => "syntax",
            DiagnosticKind::UnknownPredicate => "unknown-predicate",
            DiagnosticKind::Arity => "arity",
            DiagnosticKind::MissingRole => "missing-role",
            DiagnosticKind::DuplicateRole => "duplicate-role",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A problem found while reading a document. Positions are 1-based and
/// count characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.column, self.kind, self.message)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Prefix,
    A,
    Dot,
    Semi,
    Comma,
    Iri(String),
    Name { prefix: String, local: String },
    Bad(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Prefix => f.write_str("`@prefix`"),
            Tok::A => f.write_str("`a`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Iri(i) => write!(f, "`<{i}>`"),
            Tok::Name { prefix, local } => write!(f, "`{prefix}:{local}`"),
            Tok::Bad(s) => write!(f, "`{s}`"),
        }
    }
}

fn name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '-'
}

fn lex(text: &str) -> Vec<(Tok, Pos)> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    macro_rules! bump {
        () => {{
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else if c.is_some() {
                column += 1;
            }
            c
        }};
    }
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        match c {
            c if c.is_whitespace() => {
                bump!();
            }
            '#' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    bump!();
                }
            }
            '.' | ';' | ',' => {
                bump!();
                let t = match c {
                    '.' => Tok::Dot,
                    ';' => Tok::Semi,
                    _ => Tok::Comma,
                };
                out.push((t, pos));
            }
            '<' => {
                bump!();
                let mut iri = String::new();
                let tok = loop {
                    match chars.peek() {
                        Some('>') => {
                            bump!();
                            break Tok::Iri(iri);
                        }
                        Some(&c) if !c.is_whitespace() => {
                            iri.push(c);
                            bump!();
                        }
                        _ => break Tok::Bad(format!("<{iri}")),
                    }
                };
                out.push((tok, pos));
            }
            '@' => {
                bump!();
                let mut word = String::new();
                while chars.peek().is_some_and(|&c| name_char(c)) {
                    word.push(bump!().unwrap());
                }
                let tok = if word == "prefix" {
                    Tok::Prefix
                } else {
                    Tok::Bad(format!("@{word}"))
                };
                out.push((tok, pos));
            }
            c if name_char(c) || c == ':' => {
                let mut word = String::new();
                while chars.peek().is_some_and(|&c| name_char(c)) {
                    word.push(bump!().unwrap());
                }
                if chars.peek() == Some(&':') {
                    bump!();
                    let mut local = String::new();
                    while chars.peek().is_some_and(|&c| name_char(c)) {
                        local.push(bump!().unwrap());
                    }
                    out.push((Tok::Name { prefix: word, local }, pos));
                } else if word == "a" {
                    out.push((Tok::A, pos));
                } else {
                    out.push((Tok::Bad(word), pos));
                }
            }
            other => {
                bump!();
                out.push((Tok::Bad(other.to_string()), pos));
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
enum Verb {
    A,
    Gfo(String),
}

#[derive(Debug, Clone)]
struct Triple {
    subject: String,
    verb: Verb,
    verb_pos: Pos,
    object: String,
    object_pos: Pos,
}

struct Parser<'a> {
    toks: &'a [(Tok, Pos)],
    i: usize,
    end: Pos,
    diags: Vec<ParseDiagnostic>,
}

type Step<T> = Result<T, ParseDiagnostic>;

impl Parser<'_> {
    fn peek(&self) -> Option<&(Tok, Pos)> {
        self.toks.get(self.i)
    }

    fn pos(&self) -> Pos {
        self.peek().map_or(self.end, |t| t.1)
    }

    fn syntax(&self, pos: Pos, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic {
            line: pos.line,
            column: pos.column,
            kind: DiagnosticKind::Syntax,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseDiagnostic {
        match self.peek() {
            Some((Tok::Bad(s), p)) => self.syntax(*p, format!("unexpected `{s}`, expected {wanted}")),
            Some((t, p)) => self.syntax(*p, format!("unexpected {t}, expected {wanted}")),
            None => self.syntax(self.end, format!("unexpected end of input, expected {wanted}")),
        }
    }

    fn next(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.i).cloned();
        self.i += 1;
        t
    }

    fn eat(&mut self, want: &Tok, wanted: &str) -> Step<Pos> {
        match self.peek() {
            Some((t, p)) if t == want => {
                let p = *p;
                self.i += 1;
                Ok(p)
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// Skips past the next `.`.
    fn recover(&mut self) {
        while let Some((t, _)) = self.next() {
            if t == Tok::Dot {
                break;
            }
        }
    }

    fn document(&mut self) -> Vec<Triple> {
        let mut triples = Vec::new();
        while self.peek().is_some() {
            let result = if matches!(self.peek(), Some((Tok::Prefix, _))) {
                self.prefix().map(|()| Vec::new())
            } else {
                self.statement()
            };
            match result {
                Ok(t) => triples.extend(t),
                Err(d) => {
                    self.diags.push(d);
                    self.recover();
                }
            }
        }
        triples
    }

    fn prefix(&mut self) -> Step<()> {
        self.i += 1;
        let (name, pos) = match self.next() {
            Some((Tok::Name { prefix, local }, pos)) if local.is_empty() => (prefix, pos),
            _ => {
                self.i -= 1;
                return Err(self.unexpected("a prefix name such as `gfo:`"));
            }
        };
        let iri_pos = self.pos();
        let iri = match self.next() {
            Some((Tok::Iri(iri), _)) => iri,
            _ => {
                self.i -= 1;
                return Err(self.unexpected("an IRI"));
            }
        };
        let expected = match name.as_str() {
            "gfo" => GFO_IRI,
            "" => KB_IRI,
            _ => return Err(self.syntax(pos, format!("unsupported prefix `{name}:`"))),
        };
        if iri != expected {
            return Err(self.syntax(
                iri_pos,
                format!("prefix `{name}:` must be bound to <{expected}>"),
            ));
        }
        self.eat(&Tok::Dot, "`.`")?;
        Ok(())
    }

    /// `:local` in entity position.
    fn entity(&mut self) -> Step<(String, Pos)> {
        match self.peek().cloned() {
            Some((Tok::Name { prefix, local }, pos)) if prefix.is_empty() => {
                if EntityId::new(&local).is_err() {
                    return Err(self.syntax(pos, format!("`:{local}` is not a valid entity name")));
                }
                self.i += 1;
                Ok((local, pos))
            }
            _ => Err(self.unexpected("an entity `:name`")),
        }
    }

    /// `gfo:local` in verb or type position.
    fn term(&mut self) -> Step<(String, Pos)> {
        match self.peek().cloned() {
            Some((Tok::Name { prefix, local }, pos)) if prefix == "gfo" && !local.is_empty() => {
                self.i += 1;
                Ok((local, pos))
            }
            _ => Err(self.unexpected("a vocabulary term `gfo:name`")),
        }
    }

    fn statement(&mut self) -> Step<Vec<Triple>> {
        let (subject, _) = self.entity()?;
        let mut out = Vec::new();
        loop {
            let verb_pos = self.pos();
            let verb = match self.peek() {
                Some((Tok::A, _)) => {
                    self.i += 1;
                    Verb::A
                }
                _ => Verb::Gfo(self.term()?.0),
            };
            loop {
                let (object, object_pos) = match verb {
                    Verb::A => self.term()?,
                    Verb::Gfo(_) => self.entity()?,
                };
                out.push(Triple {
                    subject: subject.clone(),
                    verb: verb.clone(),
                    verb_pos,
                    object,
                    object_pos,
                });
                match self.peek() {
                    Some((Tok::Comma, _)) => self.i += 1,
                    _ => break,
                }
            }
            match self.peek() {
                Some((Tok::Semi, _)) => {
                    while matches!(self.peek(), Some((Tok::Semi, _))) {
                        self.i += 1;
                    }
                    if matches!(self.peek(), Some((Tok::Dot, _))) {
                        self.i += 1;
                        return Ok(out);
                    }
                }
                Some((Tok::Dot, _)) => {
                    self.i += 1;
                    return Ok(out);
                }
                _ => return Err(self.unexpected("`;`, `,` or `.`")),
            }
        }
    }
}

/// Everything said about one subject.
#[derive(Default)]
struct Node {
    types: Vec<(String, Pos)>,
    props: Vec<(String, Pos, String, Pos)>,
}

/// Parses a document into a knowledge base over the GFO signature.
///
/// All problems are collected; the first one does not stop the scan.
/// Diagnostics are returned in document order.
pub fn parse(text: &str) -> Result<KnowledgeBase, Vec<ParseDiagnostic>> {
    let toks = lex(text);
    let end = end_pos(text);
    let mut p = Parser {
        toks: &toks,
        i: 0,
        end,
        diags: Vec::new(),
    };
    let triples = p.document();
    let mut diags = p.diags;

    let mut nodes: BTreeMap<String, Node> = BTreeMap::new();
    for t in triples {
        let node = nodes.entry(t.subject).or_default();
        match t.verb {
            Verb::A => node.types.push((t.object, t.object_pos)),
            Verb::Gfo(v) => node.props.push((v, t.verb_pos, t.object, t.object_pos)),
        }
    }

    let diag = |pos: Pos, kind, message: String| ParseDiagnostic {
        line: pos.line,
        column: pos.column,
        kind,
        message,
    };

    // Relation-instance nodes: subjects typed with an n-ary relation.
    let instance_type = |node: &Node| {
        node.types
            .iter()
            .find_map(|(t, p)| entry_by_turtle(t).filter(|e| e.shape == Shape::Reified).map(|e| (e, *p)))
    };
    let instances: BTreeMap<&str, (&'static VocabEntry, Pos)> = nodes
        .iter()
        .filter_map(|(s, n)| instance_type(n).map(|t| (s.as_str(), t)))
        .collect();

    let mut unary: Vec<(&'static str, &str)> = Vec::new();
    let mut binary: Vec<(&'static str, &str, &str)> = Vec::new();
    let mut reified: Vec<(&'static str, Vec<&str>, &str)> = Vec::new();

    for (subject, node) in &nodes {
        let inst = instances.get(subject.as_str()).copied();
        for (t, pos) in &node.types {
            match entry_by_turtle(t) {
                None if is_role(t) => diags.push(diag(
                    *pos,
                    DiagnosticKind::Arity,
                    format!("role gfo:{t} used as a type"),
                )),
                None => diags.push(diag(
                    *pos,
                    DiagnosticKind::UnknownPredicate,
                    format!("unknown type gfo:{t}"),
                )),
                Some(e) => match (e.shape, inst) {
                    (Shape::Binary, _) => diags.push(diag(
                        *pos,
                        DiagnosticKind::Arity,
                        format!("binary relation gfo:{t} used as a type"),
                    )),
                    (Shape::Unary, None) => unary.push((e.name, subject)),
                    (Shape::Unary, Some(_)) => diags.push(diag(
                        *pos,
                        DiagnosticKind::Arity,
                        format!("relation instance :{subject} cannot be a gfo:{t}"),
                    )),
                    (Shape::Reified, Some((first, _))) => {
                        if e.name != first.name {
                            diags.push(diag(
                                *pos,
                                DiagnosticKind::DuplicateRole,
                                format!("relation instance :{subject} already has type gfo:{}", first.turtle),
                            ));
                        }
                    }
                    (Shape::Reified, None) => unreachable!("typed with an n-ary relation"),
                },
            }
        }

        let mut roles: BTreeMap<&str, &str> = BTreeMap::new();
        for (v, vpos, object, opos) in &node.props {
            if instances.contains_key(object.as_str()) {
                diags.push(diag(
                    *opos,
                    DiagnosticKind::Arity,
                    format!("relation instance :{object} used as an entity"),
                ));
                continue;
            }
            match (entry_by_turtle(v), inst) {
                (Some(e), None) if e.shape == Shape::Binary => binary.push((e.name, subject, object)),
                (Some(e), Some(_)) if e.shape == Shape::Binary => diags.push(diag(
                    *vpos,
                    DiagnosticKind::Arity,
                    format!("relation instance :{subject} cannot be the subject of gfo:{v}"),
                )),
                (Some(e), _) => diags.push(diag(
                    *vpos,
                    DiagnosticKind::Arity,
                    format!("gfo:{} is a type, not a property", e.turtle),
                )),
                (None, Some((e, _))) if e.roles.contains(&v.as_str()) => {
                    match roles.get(v.as_str()) {
                        Some(prev) if prev != object => diags.push(diag(
                            *vpos,
                            DiagnosticKind::DuplicateRole,
                            format!("role gfo:{v} of :{subject} already set to :{prev}"),
                        )),
                        _ => {
                            roles.insert(v.as_str(), object.as_str());
                        }
                    }
                }
                (None, Some((e, _))) if is_role(v) => diags.push(diag(
                    *vpos,
                    DiagnosticKind::Arity,
                    format!("gfo:{} has no role gfo:{v}", e.turtle),
                )),
                (None, None) if is_role(v) => diags.push(diag(
                    *vpos,
                    DiagnosticKind::Arity,
                    format!("role gfo:{v} on :{subject}, which is not a relation instance"),
                )),
                (None, _) => diags.push(diag(
                    *vpos,
                    DiagnosticKind::UnknownPredicate,
                    format!("unknown property gfo:{v}"),
                )),
            }
        }

        if let Some((e, pos)) = inst {
            let missing: Vec<&str> = e.roles.iter().copied().filter(|r| !roles.contains_key(r)).collect();
            if missing.is_empty() {
                let args = e.roles.iter().map(|r| roles[r]).collect();
                reified.push((e.name, args, subject));
            } else {
                diags.push(diag(
                    pos,
                    DiagnosticKind::MissingRole,
                    format!(
                        "gfo:{} instance :{subject} lacks {}",
                        e.turtle,
                        missing.iter().map(|r| format!("gfo:{r}")).collect::<Vec<_>>().join(", ")
                    ),
                ));
            }
        }
    }

    if !diags.is_empty() {
        diags.sort();
        diags.dedup();
        return Err(diags);
    }

    let id = |s: &str| EntityId::new(s).expect("lexer accepts identifiers only");
    let mut kb = gfo_kb();
    for (p, s) in unary {
        kb.assert_fact(p, &[id(s)]).expect("unary vocabulary entry");
    }
    for (p, s, o) in binary {
        kb.assert_fact(p, &[id(s), id(o)]).expect("binary vocabulary entry");
    }
    for (p, args, node) in reified {
        let args: Vec<EntityId> = args.into_iter().map(id).collect();
        kb.assert_instance(p, &args, id(node))
            .expect("instance names are disjoint from entities");
    }
    Ok(kb)
}

fn end_pos(text: &str) -> Pos {
    let line = text.matches('\n').count() + 1;
    let last = text.rsplit('\n').next().unwrap_or("");
    Pos {
        line,
        column: last.chars().count() + 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<(usize, usize, DiagnosticKind)> {
        parse(text)
            .unwrap_err()
            .into_iter()
            .map(|d| (d.line, d.column, d.kind))
            .collect()
    }

    #[test]
    fn smallest_document() {
        let kb = parse(":x1 a gfo:Artifact .").unwrap();
        assert_eq!(kb.entity_count(), 1);
        assert!(kb.contains("Artifact", &[EntityId::new("x1").unwrap()]));
    }

    #[test]
    fn binary_name_mapping() {
        let kb = parse(":h gfo:consistsOf :b .").unwrap();
        assert_eq!(kb.canonical_form()[0].to_string(), "consists_of(h, b)");
    }

    #[test]
    fn reified_instance_keeps_its_name() {
        let kb = parse(":i1 a gfo:IntendToBuild ; gfo:agent :s ; gfo:object :x ; gfo:kind :K .").unwrap();
        let f = &kb.canonical_form()[0];
        assert_eq!(f.to_string(), "intendToBuild(s, x, K)");
        assert_eq!(f.instance_id.as_ref().unwrap().as_str(), "i1");
        assert_eq!(kb.entity_count(), 3);
    }

    #[test]
    fn missing_roles_listed() {
        let d = parse(":i1 a gfo:IntendToBuild ; gfo:agent :s .").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].kind, DiagnosticKind::MissingRole);
        assert_eq!((d[0].line, d[0].column), (1, 7));
        assert!(d[0].message.contains("gfo:object, gfo:kind"));
    }

    #[test]
    fn lists_and_comments() {
        let text = "# header\n:b a gfo:Artifact, gfo:Individual ;\n   gfo:hasMember :w, :h . # trailing\n";
        let kb = parse(text).unwrap();
        assert_eq!(kb.len(), 4);
    }

    #[test]
    fn prefixes_must_match() {
        let ok = format!("@prefix gfo: <{GFO_IRI}> .\n@prefix : <{KB_IRI}> .\n:x a gfo:Gas .");
        assert!(parse(&ok).is_ok());
        assert_eq!(
            kinds("@prefix gfo: <http://other#> .\n:x a gfo:Gas ."),
            [(1, 14, DiagnosticKind::Syntax)]
        );
        assert_eq!(
            kinds("@prefix ex: <http://other#> ."),
            [(1, 9, DiagnosticKind::Syntax)]
        );
    }

    #[test]
    fn recovers_at_statement_boundaries() {
        let text = ":a a gfo:Gas\n:b gfo:consistsOf .\n:c a gfo:Nope .\n:d a gfo:Gas .";
        assert_eq!(
            kinds(text),
            [
                (2, 1, DiagnosticKind::Syntax),
                (3, 6, DiagnosticKind::UnknownPredicate),
            ]
        );
        let text = ":a a gfo:Gas ;\n:c a gfo:Nope .\n:d gfo:consistsOf :e ; gfo:wat :f .";
        assert_eq!(
            kinds(text),
            [(2, 1, DiagnosticKind::Syntax), (3, 24, DiagnosticKind::UnknownPredicate)]
        );
    }

    #[test]
    fn semantic_diagnostics() {
        assert_eq!(kinds(":x a gfo:consistsOf ."), [(1, 6, DiagnosticKind::Arity)]);
        assert_eq!(kinds(":x gfo:Artifact :y ."), [(1, 4, DiagnosticKind::Arity)]);
        assert_eq!(kinds(":x gfo:agent :y ."), [(1, 4, DiagnosticKind::Arity)]);
        assert_eq!(kinds(":x a gfo:Widget ."), [(1, 6, DiagnosticKind::UnknownPredicate)]);
        let dup = ":i a gfo:ConceptOf ; gfo:concept :c ; gfo:kind :K ; gfo:features :Q ; gfo:kind :L .";
        assert_eq!(kinds(dup), [(1, 71, DiagnosticKind::DuplicateRole)]);
        let used = ":i a gfo:ConceptOf ; gfo:concept :c ; gfo:kind :K ; gfo:features :Q .\n:x gfo:hasMember :i .";
        assert_eq!(kinds(used), [(2, 18, DiagnosticKind::Arity)]);
    }

    #[test]
    fn repeated_role_with_same_value_is_harmless() {
        let t = ":i a gfo:ConceptOf ; gfo:concept :c ; gfo:kind :K, :K ; gfo:features :Q .";
        assert_eq!(parse(t).unwrap().len(), 1);
    }

    #[test]
    fn lexical_errors() {
        assert_eq!(kinds(":x a gfo:Gas !"), [(1, 14, DiagnosticKind::Syntax)]);
        assert_eq!(kinds("x a gfo:Gas ."), [(1, 1, DiagnosticKind::Syntax)]);
        assert_eq!(kinds(":x a gfo:Gas"), [(1, 13, DiagnosticKind::Syntax)]);
        assert_eq!(kinds(":-x a gfo:Gas ."), [(1, 1, DiagnosticKind::Syntax)]);
    }

    #[test]
    fn columns_count_characters() {
        assert_eq!(kinds("# ∀∃\n  :x a gfo:Nöpe ."), [(2, 13, DiagnosticKind::Syntax)]);
    }
}
