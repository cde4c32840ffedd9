//! Lexicon files, the bundled Japanese sample, and token segmentation.
//!
//! ```text
//! ; comment
//! (entry "yom-" (kind verb-root)
//!   (sem \x y z.read(x,y,z))
//!   (dag (val (cat S)) (arg (cat N) (role agent)) ...))
//! ```
//!
//! Markers (`case-marker`, `tense-marker`) have no `sem`. An optional
//! `(origin derived)` flags entries that are not part of the sample grammar.

mod segment;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::feature_dag::{AvmError, FeatureStructure};
use crate::lambda_core::{alpha_eq, ParseError, Style, Term};

pub use segment::{join, lookup, segment, tokenize, Lexeme, Morpheme, SegmentError};

pub const JAPANESE_CORE: &str = include_str!("../../lexicon/japanese_core.lex");
pub const JAPANESE_DERIVED: &str = include_str!("../../lexicon/japanese_derived.lex");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    Noun,
    CaseMarker,
    CaseMarkedNoun,
    VerbRoot,
    Auxiliary,
    TenseMarker,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Noun => "noun",
            Kind::CaseMarker => "case-marker",
            Kind::CaseMarkedNoun => "case-marked-noun",
            Kind::VerbRoot => "verb-root",
            Kind::Auxiliary => "auxiliary",
            Kind::TenseMarker => "tense-marker",
        }
    }

    fn parse(s: &str) -> Option<Kind> {
        [Kind::Noun, Kind::CaseMarker, Kind::CaseMarkedNoun, Kind::VerbRoot, Kind::Auxiliary, Kind::TenseMarker]
            .into_iter()
            .find(|k| k.as_str() == s)
    }

    pub fn is_marker(self) -> bool {
        matches!(self, Kind::CaseMarker | Kind::TenseMarker)
    }

    pub fn is_verbal(self) -> bool {
        matches!(self, Kind::VerbRoot | Kind::Auxiliary)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Origin {
    #[default]
    Sample,
    Derived,
}

#[derive(Clone, Debug)]
pub struct LexiconEntry {
    pub surface: String,
    pub kind: Kind,
    pub sem: Option<Term>,
    pub cat: FeatureStructure,
    pub origin: Origin,
}

impl LexiconEntry {
    pub fn spawns_membrane(&self) -> bool {
        self.kind.is_verbal()
    }

    /// The surface with boundary hyphens removed: `-ase-` ↦ `ase`.
    pub fn stem(&self) -> &str {
        self.surface.trim_matches('-')
    }
}

impl PartialEq for LexiconEntry {
    fn eq(&self, other: &Self) -> bool {
        self.surface == other.surface
            && self.kind == other.kind
            && self.origin == other.origin
            && self.cat == other.cat
            && match (&self.sem, &other.sem) {
                (Some(a), Some(b)) => alpha_eq(a, b),
                (None, None) => true,
                _ => false,
            }
    }
}

impl fmt::Display for LexiconEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(entry \"{}\" (kind {})", self.surface, self.kind)?;
        if self.origin == Origin::Derived {
            f.write_str(" (origin derived)")?;
        }
        if let Some(sem) = &self.sem {
            write!(f, " (sem {})", sem.display(Style::Ascii))?;
        }
        write!(f, " {})", self.cat)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LexiconError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: unknown kind `{kind}`")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: bad dag: {source}")]
    Avm { line: usize, source: AvmError },
    #[error("line {line}: bad sem: {source}")]
    Sem { line: usize, source: ParseError },
    #[error("line {line}: `{surface}` has {binders} binders but {slots} arg slots")]
    Arity { line: usize, surface: String, binders: usize, slots: usize },
    #[error("line {line}: `{surface}` needs a sem term")]
    MissingSem { line: usize, surface: String },
    #[error("line {line}: duplicate surface `{surface}`")]
    Duplicate { line: usize, surface: String },
}

/// Entries keyed by surface. Immutable once loaded.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

impl Lexicon {
    pub fn load(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::default();
        for (line, entry) in read_entries(text)? {
            lex.insert(line, entry)?;
        }
        Ok(lex)
    }

    pub fn bundled_core() -> Lexicon {
        Lexicon::load(JAPANESE_CORE).expect("bundled lexicon is well-formed")
    }

    /// Core plus the derived passive auxiliary.
    pub fn bundled_with_derived() -> Lexicon {
        let mut lex = Lexicon::bundled_core();
        lex.merge(Lexicon::load(JAPANESE_DERIVED).expect("bundled lexicon is well-formed"))
            .expect("bundled files are disjoint");
        lex
    }

    /// Adds every entry of `other`; surfaces must stay unique.
    pub fn merge(&mut self, other: Lexicon) -> Result<(), LexiconError> {
        for (_, e) in other.entries {
            self.insert(0, e)?;
        }
        Ok(())
    }

    fn insert(&mut self, line: usize, entry: LexiconEntry) -> Result<(), LexiconError> {
        if self.entries.contains_key(&entry.surface) {
            return Err(LexiconError::Duplicate { line, surface: entry.surface });
        }
        self.entries.insert(entry.surface.clone(), entry);
        Ok(())
    }

    pub fn get(&self, surface: &str) -> Option<&LexiconEntry> {
        self.entries.get(surface)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexiconEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry whose sem is the given constant, e.g. `K` ↦ `Ken`.
    pub fn by_constant(&self, name: &str) -> Option<&LexiconEntry> {
        self.entries.values().find(|e| matches!(&e.sem, Some(Term::Const(c)) if c == name))
    }
}

impl fmt::Display for Lexicon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.entries.values() {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

// ---- reader ----

struct Reader<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn line(&self, pos: usize) -> usize {
        1 + self.src[..pos.min(self.src.len())].iter().filter(|&&b| b == b'\n').count()
    }

    fn skip(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn err(&self, msg: impl Into<String>) -> LexiconError {
        LexiconError::Malformed { line: self.line(self.pos), msg: msg.into() }
    }

    fn expect(&mut self, b: u8) -> Result<(), LexiconError> {
        self.skip();
        if self.src.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected `{}`", b as char)))
        }
    }

    fn word(&mut self) -> Result<&'a str, LexiconError> {
        self.skip();
        let start = self.pos;
        while self.pos < self.src.len() && !matches!(self.src[self.pos], b'(' | b')' | b'"') && !self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a word"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("split at ascii"))
    }

    fn string(&mut self) -> Result<String, LexiconError> {
        self.expect(b'"')?;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos] != b'"' {
            self.pos += 1;
        }
        if self.pos == self.src.len() {
            return Err(self.err("unterminated string"));
        }
        let s = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        self.pos += 1;
        Ok(s)
    }

    /// Raw text up to the `)` closing the current form, with comments blanked.
    fn balanced(&mut self) -> Result<String, LexiconError> {
        let start = self.pos;
        let mut depth = 0usize;
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let b = self.src[self.pos];
            match b {
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                    continue;
                }
                b'(' => depth += 1,
                b')' if depth == 0 => {
                    return Ok(String::from_utf8_lossy(&out).trim().to_string());
                }
                b')' => depth -= 1,
                _ => {}
            }
            out.push(b);
            self.pos += 1;
        }
        self.pos = start;
        Err(self.err("unbalanced parentheses"))
    }
}

fn read_entries(text: &str) -> Result<Vec<(usize, LexiconEntry)>, LexiconError> {
    let mut r = Reader { src: text.as_bytes(), pos: 0 };
    let mut out = Vec::new();
    loop {
        r.skip();
        if r.pos >= r.src.len() {
            return Ok(out);
        }
        let line = r.line(r.pos);
        r.expect(b'(')?;
        if r.word()? != "entry" {
            return Err(LexiconError::Malformed { line, msg: "expected `(entry`".into() });
        }
        let surface = r.string()?;
        let (mut kind, mut sem, mut dag, mut origin) = (None, None, None, Origin::Sample);
        loop {
            r.skip();
            if r.src.get(r.pos) == Some(&b')') {
                r.pos += 1;
                break;
            }
            r.expect(b'(')?;
            let field_line = r.line(r.pos);
            let name = r.word()?;
            match name {
                "kind" => {
                    let k = r.word()?;
                    kind = Some(Kind::parse(k).ok_or_else(|| LexiconError::UnknownKind { line: field_line, kind: k.into() })?);
                    r.expect(b')')?;
                }
                "origin" => {
                    origin = match r.word()? {
                        "derived" => Origin::Derived,
                        "sample" => Origin::Sample,
                        o => return Err(LexiconError::Malformed { line: field_line, msg: format!("unknown origin `{o}`") }),
                    };
                    r.expect(b')')?;
                }
                "sem" => {
                    let body = r.balanced()?;
                    r.pos += 1;
                    sem = Some(Term::parse(&body).map_err(|source| LexiconError::Sem { line: field_line, source })?);
                }
                "dag" => {
                    let body = r.balanced()?;
                    r.pos += 1;
                    let fs = FeatureStructure::parse(&format!("(dag {body})"))
                        .map_err(|source| LexiconError::Avm { line: field_line, source })?;
                    dag = Some(fs);
                }
                other => {
                    return Err(LexiconError::Malformed { line: field_line, msg: format!("unknown field `{other}`") })
                }
            }
        }
        let kind = kind.ok_or(LexiconError::Malformed { line, msg: format!("`{surface}` has no kind") })?;
        let cat = dag.ok_or(LexiconError::Malformed { line, msg: format!("`{surface}` has no dag") })?;
        if sem.is_none() && !kind.is_marker() {
            return Err(LexiconError::MissingSem { line, surface });
        }
        if let Some(t) = &sem {
            let (binders, slots) = (t.binder_count(), cat.arity());
            if binders != slots {
                return Err(LexiconError::Arity { line, surface, binders, slots });
            }
        }
        out.push((line, LexiconEntry { surface, kind, sem, cat, origin }));
    }
}
