//! AVM text format.
//!
//! ```text
//! structure := "(" "dag" feature* ")"
//! feature   := "(" LABEL value ")"
//! value     := TAG | TAG? body
//! body      := ATOM | "_" | "(" ")" | feature+
//! TAG       := "#" DIGITS
//! ```
//!
//! `_` is an unbound variable and `()` an empty complex node. A tag marks a
//! shared node: the first occurrence may carry the body, later occurrences
//! are bare references; a tag that never receives a body is a shared
//! variable. The printer emits tags numbered from 1 in
//! depth-first order, so canonical input round-trips byte-identically
//! modulo whitespace.

use std::collections::HashMap;

use thiserror::Error;

use super::{compact, FeatureStructure, Label, Node, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AvmError {
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected `{found}` at byte {pos}, expected {expected}")]
    Unexpected { found: String, pos: usize, expected: &'static str },
    #[error("tag #{0} has two bodies")]
    TagRedefined(u32),
    #[error("feature `{0}` appears twice on one node")]
    DuplicateFeature(String),
    #[error("structure is cyclic")]
    Cyclic,
    #[error("trailing input at byte {0}")]
    Trailing(usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Tag(u32),
    Sym(String),
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, AvmError> {
    let mut out = Vec::new();
    let bytes: Vec<char> = text.chars().collect();
    let mut offsets = Vec::with_capacity(bytes.len());
    let mut off = 0;
    for c in &bytes {
        offsets.push(off);
        off += c.len_utf8();
    }
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = offsets[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '(' {
            out.push((Tok::Open, pos));
            i += 1;
        } else if c == ')' {
            out.push((Tok::Close, pos));
            i += 1;
        } else if c == '#' {
            let start = i + 1;
            let mut j = start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            let digits: String = bytes[start..j].iter().collect();
            let n = digits.parse().map_err(|_| AvmError::Unexpected {
                found: "#".into(),
                pos,
                expected: "a numbered tag",
            })?;
            out.push((Tok::Tag(n), pos));
            i = j;
        } else {
            let start = i;
            while i < bytes.len() && !bytes[i].is_whitespace() && !"()#".contains(bytes[i]) {
                i += 1;
            }
            out.push((Tok::Sym(bytes[start..i].iter().collect()), offsets[start]));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    nodes: Vec<Node>,
    tags: HashMap<u32, (NodeId, bool)>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn next(&mut self) -> Result<(Tok, usize), AvmError> {
        let t = self.toks.get(self.pos).cloned().ok_or(AvmError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn unexpected(tok: (Tok, usize), expected: &'static str) -> AvmError {
        let found = match tok.0 {
            Tok::Open => "(".to_string(),
            Tok::Close => ")".to_string(),
            Tok::Tag(n) => format!("#{n}"),
            Tok::Sym(s) => s,
        };
        AvmError::Unexpected { found, pos: tok.1, expected }
    }

    fn expect_open(&mut self) -> Result<(), AvmError> {
        match self.next()? {
            (Tok::Open, _) => Ok(()),
            t => Err(Self::unexpected(t, "`(`")),
        }
    }

    fn alloc(&mut self, node: Node) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    /// Parses a run of `(label value)` groups, stopping before the first
    /// token that does not open a group.
    fn feature_run(&mut self) -> Result<Vec<(Label, NodeId)>, AvmError> {
        let mut edges: Vec<(Label, NodeId)> = Vec::new();
        while let Some(Tok::Open) = self.peek() {
            self.pos += 1;
            let label = match self.next()? {
                (Tok::Sym(s), _) => Label::new(s),
                t => return Err(Self::unexpected(t, "a feature name")),
            };
            if label.as_str() != super::ARG && edges.iter().any(|(l, _)| *l == label) {
                return Err(AvmError::DuplicateFeature(label.to_string()));
            }
            let value = self.value()?;
            match self.next()? {
                (Tok::Close, _) => {}
                t => return Err(Self::unexpected(t, "`)` closing the feature")),
            }
            edges.push((label, value));
        }
        Ok(edges)
    }

    fn value(&mut self) -> Result<NodeId, AvmError> {
        let tag = if let Some(Tok::Tag(n)) = self.peek() {
            let n = *n;
            self.pos += 1;
            Some(n)
        } else {
            None
        };
        let has_body = !matches!(self.peek(), Some(Tok::Close) | None);
        let body = if has_body { Some(self.body()?) } else { None };
        match (tag, body) {
            (None, Some(node)) => Ok(self.alloc(node)),
            (None, None) => Err(match self.next() {
                Ok(t) => Self::unexpected(t, "a value"),
                Err(e) => e,
            }),
            (Some(n), body) => {
                let id = match self.tags.get(&n) {
                    Some(&(id, _)) => id,
                    None => {
                        let id = self.alloc(Node::Var);
                        self.tags.insert(n, (id, false));
                        id
                    }
                };
                if let Some(node) = body {
                    let entry = self.tags.get_mut(&n).expect("tag registered");
                    if entry.1 {
                        return Err(AvmError::TagRedefined(n));
                    }
                    entry.1 = true;
                    self.nodes[id] = node;
                }
                Ok(id)
            }
        }
    }

    fn body(&mut self) -> Result<Node, AvmError> {
        match self.peek() {
            Some(Tok::Sym(s)) if s == "_" => {
                self.pos += 1;
                Ok(Node::Var)
            }
            Some(Tok::Sym(s)) => {
                let l = Label::new(s.clone());
                self.pos += 1;
                Ok(Node::Atom(l))
            }
            Some(Tok::Open) => {
                if matches!(self.toks.get(self.pos + 1), Some((Tok::Close, _))) {
                    self.pos += 2;
                    return Ok(Node::Complex(Vec::new()));
                }
                let edges = self.feature_run()?;
                Ok(Node::Complex(edges))
            }
            Some(_) => {
                let t = self.next()?;
                Err(Self::unexpected(t, "a value"))
            }
            None => Err(AvmError::Eof),
        }
    }
}

pub(super) fn parse(text: &str) -> Result<FeatureStructure, AvmError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, nodes: Vec::new(), tags: HashMap::new() };
    p.expect_open()?;
    match p.next()? {
        (Tok::Sym(s), _) if s == "dag" => {}
        t => return Err(Parser::unexpected(t, "`dag`")),
    }
    let root_node = match p.peek() {
        Some(Tok::Sym(_)) => p.body()?,
        _ => Node::Complex(p.feature_run()?),
    };
    match p.next()? {
        (Tok::Close, _) => {}
        t => return Err(Parser::unexpected(t, "`(` or `)`")),
    }
    if let Some((_, pos)) = p.toks.get(p.pos) {
        return Err(AvmError::Trailing(*pos));
    }
    let root = p.alloc(root_node);
    compact(&p.nodes, root, |n| n).map_err(|_| AvmError::Cyclic)
}

pub(super) fn print(fs: &FeatureStructure) -> String {
    let nodes = fs.nodes();
    let mut indegree = vec![0usize; nodes.len()];
    for node in nodes {
        if let Node::Complex(edges) = node {
            for (_, c) in edges {
                indegree[*c] += 1;
            }
        }
    }
    let mut tags: HashMap<NodeId, u32> = HashMap::new();
    let mut out = String::from("(dag");
    match &nodes[fs.root()] {
        Node::Complex(edges) => {
            for (l, c) in edges {
                out.push_str(" (");
                out.push_str(l.as_str());
                value(nodes, *c, &indegree, &mut tags, &mut out);
                out.push(')');
            }
        }
        // Non-complex roots only arise from substructure access.
        Node::Atom(l) => {
            out.push(' ');
            out.push_str(l.as_str());
        }
        Node::Var => out.push_str(" _"),
    }
    out.push(')');
    out
}

fn value(
    nodes: &[Node],
    id: NodeId,
    indegree: &[usize],
    tags: &mut HashMap<NodeId, u32>,
    out: &mut String,
) {
    if indegree[id] > 1 {
        if let Some(t) = tags.get(&id) {
            out.push_str(&format!(" #{t}"));
            return;
        }
        let t = tags.len() as u32 + 1;
        tags.insert(id, t);
        out.push_str(&format!(" #{t}"));
    }
    match &nodes[id] {
        Node::Var => out.push_str(" _"),
        Node::Atom(l) => {
            out.push(' ');
            out.push_str(l.as_str());
        }
        Node::Complex(edges) if edges.is_empty() => out.push_str(" ()"),
        Node::Complex(edges) => {
            for (l, c) in edges {
                out.push_str(" (");
                out.push_str(l.as_str());
                value(nodes, *c, indegree, tags, out);
                out.push(')');
            }
        }
    }
}
