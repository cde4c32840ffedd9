//! Feature structures (PATR-style DAGs) used as categories, their
//! unification, and the case/role unification cost model.
//!
//! A [`FeatureStructure`] is an immutable, compacted node arena. Leaves are
//! atomic [`Label`]s or unbound variables; complex nodes carry an ordered
//! edge list in which every feature name is unique except `arg`, whose
//! repeated edges form the ordered argument list of a functional category.

mod avm;
mod cost;
mod unify;

use std::collections::HashMap;
use std::fmt;

pub use avm::AvmError;
pub use cost::{parse_rational, Cost, CostDelta, CostModel, CostModelError, Weight};
pub use unify::{binding_label, undo, unify, UnifierRecord, UnifyFailure};

/// Feature name of the ordered argument list.
pub const ARG: &str = "arg";

/// A symbol from the single open alphabet of categories, cases, roles and
/// feature names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(String);

impl Label {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "labels are non-empty");
        Label(name)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

pub(crate) type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Node {
    Var,
    Atom(Label),
    Complex(Vec<(Label, NodeId)>),
}

/// An acyclic feature graph with optional reentrancy.
///
/// Equality is graph isomorphism: feature order (other than the relative
/// order of `arg` edges) and variable identity do not matter.
#[derive(Clone)]
pub struct FeatureStructure {
    nodes: Vec<Node>,
    root: NodeId,
}

impl FeatureStructure {
    /// An unbound variable.
    pub fn var() -> Self {
        FeatureStructure { nodes: vec![Node::Var], root: 0 }
    }

    pub fn atom(label: impl Into<Label>) -> Self {
        FeatureStructure { nodes: vec![Node::Atom(label.into())], root: 0 }
    }

    /// A complex node with no features.
    pub fn empty() -> Self {
        FeatureStructure { nodes: vec![Node::Complex(Vec::new())], root: 0 }
    }

    /// Parses the AVM text form, e.g. `(dag (cat N) (case nom))`.
    pub fn parse(text: &str) -> Result<Self, AvmError> {
        avm::parse(text)
    }

    /// Prints the AVM text form on one line.
    pub fn to_avm(&self) -> String {
        avm::print(self)
    }

    pub(crate) fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub(crate) fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_var(&self) -> bool {
        matches!(self.nodes[self.root], Node::Var)
    }

    /// The root's atomic value, if the root is an atom.
    pub fn as_atom(&self) -> Option<&Label> {
        match &self.nodes[self.root] {
            Node::Atom(l) => Some(l),
            _ => None,
        }
    }

    fn edges_of(&self, node: NodeId) -> &[(Label, NodeId)] {
        match &self.nodes[node] {
            Node::Complex(edges) => edges,
            _ => &[],
        }
    }

    fn follow(&self, path: &[&str]) -> Option<NodeId> {
        let mut cur = self.root;
        for step in path {
            cur = self
                .edges_of(cur)
                .iter()
                .find(|(l, _)| l.as_str() == *step && l.as_str() != ARG)
                .map(|(_, n)| *n)?;
        }
        Some(cur)
    }

    /// Atomic value at a feature path (never descends through `arg`).
    pub fn atom_at(&self, path: &[&str]) -> Option<&Label> {
        match &self.nodes[self.follow(path)?] {
            Node::Atom(l) => Some(l),
            _ => None,
        }
    }

    /// Substructure at a feature path, copied out with its internal sharing.
    pub fn get(&self, path: &[&str]) -> Option<FeatureStructure> {
        self.follow(path).map(|n| self.extract(n))
    }

    /// Ordered argument substructures of the root.
    pub fn args(&self) -> Vec<FeatureStructure> {
        self.edges_of(self.root)
            .iter()
            .filter(|(l, _)| l.as_str() == ARG)
            .map(|(_, n)| self.extract(*n))
            .collect()
    }

    /// Number of `arg` edges at the root.
    pub fn arity(&self) -> usize {
        self.edges_of(self.root).iter().filter(|(l, _)| l.as_str() == ARG).count()
    }

    /// Feature names at the root, in stored order (arg edges included).
    pub fn features(&self) -> Vec<&Label> {
        self.edges_of(self.root).iter().map(|(l, _)| l).collect()
    }

    /// Returns a copy with a (non-`arg`) root feature set to `value`,
    /// replacing any previous value. A non-complex root becomes complex.
    pub fn with_feature(&self, name: &str, value: &FeatureStructure) -> FeatureStructure {
        let mut nodes = self.nodes.clone();
        let offset = nodes.len();
        nodes.extend(value.nodes.iter().map(|n| shift(n, offset)));
        let target = value.root + offset;
        let mut edges = match &nodes[self.root] {
            Node::Complex(e) => e.clone(),
            _ => Vec::new(),
        };
        if name == ARG {
            edges.push((Label::new(ARG), target));
        } else if let Some(slot) = edges.iter_mut().find(|(l, _)| l.as_str() == name) {
            slot.1 = target;
        } else {
            edges.push((Label::new(name), target));
        }
        nodes[self.root] = Node::Complex(edges);
        compact(&nodes, self.root, |n| n).expect("setting a feature keeps the graph acyclic")
    }

    /// Returns a copy with a root feature (not `arg`) removed.
    pub fn without_feature(&self, name: &str) -> FeatureStructure {
        let mut nodes = self.nodes.clone();
        if let Node::Complex(edges) = &mut nodes[self.root] {
            edges.retain(|(l, _)| l.as_str() != name || name == ARG);
        }
        compact(&nodes, self.root, |n| n).expect("removing a feature keeps the graph acyclic")
    }

    /// Number of nodes reachable from the root.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn extract(&self, node: NodeId) -> FeatureStructure {
        compact(&self.nodes, node, |n| n).expect("substructure of an acyclic graph")
    }
}

fn shift(node: &Node, offset: usize) -> Node {
    match node {
        Node::Complex(edges) => {
            Node::Complex(edges.iter().map(|(l, n)| (l.clone(), n + offset)).collect())
        }
        other => other.clone(),
    }
}

/// Error raised when a graph turns out to be cyclic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct CycleError;

/// Copies the part of `nodes` reachable from `root` into a fresh arena in
/// depth-first order, resolving every id through `resolve`.
pub(crate) fn compact(
    nodes: &[Node],
    root: NodeId,
    mut resolve: impl FnMut(NodeId) -> NodeId,
) -> Result<FeatureStructure, CycleError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Open,
        Done(NodeId),
    }
    let mut marks = vec![Mark::Fresh; nodes.len()];
    let mut out: Vec<Node> = Vec::new();

    fn visit(
        id: NodeId,
        nodes: &[Node],
        marks: &mut Vec<Mark>,
        out: &mut Vec<Node>,
        resolve: &mut dyn FnMut(NodeId) -> NodeId,
    ) -> Result<NodeId, CycleError> {
        let id = resolve(id);
        match marks[id] {
            Mark::Done(new) => return Ok(new),
            Mark::Open => return Err(CycleError),
            Mark::Fresh => {}
        }
        marks[id] = Mark::Open;
        let slot = out.len();
        out.push(Node::Var);
        let node = match &nodes[id] {
            Node::Complex(edges) => {
                let mut new_edges = Vec::with_capacity(edges.len());
                for (l, child) in edges {
                    new_edges.push((l.clone(), visit(*child, nodes, marks, out, resolve)?));
                }
                Node::Complex(new_edges)
            }
            other => other.clone(),
        };
        out[slot] = node;
        marks[id] = Mark::Done(slot);
        Ok(slot)
    }

    let root = visit(root, nodes, &mut marks, &mut out, &mut resolve)?;
    Ok(FeatureStructure { nodes: out, root })
}

impl PartialEq for FeatureStructure {
    fn eq(&self, other: &Self) -> bool {
        let mut fwd = HashMap::new();
        let mut bwd = HashMap::new();
        iso(self, other, self.root, other.root, &mut fwd, &mut bwd)
    }
}

impl Eq for FeatureStructure {}

fn iso(
    a: &FeatureStructure,
    b: &FeatureStructure,
    x: NodeId,
    y: NodeId,
    fwd: &mut HashMap<NodeId, NodeId>,
    bwd: &mut HashMap<NodeId, NodeId>,
) -> bool {
    match (fwd.get(&x), bwd.get(&y)) {
        (Some(&fy), Some(&bx)) => return fy == y && bx == x,
        (None, None) => {}
        _ => return false,
    }
    fwd.insert(x, y);
    bwd.insert(y, x);
    match (&a.nodes[x], &b.nodes[y]) {
        (Node::Var, Node::Var) => true,
        (Node::Atom(p), Node::Atom(q)) => p == q,
        (Node::Complex(ea), Node::Complex(eb)) => {
            if ea.len() != eb.len() {
                return false;
            }
            let args_a: Vec<_> = ea.iter().filter(|(l, _)| l.as_str() == ARG).collect();
            let args_b: Vec<_> = eb.iter().filter(|(l, _)| l.as_str() == ARG).collect();
            if args_a.len() != args_b.len() {
                return false;
            }
            for ((_, p), (_, q)) in args_a.iter().zip(&args_b) {
                if !iso(a, b, *p, *q, fwd, bwd) {
                    return false;
                }
            }
            for (l, p) in ea.iter().filter(|(l, _)| l.as_str() != ARG) {
                match eb.iter().find(|(m, _)| m == l) {
                    Some((_, q)) => {
                        if !iso(a, b, *p, *q, fwd, bwd) {
                            return false;
                        }
                    }
                    None => return false,
                }
            }
            true
        }
        _ => false,
    }
}

/// True iff every path/value of `a` is present in `b` with compatible values
/// (`a` is at most as informative as `b`). Reentrancies in `a` must also be
/// reentrancies in `b`. An empty `arg` list in `a` leaves the arity open.
pub fn subsumes(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    let mut map = HashMap::new();
    sub(a, b, a.root, b.root, &mut map)
}

fn sub(
    a: &FeatureStructure,
    b: &FeatureStructure,
    x: NodeId,
    y: NodeId,
    map: &mut HashMap<NodeId, NodeId>,
) -> bool {
    if let Some(&prev) = map.get(&x) {
        return prev == y;
    }
    map.insert(x, y);
    match (&a.nodes[x], &b.nodes[y]) {
        (Node::Var, _) => true,
        (Node::Atom(p), Node::Atom(q)) => p == q,
        (Node::Complex(ea), Node::Complex(eb)) => {
            let args_a: Vec<_> = ea.iter().filter(|(l, _)| l.as_str() == ARG).collect();
            let args_b: Vec<_> = eb.iter().filter(|(l, _)| l.as_str() == ARG).collect();
            if !args_a.is_empty() && args_a.len() != args_b.len() {
                return false;
            }
            for ((_, p), (_, q)) in args_a.iter().zip(&args_b) {
                if !sub(a, b, *p, *q, map) {
                    return false;
                }
            }
            ea.iter().filter(|(l, _)| l.as_str() != ARG).all(|(l, p)| {
                match eb.iter().find(|(m, _)| m == l) {
                    Some((_, q)) => sub(a, b, *p, *q, map),
                    None => false,
                }
            })
        }
        _ => false,
    }
}

impl fmt::Debug for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_avm())
    }
}

impl fmt::Display for FeatureStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_avm())
    }
}

impl std::str::FromStr for FeatureStructure {
    type Err = AvmError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FeatureStructure::parse(s)
    }
}
