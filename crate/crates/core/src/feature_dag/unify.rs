use thiserror::Error;

use super::{compact, Cost, CostModel, FeatureStructure, Label, Node, NodeId, ARG};

/// Why two structures do not unify. Inputs are never modified.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifyFailure {
    #[error("atomic clash: {0} vs {1}")]
    Clash(Label, Label),
    #[error("atom {0} against a complex node")]
    AtomVsComplex(Label),
    #[error("argument lists of length {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("pairing ({0}, {1}) is forbidden")]
    Forbidden(Label, Label),
    #[error("unification would create a cycle")]
    Cycle,
}

/// Log of one unification: the identified label pair, its cost, and the two
/// pre-unification structures needed to undo it.
#[derive(Clone, Debug, PartialEq)]
pub struct UnifierRecord {
    pub pair: (Label, Label),
    pub cost: Cost,
    pub snapshot: (FeatureStructure, FeatureStructure),
    /// Consuming argument slot, filled in by whoever owns the slot.
    pub site: Option<usize>,
}

impl UnifierRecord {
    pub fn at_site(mut self, site: usize) -> Self {
        self.site = Some(site);
        self
    }
}

/// Label a structure contributes to a cost lookup: its `case` if it has
/// one, otherwise its `role`.
pub fn binding_label(fs: &FeatureStructure) -> Option<&Label> {
    fs.atom_at(&["case"]).or_else(|| fs.atom_at(&["role"]))
}

const ANONYMOUS: &str = "_";

/// Unifies two structures, pricing the top-level case/role identification
/// with `model`. A side without a case or role borrows the other side's
/// label, so the pairing costs nothing.
pub fn unify(
    a: &FeatureStructure,
    b: &FeatureStructure,
    model: &CostModel,
) -> Result<(FeatureStructure, UnifierRecord), UnifyFailure> {
    let la = binding_label(a);
    let lb = binding_label(b);
    let anon = Label::new(ANONYMOUS);
    let pair = match (la, lb) {
        (Some(x), Some(y)) => (x.clone(), y.clone()),
        (Some(x), None) => (x.clone(), x.clone()),
        (None, Some(y)) => (y.clone(), y.clone()),
        (None, None) => (anon.clone(), anon),
    };
    let cost = model.lookup(&pair.0, &pair.1);
    if !cost.is_finite() {
        return Err(UnifyFailure::Forbidden(pair.0, pair.1));
    }
    let result = unify_structures(a, b)?;
    let record = UnifierRecord { pair, cost, snapshot: (a.clone(), b.clone()), site: None };
    Ok((result, record))
}

/// Restores the two structures a record was made from.
pub fn undo(record: &UnifierRecord) -> (FeatureStructure, FeatureStructure) {
    record.snapshot.clone()
}

/// Plain graph unification, ignoring costs.
pub(crate) fn unify_structures(
    a: &FeatureStructure,
    b: &FeatureStructure,
) -> Result<FeatureStructure, UnifyFailure> {
    let offset = a.nodes().len();
    let mut nodes: Vec<Node> = a.nodes().to_vec();
    nodes.extend(b.nodes().iter().map(|n| super::shift(n, offset)));
    let mut m = Merger { fwd: (0..nodes.len()).collect(), nodes };
    m.unify(a.root(), b.root() + offset)?;
    let root = m.find(a.root());
    let Merger { nodes, mut fwd } = m;
    compact(&nodes, root, |n| find_in(&mut fwd, n)).map_err(|_| UnifyFailure::Cycle)
}

fn find_in(fwd: &mut [usize], mut x: usize) -> usize {
    let mut root = x;
    while fwd[root] != root {
        root = fwd[root];
    }
    while fwd[x] != root {
        let next = fwd[x];
        fwd[x] = root;
        x = next;
    }
    root
}

struct Merger {
    nodes: Vec<Node>,
    fwd: Vec<usize>,
}

impl Merger {
    fn find(&mut self, x: NodeId) -> NodeId {
        find_in(&mut self.fwd, x)
    }

    fn unify(&mut self, x: NodeId, y: NodeId) -> Result<(), UnifyFailure> {
        let x = self.find(x);
        let y = self.find(y);
        if x == y {
            return Ok(());
        }
        match (&self.nodes[x], &self.nodes[y]) {
            (Node::Var, _) => {
                self.fwd[x] = y;
                Ok(())
            }
            (_, Node::Var) => {
                self.fwd[y] = x;
                Ok(())
            }
            (Node::Atom(p), Node::Atom(q)) => {
                if p == q {
                    self.fwd[y] = x;
                    Ok(())
                } else {
                    Err(UnifyFailure::Clash(p.clone(), q.clone()))
                }
            }
            (Node::Atom(p), Node::Complex(_)) | (Node::Complex(_), Node::Atom(p)) => {
                Err(UnifyFailure::AtomVsComplex(p.clone()))
            }
            (Node::Complex(ex), Node::Complex(ey)) => {
                let args_x: Vec<NodeId> =
                    ex.iter().filter(|(l, _)| l.as_str() == ARG).map(|(_, n)| *n).collect();
                let args_y: Vec<NodeId> =
                    ey.iter().filter(|(l, _)| l.as_str() == ARG).map(|(_, n)| *n).collect();
                if !args_x.is_empty() && !args_y.is_empty() && args_x.len() != args_y.len() {
                    return Err(UnifyFailure::ArityMismatch(args_x.len(), args_y.len()));
                }
                let mut merged = ex.clone();
                let mut pending = Vec::new();
                for (l, n) in ey.iter().filter(|(l, _)| l.as_str() != ARG) {
                    match merged.iter().find(|(m, _)| m == l) {
                        Some((_, existing)) => pending.push((*existing, *n)),
                        None => merged.push((l.clone(), *n)),
                    }
                }
                if args_x.is_empty() {
                    merged.extend(args_y.iter().map(|n| (Label::new(ARG), *n)));
                } else {
                    pending.extend(args_x.iter().copied().zip(args_y.iter().copied()));
                }
                self.nodes[x] = Node::Complex(merged);
                self.fwd[y] = x;
                for (p, q) in pending {
                    self.unify(p, q)?;
                }
                Ok(())
            }
        }
    }
}
