//! The solution: world W, membranes, molecules and the record table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::feature_dag::{Cost, UnifierRecord};
use crate::lambda_core::{normalize, Binder, Style, Term, TypeContext};

use super::molecule::{MolId, Molecule, RecordId, SlotState};

/// A place that holds molecules: W or a membrane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceId {
    World,
    /// 1-based, printed `s1`, `s2`, …
    Membrane(usize),
}

impl std::fmt::Display for PlaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PlaceId::World => f.write_str("W"),
            PlaceId::Membrane(i) => write!(f, "s{i}"),
        }
    }
}

/// Where a molecule is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Location {
    Free(PlaceId),
    Bound { host: MolId, slot: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membrane {
    pub id: usize,
    pub contents: Vec<MolId>,
    pub dissolved: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RecordKind {
    Fill,
    Control,
    Sentential,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecordEntry {
    pub record: UnifierRecord,
    pub kind: RecordKind,
    pub host: MolId,
    pub slot: usize,
    pub live: bool,
}

/// Which semantic reading to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reading {
    /// Control applications dropped: `make(K,N,λy.read(N,y,B))`.
    Raw,
    /// Control applications kept and β-reduced: `make(K,N,read(N,N,B))`.
    Applied,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Solution {
    pub(crate) molecules: Vec<Molecule>,
    pub(crate) locations: Vec<Location>,
    pub(crate) world: Vec<MolId>,
    pub(crate) membranes: Vec<Membrane>,
    pub(crate) records: Vec<RecordEntry>,
}

impl Solution {
    pub fn new() -> Self {
        Solution::default()
    }

    pub fn molecule(&self, id: MolId) -> &Molecule {
        &self.molecules[id]
    }

    pub fn molecules(&self) -> &[Molecule] {
        &self.molecules
    }

    pub fn location(&self, id: MolId) -> Location {
        self.locations[id]
    }

    pub fn world(&self) -> &[MolId] {
        &self.world
    }

    pub fn membranes(&self) -> &[Membrane] {
        &self.membranes
    }

    pub fn membrane(&self, id: usize) -> &Membrane {
        &self.membranes[id - 1]
    }

    pub fn live_membranes(&self) -> impl Iterator<Item = &Membrane> {
        self.membranes.iter().filter(|m| !m.dissolved)
    }

    pub fn records(&self) -> &[RecordEntry] {
        &self.records
    }

    pub fn live_records(&self) -> impl Iterator<Item = (RecordId, &RecordEntry)> {
        self.records.iter().enumerate().filter(|(_, r)| r.live)
    }

    pub fn contents(&self, place: PlaceId) -> &[MolId] {
        match place {
            PlaceId::World => &self.world,
            PlaceId::Membrane(i) => &self.membranes[i - 1].contents,
        }
    }

    pub(crate) fn contents_mut(&mut self, place: PlaceId) -> &mut Vec<MolId> {
        match place {
            PlaceId::World => &mut self.world,
            PlaceId::Membrane(i) => &mut self.membranes[i - 1].contents,
        }
    }

    /// Live places other than `place`; every pair of live places is in contact.
    pub fn contacts(&self, place: PlaceId) -> Vec<PlaceId> {
        let mut out = vec![PlaceId::World];
        out.extend(self.live_membranes().map(|m| PlaceId::Membrane(m.id)));
        out.retain(|p| *p != place);
        out
    }

    /// The membrane or world that ultimately holds `id`.
    pub fn place_of(&self, mut id: MolId) -> PlaceId {
        loop {
            match self.locations[id] {
                Location::Free(p) => return p,
                Location::Bound { host, .. } => id = host,
            }
        }
    }

    pub fn total_cost(&self) -> Cost {
        self.live_records().map(|(_, r)| r.record.cost).sum()
    }

    /// The sole molecule of a membrane, if it is a singleton.
    pub fn singleton(&self, membrane: usize) -> Option<MolId> {
        match self.membrane(membrane).contents.as_slice() {
            [only] => Some(*only),
            _ => None,
        }
    }

    /// Binders hoisted to membrane level: the open slot variables of a
    /// singleton's molecule.
    pub fn lifted(&self, membrane: usize) -> Vec<String> {
        if self.membrane(membrane).dissolved {
            return Vec::new();
        }
        self.singleton(membrane)
            .map(|m| self.molecules[m].open_slots().map(|(_, s)| s.var.clone()).collect())
            .unwrap_or_default()
    }

    // ---- semantic terms ----

    /// The term a molecule currently denotes, binders over its open slots.
    pub fn term(&self, id: MolId, reading: Reading) -> Term {
        let m = &self.molecules[id];
        if m.slots.is_empty() {
            return m.sem.clone();
        }
        let mut body = m.sem.clone();
        for s in &m.slots {
            if s.sentential.is_none() {
                continue;
            }
            let keep = match (&s.state, reading) {
                (_, Reading::Raw) => 0,
                (SlotState::Filled { filler, .. }, Reading::Applied) => {
                    self.molecules[*filler].open_slots().count()
                }
                _ => usize::MAX,
            };
            body = cap_applications(&body, &s.var, keep);
        }
        for (i, s) in m.slots.iter().enumerate() {
            let replacement = match &s.state {
                SlotState::Open => continue,
                SlotState::Filled { filler, .. } => self.term(*filler, reading),
                SlotState::Controlled { .. } => self.resolve(id, i, reading),
            };
            body = substitute(&body, &s.var, &replacement);
        }
        let binders: Vec<Binder> = m.open_slots().map(|(_, s)| Binder::new(s.var.clone(), s.binder_type())).collect();
        let t = Term::lams(binders, body);
        match reading {
            Reading::Raw => t,
            Reading::Applied => normalize(&t),
        }
    }

    /// What a controlled slot stands for: its controller's filler, or the
    /// controller's variable while that is open.
    fn resolve(&self, id: MolId, slot: usize, reading: Reading) -> Term {
        let s = &self.molecules[id].slots[slot];
        match &s.state {
            SlotState::Open => Term::Var(s.var.clone()),
            SlotState::Filled { filler, .. } => self.term(*filler, reading),
            SlotState::Controlled { source, .. } => self.resolve(source.0, source.1, reading),
        }
    }

    /// Terms of the molecules free in a place, in content order.
    pub fn place_terms(&self, place: PlaceId, reading: Reading) -> Vec<Term> {
        self.contents(place).iter().map(|&m| self.term(m, reading)).collect()
    }

    // ---- rendering ----

    /// One place in membrane notation: `λx.s1 |= read(x,N,B)`, a bare
    /// `s1` once dissolved, `W |= K, N` for the world.
    pub fn render_place(&self, place: PlaceId) -> String {
        match place {
            PlaceId::World => {
                let terms: Vec<String> = self.world.iter().map(|&m| self.render_term(m)).collect();
                format!("W |= {}", terms.join(", "))
            }
            PlaceId::Membrane(i) => {
                let mem = self.membrane(i);
                if mem.dissolved {
                    return format!("s{i}");
                }
                let lifted = self.lifted(i);
                let prefix = if lifted.is_empty() { String::new() } else { format!("λ{}.", lifted.concat()) };
                let body: Vec<String> = match self.singleton(i) {
                    Some(m) if !lifted.is_empty() => {
                        let t = self.term(m, Reading::Raw);
                        vec![t.strip_binders().1.display(Style::Lambda).to_string()]
                    }
                    _ => mem.contents.iter().map(|&m| self.render_term(m)).collect(),
                };
                format!("{prefix}s{i} |= {}", body.join(", "))
            }
        }
    }

    fn render_term(&self, m: MolId) -> String {
        self.term(m, Reading::Raw).display(Style::Lambda).to_string()
    }

    /// All membranes joined by `||`, W first when it is non-empty.
    pub fn render_configuration(&self) -> String {
        let mut parts = Vec::new();
        if !self.world.is_empty() {
            parts.push(self.render_place(PlaceId::World));
        }
        parts.extend(self.membranes.iter().map(|m| self.render_place(PlaceId::Membrane(m.id))));
        parts.join(" || ")
    }

    /// Every place's rendering, keyed by place.
    pub fn snapshot(&self) -> BTreeMap<PlaceId, String> {
        let mut out = BTreeMap::new();
        out.insert(PlaceId::World, self.render_place(PlaceId::World));
        for m in &self.membranes {
            out.insert(PlaceId::Membrane(m.id), self.render_place(PlaceId::Membrane(m.id)));
        }
        out
    }

    /// `θ1=(nom,agent):1` for each live record.
    pub fn render_records(&self) -> String {
        let mut s = String::new();
        for (i, r) in self.live_records() {
            if !s.is_empty() {
                s.push(' ');
            }
            let _ = write!(s, "θ{}=({},{}):{}", i + 1, r.record.pair.0, r.record.pair.1, r.record.cost);
        }
        s
    }

    // ---- invariants ----

    /// Molecules in any place, nested ones included.
    pub fn molecule_count(&self) -> usize {
        self.molecules.len()
    }

    /// Live plus dissolved membranes.
    pub fn membrane_count(&self) -> usize {
        self.membranes.len()
    }

    /// (open slots, bound slots) over all molecules.
    pub fn valence_count(&self) -> (usize, usize) {
        let mut open = 0;
        let mut bound = 0;
        for m in &self.molecules {
            for s in &m.slots {
                if s.is_open() {
                    open += 1;
                } else {
                    bound += 1;
                }
            }
        }
        (open, bound)
    }

    /// Checks locations, records and the membrane/lifted relation.
    pub fn check_structure(&self) -> Result<(), String> {
        let mut seen = vec![0usize; self.molecules.len()];
        for &m in &self.world {
            seen[m] += 1;
            if self.locations[m] != Location::Free(PlaceId::World) {
                return Err(format!("molecule {m} listed in W but located at {:?}", self.locations[m]));
            }
        }
        for mem in &self.membranes {
            for &m in &mem.contents {
                seen[m] += 1;
                if mem.dissolved {
                    return Err(format!("dissolved s{} still holds molecule {m}", mem.id));
                }
                if self.locations[m] != Location::Free(PlaceId::Membrane(mem.id)) {
                    return Err(format!("molecule {m} listed in s{} but located at {:?}", mem.id, self.locations[m]));
                }
            }
        }
        for (host, m) in self.molecules.iter().enumerate() {
            for (i, s) in m.slots.iter().enumerate() {
                let record = match &s.state {
                    SlotState::Open => continue,
                    SlotState::Filled { filler, record } => {
                        seen[*filler] += 1;
                        if self.locations[*filler] != (Location::Bound { host, slot: i }) {
                            return Err(format!("filler {filler} of {host}.{i} is not located there"));
                        }
                        *record
                    }
                    SlotState::Controlled { record, .. } => *record,
                };
                let r = &self.records[record];
                if !r.live || r.host != host || r.slot != i {
                    return Err(format!("slot {host}.{i} points at a stale record θ{}", record + 1));
                }
            }
        }
        if let Some(m) = seen.iter().position(|&n| n != 1) {
            return Err(format!("molecule {m} resides in {} places", seen[m]));
        }
        let live_refs = self
            .molecules
            .iter()
            .flat_map(|m| m.slots.iter())
            .filter(|s| !s.is_open())
            .count();
        if live_refs != self.live_records().count() {
            return Err("live records do not match bound slots".into());
        }
        Ok(())
    }

    /// Every free molecule's applied term is well-typed and has one binder
    /// per open slot.
    pub fn check_typing(&self) -> Result<(), String> {
        let mut ctx = TypeContext::default();
        for m in &self.molecules {
            match m.head() {
                Some(h) if !m.slots.is_empty() => ctx.declare(h, m.head_type()),
                _ => {
                    if let Term::Const(c) = &m.sem {
                        ctx.declare(c, crate::lambda_core::TypeExpr::constant("N"));
                    }
                }
            }
        }
        for (id, m) in self.molecules.iter().enumerate() {
            if !matches!(self.locations[id], Location::Free(_)) {
                continue;
            }
            let t = self.term(id, Reading::Applied);
            let open = m.open_slots().count();
            if t.binder_count() != open {
                return Err(format!("{t} has {} binders for {open} open slots", t.binder_count()));
            }
            ctx.infer(&t).map_err(|e| format!("{t}: {e}"))?;
        }
        Ok(())
    }
}

/// Replaces `Var(x)` by `s`. Slot variables are globally distinct, so no
/// binder in `t` can capture.
fn substitute(t: &Term, x: &str, s: &Term) -> Term {
    match t {
        Term::Var(v) if v == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(substitute(f, x, s), substitute(a, x, s)),
        Term::Abs(b, _) if b.name == x => t.clone(),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(substitute(body, x, s))),
    }
}

/// Keeps at most `keep` arguments on applications headed by `Var(x)`.
fn cap_applications(t: &Term, x: &str, keep: usize) -> Term {
    let (head, args) = t.spine();
    if matches!(head, Term::Var(v) if v == x) {
        return Term::apps(head.clone(), args.into_iter().take(keep).map(|a| cap_applications(a, x, keep)));
    }
    match t {
        Term::App(f, a) => Term::app(cap_applications(f, x, keep), cap_applications(a, x, keep)),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(cap_applications(body, x, keep))),
        _ => t.clone(),
    }
}
