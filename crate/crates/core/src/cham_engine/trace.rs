//! Trace events and their renderings.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::feature_dag::Cost;

use super::solution::{PlaceId, Solution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EventKind {
    Inject,
    Spawn,
    React,
    Abstract,
    Migrate,
    Apply,
    Lift,
    Contact,
    Tiebreak,
    Dissolve,
    Halt,
}

impl EventKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EventKind::Inject => "inject",
            EventKind::Spawn => "spawn",
            EventKind::React => "react",
            EventKind::Abstract => "abstract",
            EventKind::Migrate => "migrate",
            EventKind::Apply => "apply",
            EventKind::Lift => "lift",
            EventKind::Contact => "contact",
            EventKind::Tiebreak => "tiebreak",
            EventKind::Dissolve => "dissolve",
            EventKind::Halt => "halt",
        }
    }
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Conserved quantities, sampled after each event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Counts {
    pub molecules: usize,
    pub membranes: usize,
    pub open_slots: usize,
    pub bound_slots: usize,
}

impl Counts {
    pub fn of(sol: &Solution) -> Counts {
        let (open_slots, bound_slots) = sol.valence_count();
        Counts { molecules: sol.molecule_count(), membranes: sol.membrane_count(), open_slots, bound_slots }
    }

    pub fn valences(&self) -> usize {
        self.open_slots + self.bound_slots
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event {
    pub step: usize,
    pub kind: EventKind,
    pub places: Vec<PlaceId>,
    pub payload: String,
    pub cost_before: Cost,
    pub cost_after: Cost,
    pub before: BTreeMap<PlaceId, String>,
    pub after: BTreeMap<PlaceId, String>,
    pub counts: Counts,
    /// Configuration line for the process view, on events that close a
    /// membrane interaction.
    pub checkpoint: Option<String>,
}

impl Event {
    pub fn cost_delta(&self) -> String {
        self.cost_after.delta(self.cost_before).to_string()
    }

    fn place_list(&self) -> String {
        if self.places.is_empty() {
            return "-".into();
        }
        self.places.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }

    /// `step kind places payload cost_delta`
    pub fn text_line(&self) -> String {
        format!("{} {} {} {} {}", self.step, self.kind, self.place_list(), self.payload, self.cost_delta())
    }

    /// Self-describing `key=value` record; string values are quoted with
    /// backslash escapes.
    pub fn record_line(&self) -> String {
        let mut s = format!(
            "step={} kind={} places={} delta={} cost={} payload={:?}",
            self.step,
            self.kind,
            self.place_list(),
            self.cost_delta(),
            self.cost_after,
            self.payload
        );
        for (p, v) in &self.before {
            let _ = write!(s, " before.{p}={v:?}");
        }
        for (p, v) in &self.after {
            let _ = write!(s, " after.{p}={v:?}");
        }
        let c = self.counts;
        let _ = write!(s, " molecules={} membranes={} open={} bound={}", c.molecules, c.membranes, c.open_slots, c.bound_slots);
        s
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Trace {
    pub events: Vec<Event>,
}

impl Trace {
    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn of_kind(&self, kind: EventKind) -> impl Iterator<Item = &Event> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn render_text(&self) -> String {
        self.events.iter().map(|e| e.text_line() + "\n").collect()
    }

    pub fn render_records(&self) -> String {
        self.events.iter().map(|e| e.record_line() + "\n").collect()
    }

    /// Membrane configurations at each checkpoint, consecutive repeats
    /// dropped.
    pub fn process_lines(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for line in self.events.iter().filter_map(|e| e.checkpoint.as_ref()) {
            if out.last() != Some(line) {
                out.push(line.clone());
            }
        }
        out
    }

    /// Folds the per-place snapshots from an empty solution; each event's
    /// `before` must match the folded state, and the result must match
    /// `fin`.
    pub fn replay(&self, fin: &Solution) -> Result<(), String> {
        let mut state: BTreeMap<PlaceId, String> = BTreeMap::new();
        state.insert(PlaceId::World, Solution::new().render_place(PlaceId::World));
        for e in &self.events {
            for (p, v) in &e.before {
                match state.get(p) {
                    Some(cur) if cur == v => {}
                    Some(cur) => return Err(format!("step {}: {p} was `{cur}`, event expects `{v}`", e.step)),
                    None => return Err(format!("step {}: {p} does not exist yet", e.step)),
                }
            }
            for (p, v) in &e.after {
                state.insert(*p, v.clone());
            }
        }
        let want = fin.snapshot();
        if state != want {
            return Err(format!("replayed {state:?}, final {want:?}"));
        }
        Ok(())
    }

    /// Molecule, membrane and valence counts change only on the events
    /// that create them.
    pub fn check_conservation(&self) -> Result<(), String> {
        let mut prev = Counts { molecules: 0, membranes: 0, open_slots: 0, bound_slots: 0 };
        for e in &self.events {
            let c = e.counts;
            let injecting = e.kind == EventKind::Inject;
            if !injecting && (c.molecules != prev.molecules || c.valences() != prev.valences()) {
                return Err(format!("step {} ({}): molecules/valences {:?} -> {:?}", e.step, e.kind, prev, c));
            }
            if e.kind != EventKind::Spawn && c.membranes != prev.membranes {
                return Err(format!("step {} ({}): membranes {} -> {}", e.step, e.kind, prev.membranes, c.membranes));
            }
            if injecting && c.molecules != prev.molecules + 1 {
                return Err(format!("step {}: inject added {} molecules", e.step, c.molecules - prev.molecules));
            }
            prev = c;
        }
        Ok(())
    }
}
