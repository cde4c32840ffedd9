//! The reaction loop.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::feature_dag::{unify, Cost, CostModel, FeatureStructure, Label, UnifierRecord};
use crate::lambda_core::{abstract_argument, Fresh, Style, Term};
use crate::lexicon::Lexeme;

use super::molecule::{MolId, Molecule, SlotState};
use super::solution::{Location, PlaceId, Reading, RecordEntry, RecordKind, Solution};
use super::trace::{Counts, Event, EventKind, Trace};

/// Which equal-cost contests the higher-ranked (matrix) predicate wins.
#[derive(Clone, Debug, PartialEq)]
pub struct TieBreak {
    pub matrix_wins: Vec<(Label, Label)>,
}

impl Default for TieBreak {
    fn default() -> Self {
        TieBreak {
            matrix_wins: vec![(Label::new("nom"), Label::new("agent")), (Label::new("dat"), Label::new("co-agent"))],
        }
    }
}

impl TieBreak {
    /// Never yields: every tie favors the incumbent.
    pub fn incumbent() -> Self {
        TieBreak { matrix_wins: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub cost: CostModel,
    pub seed: u64,
    pub max_steps: usize,
    pub tie_break: TieBreak,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { cost: CostModel::default(), seed: 0, max_steps: 10_000, tie_break: TieBreak::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaltReason {
    Quiescent,
    StepLimit,
    IncompleteMandatorySlot,
}

impl HaltReason {
    pub fn as_str(self) -> &'static str {
        match self {
            HaltReason::Quiescent => "quiescent",
            HaltReason::StepLimit => "step-limit",
            HaltReason::IncompleteMandatorySlot => "incomplete-mandatory-slot",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("no tokens to run")]
    EmptyInput,
    #[error("max_steps must be at least 1")]
    ZeroSteps,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub solution: Solution,
    pub trace: Trace,
    pub halt: HaltReason,
}

impl RunResult {
    pub fn steps(&self) -> usize {
        self.trace.len()
    }
}

struct StepLimit;

type Step<T> = Result<T, StepLimit>;

struct Engine<'c> {
    sol: Solution,
    trace: Trace,
    cfg: &'c EngineConfig,
    rng: ChaCha8Rng,
    /// (host, slot, filler) triples already used by a restructuring.
    used: BTreeSet<(MolId, usize, MolId)>,
    contacted: BTreeSet<(PlaceId, PlaceId)>,
}

struct Pending {
    places: Vec<PlaceId>,
    before: BTreeMap<PlaceId, String>,
    cost: Cost,
}

/// A noun bound in a contacting membrane that an open slot could take.
struct Steal {
    place: PlaceId,
    host: MolId,
    slot: usize,
    filler: MolId,
    old: Cost,
    new: UnifierRecord,
    tie: bool,
}

/// Runs the tokens left to right, settling after each injection.
pub fn run(tokens: &[Lexeme], cfg: &EngineConfig) -> Result<RunResult, EngineError> {
    if tokens.is_empty() {
        return Err(EngineError::EmptyInput);
    }
    if cfg.max_steps == 0 {
        return Err(EngineError::ZeroSteps);
    }
    let mut e = Engine {
        sol: Solution::new(),
        trace: Trace::default(),
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        used: BTreeSet::new(),
        contacted: BTreeSet::new(),
    };
    let outcome = (|| -> Step<()> {
        for (i, tok) in tokens.iter().enumerate() {
            e.inject(i, tok)?;
            e.settle()?;
        }
        Ok(())
    })();
    let halt = match outcome {
        Err(StepLimit) => HaltReason::StepLimit,
        Ok(()) if e.complete() => HaltReason::Quiescent,
        Ok(()) => HaltReason::IncompleteMandatorySlot,
    };
    let p = e.begin(&[]);
    e.record_event(EventKind::Halt, p, halt.as_str().to_string(), false);
    Ok(RunResult { solution: e.sol, trace: e.trace, halt })
}

fn slot_name(m: &Molecule, slot: usize) -> String {
    let role = m.slots[slot].role().map(|r| r.as_str().to_string()).unwrap_or_else(|| slot.to_string());
    format!("{}.{}", m.head().unwrap_or("?"), role)
}

fn record_text(id: usize, r: &UnifierRecord) -> String {
    format!("θ{}=({},{}):{}", id + 1, r.pair.0, r.pair.1, r.cost)
}

impl Engine<'_> {
    // ---- event plumbing ----

    fn begin(&self, places: &[PlaceId]) -> Pending {
        let snap = self.sol.snapshot();
        let before = places.iter().filter_map(|p| snap.get(p).map(|v| (*p, v.clone()))).collect();
        Pending { places: places.to_vec(), before, cost: self.sol.total_cost() }
    }

    fn record_event(&mut self, kind: EventKind, p: Pending, payload: String, checkpoint: bool) {
        let snap = self.sol.snapshot();
        let after = p.places.iter().filter_map(|pl| snap.get(pl).map(|v| (*pl, v.clone()))).collect();
        self.trace.events.push(Event {
            step: self.trace.events.len() + 1,
            kind,
            places: p.places,
            payload,
            cost_before: p.cost,
            cost_after: self.sol.total_cost(),
            before: p.before,
            after,
            counts: Counts::of(&self.sol),
            checkpoint: checkpoint.then(|| self.sol.render_configuration()),
        });
    }

    /// Records an event, leaving room for the halt event.
    fn emit(&mut self, kind: EventKind, p: Pending, payload: String, checkpoint: bool) -> Step<()> {
        if self.trace.events.len() + 1 >= self.cfg.max_steps {
            return Err(StepLimit);
        }
        self.record_event(kind, p, payload, checkpoint);
        Ok(())
    }

    fn lift_events(&mut self, before: &[(usize, Vec<String>)]) -> Step<()> {
        for (m, old) in before {
            let now = self.sol.lifted(*m);
            if &now != old {
                let p = self.begin(&[PlaceId::Membrane(*m)]);
                let payload = if now.is_empty() { format!("s{m} none") } else { format!("s{m} λ{}", now.concat()) };
                self.emit(EventKind::Lift, p, payload, false)?;
            }
        }
        Ok(())
    }

    fn lifted_of(&self, places: &[PlaceId]) -> Vec<(usize, Vec<String>)> {
        places
            .iter()
            .filter_map(|p| match p {
                PlaceId::Membrane(m) => Some((*m, self.sol.lifted(*m))),
                PlaceId::World => None,
            })
            .collect()
    }

    // ---- primitive moves ----

    fn inject(&mut self, origin: usize, tok: &Lexeme) -> Step<()> {
        let id = self.sol.molecules.len();
        let generation = if tok.spawns_membrane() { self.sol.membranes.len() } else { 0 };
        let mol = Molecule::from_lexeme(id, origin, tok, generation);
        let p = self.begin(&[PlaceId::World]);
        self.sol.molecules.push(mol);
        self.sol.locations.push(Location::Free(PlaceId::World));
        self.sol.world.push(id);
        let payload = format!("{} {}", tok.surface, self.sol.term(id, Reading::Raw).display(Style::Lambda));
        self.emit(EventKind::Inject, p, payload, false)?;
        if tok.spawns_membrane() {
            self.spawn(id)?;
        }
        Ok(())
    }

    fn spawn(&mut self, id: MolId) -> Step<()> {
        let n = self.sol.membranes.len() + 1;
        let place = PlaceId::Membrane(n);
        let mut p = self.begin(&[PlaceId::World]);
        p.places.push(place);
        self.sol.world.retain(|&m| m != id);
        self.sol.membranes.push(super::solution::Membrane { id: n, contents: vec![id], dissolved: false });
        self.sol.locations[id] = Location::Free(place);
        let payload = format!("s{n} {}", self.sol.molecule(id).surface);
        self.emit(EventKind::Spawn, p, payload, false)
    }

    fn migrate(&mut self, mol: MolId, to: PlaceId) -> Step<()> {
        let from = match self.sol.locations[mol] {
            Location::Free(p) => p,
            Location::Bound { .. } => unreachable!("only free molecules migrate"),
        };
        if from == to {
            return Ok(());
        }
        let p = self.begin(&[from, to]);
        self.sol.contents_mut(from).retain(|&m| m != mol);
        self.sol.contents_mut(to).push(mol);
        self.sol.locations[mol] = Location::Free(to);
        let payload = format!("{} {from}->{to}", self.sol.term(mol, Reading::Raw).display(Style::Lambda));
        self.emit(EventKind::Migrate, p, payload, false)
    }

    /// Binds a free molecule already in `place` into `host.slot`.
    #[allow(clippy::too_many_arguments)]
    fn bind(&mut self, kind: EventKind, place: PlaceId, host: MolId, slot: usize, filler: MolId, rec: UnifierRecord, checkpoint: bool) -> Step<()> {
        let p = self.begin(&[place]);
        self.sol.contents_mut(place).retain(|&m| m != filler);
        self.sol.locations[filler] = Location::Bound { host, slot };
        let rid = self.sol.records.len();
        let text = record_text(rid, &rec);
        self.sol.records.push(RecordEntry { record: rec, kind: RecordKind::Fill, host, slot, live: true });
        self.sol.molecules[host].slots[slot].state = SlotState::Filled { filler, record: rid };
        let payload = format!(
            "{}<-{} {text}",
            slot_name(self.sol.molecule(host), slot),
            self.sol.term(filler, Reading::Raw).display(Style::Lambda)
        );
        self.emit(kind, p, payload, checkpoint)
    }

    /// Detaches the filler of `host.slot`, leaving it free in `place`.
    fn unbind(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<MolId> {
        let (filler, rid) = match self.sol.molecules[host].slots[slot].state {
            SlotState::Filled { filler, record } => (filler, record),
            _ => unreachable!("unbind on an unfilled slot"),
        };
        let payload = {
            let term = self.sol.term(host, Reading::Raw);
            let rec = self.sol.records[rid].record.clone().at_site(slot);
            let shown = match abstract_argument(&term, slot, &[rec], &mut Fresh::new()) {
                Ok(a) => a.term.display(Style::Lambda).to_string(),
                Err(e) => e.to_string(),
            };
            format!(
                "{}->{} {} {shown}",
                slot_name(self.sol.molecule(host), slot),
                self.sol.term(filler, Reading::Raw).display(Style::Lambda),
                record_text(rid, &self.sol.records[rid].record)
            )
        };
        let p = self.begin(&[place]);
        self.sol.records[rid].live = false;
        self.sol.molecules[host].slots[slot].state = SlotState::Open;
        self.sol.locations[filler] = Location::Free(place);
        self.sol.contents_mut(place).push(filler);
        self.emit(EventKind::Abstract, p, payload, false)?;
        Ok(filler)
    }

    // ---- reactions ----

    fn settle(&mut self) -> Step<()> {
        loop {
            let mut progress = false;
            let membranes: Vec<usize> = self.sol.live_membranes().map(|m| m.id).collect();
            for mid in membranes {
                let place = PlaceId::Membrane(mid);
                let hosts: Vec<MolId> = self
                    .sol
                    .contents(place)
                    .iter()
                    .copied()
                    .filter(|&m| self.sol.molecule(m).is_verbal())
                    .collect();
                for host in hosts {
                    for slot in 0..self.sol.molecule(host).slots.len() {
                        if self.sol.locations[host] != Location::Free(place) {
                            break;
                        }
                        progress |= self.try_slot(place, host, slot)?;
                    }
                }
            }
            if !progress {
                return Ok(());
            }
        }
    }

    fn try_slot(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<bool> {
        let s = &self.sol.molecule(host).slots[slot];
        match (&s.state, s.sentential.is_some()) {
            (SlotState::Open, true) => self.try_sentential(place, host, slot),
            (SlotState::Open, false) => {
                if self.try_free(place, host, slot)? {
                    return Ok(true);
                }
                self.try_steal(place, host, slot)
            }
            (SlotState::Filled { .. }, false) => self.try_displace(place, host, slot),
            _ => Ok(false),
        }
    }

    /// Free nouns reachable from `place`, cheapest first; equal costs in
    /// seeded order.
    fn free_candidates(&mut self, place: PlaceId, host: MolId, slot: usize) -> Vec<(PlaceId, MolId, UnifierRecord)> {
        let dag = self.sol.molecule(host).slots[slot].dag.clone();
        let mut places = vec![place];
        places.extend(self.sol.contacts(place));
        let mut out = Vec::new();
        for pl in places {
            for &m in self.sol.contents(pl) {
                let mol = self.sol.molecule(m);
                if mol.is_verbal() {
                    continue;
                }
                if let Ok((_, rec)) = unify(&mol.cat, &dag, &self.cfg.cost) {
                    out.push((pl, m, rec.at_site(slot)));
                }
            }
        }
        out.shuffle(&mut self.rng);
        out.sort_by_key(|c| c.2.cost);
        out
    }

    fn try_free(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<bool> {
        let Some((from, m, rec)) = self.free_candidates(place, host, slot).into_iter().next() else {
            return Ok(false);
        };
        let lifted = self.lifted_of(&[place, from]);
        self.migrate(m, place)?;
        self.bind(EventKind::React, place, host, slot, m, rec, false)?;
        self.lift_events(&lifted)?;
        Ok(true)
    }

    fn try_displace(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<bool> {
        let old = match self.sol.molecule(host).slots[slot].state {
            SlotState::Filled { record, .. } => self.sol.records[record].record.cost,
            _ => return Ok(false),
        };
        let cand = self
            .free_candidates(place, host, slot)
            .into_iter()
            .find(|(_, m, rec)| rec.cost < old && !self.used.contains(&(host, slot, *m)));
        let Some((from, m, rec)) = cand else {
            return Ok(false);
        };
        self.used.insert((host, slot, m));
        let lifted = self.lifted_of(&[place, from]);
        self.unbind(place, host, slot)?;
        self.migrate(m, place)?;
        self.bind(EventKind::React, place, host, slot, m, rec, false)?;
        self.lift_events(&lifted)?;
        Ok(true)
    }

    fn steal_candidates(&mut self, place: PlaceId, host: MolId, slot: usize) -> Vec<Steal> {
        let dag = self.sol.molecule(host).slots[slot].dag.clone();
        let mut out = Vec::new();
        for other in self.sol.contacts(place) {
            if other == PlaceId::World {
                continue;
            }
            for &t in self.sol.contents(other) {
                let tm = self.sol.molecule(t);
                for (j, s) in tm.slots.iter().enumerate() {
                    let SlotState::Filled { filler, record } = s.state else { continue };
                    if s.sentential.is_some() || self.used.contains(&(host, slot, filler)) {
                        continue;
                    }
                    let old = self.sol.records[record].record.cost;
                    let Ok((_, new)) = unify(&self.sol.molecule(filler).cat, &dag, &self.cfg.cost) else { continue };
                    let tie = new.cost == old;
                    let sanctioned =
                        tie && self.rank(host) > self.rank(t) && self.cfg.tie_break.matrix_wins.contains(&new.pair);
                    if new.cost < old || sanctioned {
                        out.push(Steal { place: other, host: t, slot: j, filler, old, new: new.at_site(slot), tie });
                    }
                }
            }
        }
        out.shuffle(&mut self.rng);
        let origin = |m: MolId| self.sol.molecule(m).origin as i64;
        out.sort_by(|a, b| {
            a.new
                .cost
                .cmp(&b.new.cost)
                .then(b.old.cmp(&a.old))
                .then((origin(b.filler) - origin(host)).abs().cmp(&(origin(a.filler) - origin(host)).abs()))
                .then(b.slot.cmp(&a.slot))
        });
        out
    }

    fn contact(&mut self, outer: PlaceId, inner: PlaceId) -> Step<()> {
        if self.contacted.insert((outer, inner)) {
            let p = self.begin(&[inner, outer]);
            self.emit(EventKind::Contact, p, format!("{inner}||{outer}"), true)?;
        }
        Ok(())
    }

    fn try_steal(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<bool> {
        let Some(st) = self.steal_candidates(place, host, slot).into_iter().next() else {
            return Ok(false);
        };
        self.used.insert((host, slot, st.filler));
        self.contact(place, st.place)?;
        if st.tie {
            let p = self.begin(&[st.place, place]);
            let payload = format!(
                "{} {} ({},{}):{}={} matrix {}",
                slot_name(self.sol.molecule(host), slot),
                self.sol.term(st.filler, Reading::Raw).display(Style::Lambda),
                st.new.pair.0,
                st.new.pair.1,
                st.old,
                st.new.cost,
                self.sol.molecule(host).head().unwrap_or("?"),
            );
            self.emit(EventKind::Tiebreak, p, payload, false)?;
        }
        let lifted = self.lifted_of(&[st.place, place]);
        let f = self.unbind(st.place, st.host, st.slot)?;
        self.migrate(f, place)?;
        self.bind(EventKind::Apply, place, host, slot, f, st.new, false)?;
        self.lift_events(&lifted)?;
        self.checkpoint(&[st.place, place])?;
        Ok(true)
    }

    /// Marks the end of a membrane interaction for the process view.
    fn checkpoint(&mut self, places: &[PlaceId]) -> Step<()> {
        if let Some(last) = self.trace.events.last_mut() {
            if last.checkpoint.is_none() && places.iter().any(|p| last.places.contains(p)) {
                last.checkpoint = Some(self.sol.render_configuration());
            }
        }
        Ok(())
    }

    /// Slot of `host` that controls the subcat binder of sentential `slot`.
    fn controller(&self, host: MolId, slot: usize) -> Option<usize> {
        let m = self.sol.molecule(host);
        let sent = m.slots[slot].sentential.as_ref()?;
        if let Some(role) = &sent.control {
            return m.slot_by_role(role.as_str());
        }
        let z = &m.slots[slot].var;
        find_control_arg(&m.sem, z).and_then(|v| m.slots.iter().position(|s| s.var == v))
    }

    fn try_sentential(&mut self, place: PlaceId, host: MolId, slot: usize) -> Step<bool> {
        let (sent, dag) = {
            let s = &self.sol.molecule(host).slots[slot];
            (s.sentential.clone().expect("sentential slot"), s.dag.without_feature("subcat").without_feature("control"))
        };
        let Some(below) = self.embedded_of(host) else {
            return Ok(false);
        };
        let mut cands: Vec<(usize, MolId, usize, UnifierRecord, UnifierRecord)> = Vec::new();
        for other in self.sol.contacts(place) {
            let PlaceId::Membrane(mid) = other else { continue };
            let Some(t) = self.sol.singleton(mid) else { continue };
            if t != below {
                continue;
            }
            let tm = self.sol.molecule(t);
            let Ok((_, srec)) = unify(&tm.result_cat(), &dag, &self.cfg.cost) else { continue };
            let want = sent.subcat.atom_at(&["role"]).cloned();
            let mut sub = None;
            let mut blocked = false;
            for (j, s) in tm.open_slots() {
                if sub.is_none() && s.role().cloned() == want && s.sentential.is_none() {
                    sub = Some(j);
                } else if !s.optional {
                    blocked = true;
                }
            }
            let (Some(j), false) = (sub, blocked) else { continue };
            let Ok((_, crec)) = unify(&sent.subcat, &tm.slots[j].dag, &self.cfg.cost) else { continue };
            cands.push((mid, t, j, srec.at_site(slot), crec.at_site(j)));
        }
        let Some((mid, t, j, srec, crec)) = cands.into_iter().next() else {
            return Ok(false);
        };
        let inner = PlaceId::Membrane(mid);
        self.contact(place, inner)?;
        let lifted = self.lifted_of(&[place]);
        let ctrl = self.controller(host, slot);

        let p = self.begin(&[inner, place]);
        let mem = &mut self.sol.membranes[mid - 1];
        mem.contents.clear();
        mem.dissolved = true;
        self.sol.locations[t] = Location::Bound { host, slot };
        let sid = self.sol.records.len();
        let stext = record_text(sid, &srec);
        self.sol.records.push(RecordEntry { record: srec, kind: RecordKind::Sentential, host, slot, live: true });
        self.sol.molecules[host].slots[slot].state = SlotState::Filled { filler: t, record: sid };
        let mut payload = format!("{inner} into {} {stext}", slot_name(self.sol.molecule(host), slot));
        if let Some(c) = ctrl {
            let cid = self.sol.records.len();
            let ctext = record_text(cid, &crec);
            self.sol.records.push(RecordEntry { record: crec, kind: RecordKind::Control, host: t, slot: j, live: true });
            self.sol.molecules[t].slots[j].state = SlotState::Controlled { source: (host, c), record: cid };
            payload.push_str(&format!(
                " control {}={} {ctext}",
                slot_name(self.sol.molecule(t), j),
                slot_name(self.sol.molecule(host), c)
            ));
        }
        self.emit(EventKind::Dissolve, p, payload, false)?;
        self.lift_events(&lifted)?;
        self.checkpoint(&[place])?;
        Ok(true)
    }

    /// Embedding rank: auxiliaries above verb roots, then later above
    /// earlier, so the matrix predicate outranks what it embeds.
    fn rank(&self, m: MolId) -> (bool, usize) {
        let mol = self.sol.molecule(m);
        (mol.slots.iter().any(|s| s.sentential.is_some()), mol.origin)
    }

    /// The verbal molecule ranked just below `host`: what its sentential
    /// slot embeds.
    fn embedded_of(&self, host: MolId) -> Option<MolId> {
        let r = self.rank(host);
        (0..self.sol.molecules.len())
            .filter(|&m| self.sol.molecule(m).is_verbal() && self.rank(m) < r)
            .max_by_key(|&m| self.rank(m))
    }

    fn complete(&self) -> bool {
        self.sol
            .molecules
            .iter()
            .all(|m| m.slots.iter().all(|s| s.optional || !s.is_open()))
    }
}

/// First argument of an application headed by `Var(z)`, if it is a variable.
fn find_control_arg(t: &Term, z: &str) -> Option<String> {
    let (head, args) = t.spine();
    if matches!(head, Term::Var(v) if v == z) {
        if let Some(Term::Var(a)) = args.first() {
            return Some(a.clone());
        }
    }
    match t {
        Term::App(f, a) => find_control_arg(f, z).or_else(|| find_control_arg(a, z)),
        Term::Abs(_, body) => find_control_arg(body, z),
        _ => None,
    }
}

/// Free cost of placing `filler` into `slot` under `cost`; `None` if it
/// cannot unify.
pub fn slot_cost(filler: &FeatureStructure, slot: &FeatureStructure, cost: &CostModel) -> Option<Cost> {
    unify(filler, slot, cost).ok().map(|(_, r)| r.cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feature_dag::Weight;
    use crate::lexicon::{tokenize, Lexicon};

    fn tokens(s: &str) -> Vec<Lexeme> {
        tokenize(s, &Lexicon::bundled_core()).unwrap()
    }

    #[test]
    fn empty_input_and_zero_steps() {
        assert_eq!(run(&[], &EngineConfig::default()).unwrap_err(), EngineError::EmptyInput);
        let cfg = EngineConfig { max_steps: 0, ..EngineConfig::default() };
        assert_eq!(run(&tokens("Ken-wa"), &cfg).unwrap_err(), EngineError::ZeroSteps);
    }

    #[test]
    fn step_limit_is_distinguishable() {
        let cfg = EngineConfig { max_steps: 5, ..EngineConfig::default() };
        let out = run(&tokens("Ken-wa Naomi-ni hon-wo yom-u"), &cfg).unwrap();
        assert_eq!(out.halt, HaltReason::StepLimit);
        assert_eq!(out.trace.len(), 5);
        assert_eq!(out.trace.events.last().unwrap().payload, "step-limit");
    }

    #[test]
    fn infinite_costs_block_every_reaction() {
        let mut cost = CostModel::blank(2.into());
        cost.set("nom", "agent", Weight::Infinite);
        let cfg = EngineConfig { cost, ..EngineConfig::default() };
        let out = run(&tokens("Ken-wa Naomi-ni hon-wo yom-u"), &cfg).unwrap();
        assert!(out.trace.of_kind(EventKind::React).next().is_none());
        assert_eq!(out.halt, HaltReason::IncompleteMandatorySlot);
        assert_eq!(out.solution.world().len(), 3);
    }

    #[test]
    fn cheaper_late_noun_displaces() {
        // Naomi-ni takes the agent at cost k before Ken-wa arrives
        let out = run(&tokens("yom-u Naomi-ni Ken-wa hon-wo"), &EngineConfig::default()).unwrap();
        let sol = &out.solution;
        assert_eq!(sol.render_configuration(), "s1 |= read(K,N,B)");
        assert_eq!(sol.total_cost(), Cost::int(3));
        assert!(out.trace.of_kind(EventKind::Abstract).count() >= 1);
    }

    #[test]
    fn incumbent_table_keeps_fillers() {
        let cfg = EngineConfig { tie_break: TieBreak::incumbent(), ..EngineConfig::default() };
        let out = run(&tokens("Ken-wa Naomi-ni hon-wo yom-ase-ru"), &cfg).unwrap();
        assert!(out.trace.of_kind(EventKind::Tiebreak).next().is_none());
        assert_eq!(out.halt, HaltReason::IncompleteMandatorySlot);
    }

    #[test]
    fn control_argument_is_found_in_the_sem() {
        let t = Term::parse("\\x y z.make(x,y,z(y))").unwrap();
        let (_, body) = t.strip_binders();
        // parse treats unbound names as constants, so check on the bound body
        assert_eq!(find_control_arg(body, "z"), Some("y".into()));
        assert_eq!(find_control_arg(body, "w"), None);
    }
}
