//! Chemical abstract machine: lexical molecules react inside membranes
//! until every predicate's valences are saturated or nothing can move.
//!
//! Verbal molecules spawn membranes; nouns float in the world W. Open slots
//! take the cheapest free noun, then may pull a bound noun out of a
//! contacting membrane when that lowers the cost (or wins a tie), and
//! sentential slots swallow a saturated neighbouring membrane whole.

mod molecule;
mod oracle;
mod run;
mod solution;
mod trace;

pub use molecule::{MolId, Molecule, RecordId, Sentential, Slot, SlotState};
pub use oracle::{minimal, oracle_enumerate, placement_of, Assignment, OracleError, Placement, SlotKey, MAX_ORACLE_TOKENS};
pub use run::{run, slot_cost, EngineConfig, EngineError, HaltReason, RunResult, TieBreak};
pub use solution::{Location, Membrane, PlaceId, Reading, RecordEntry, RecordKind, Solution};
pub use trace::{Counts, Event, EventKind, Trace};
