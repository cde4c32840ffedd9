//! Brute-force assignment enumeration, used to check cost minimality.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::feature_dag::{unify, Cost};
use crate::lexicon::Lexeme;

use super::molecule::SlotState;
use super::run::EngineConfig;
use super::solution::{Location, RecordKind, Solution};

pub const MAX_ORACLE_TOKENS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} tokens exceed the oracle budget of {MAX_ORACLE_TOKENS}")]
    TooManyTokens(usize),
}

/// `read.object` and the like.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlotKey {
    pub predicate: String,
    pub role: String,
}

impl std::fmt::Display for SlotKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.predicate, self.role)
    }
}

/// Noun constants placed into slots.
pub type Placement = BTreeSet<(SlotKey, String)>;

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    pub placement: Placement,
    pub cost: Cost,
    /// Mandatory slots filled and no leftover noun fits an open slot.
    pub complete: bool,
}

struct OSlot {
    key: SlotKey,
    dag: crate::feature_dag::FeatureStructure,
    optional: bool,
}

/// Every injective noun-to-slot assignment at finite cost. Predicates are
/// chained: each auxiliary embeds the one before it, whose subcategorized
/// slot is then controlled and not assignable.
pub fn oracle_enumerate(tokens: &[Lexeme], cfg: &EngineConfig) -> Result<Vec<Assignment>, OracleError> {
    if tokens.len() > MAX_ORACLE_TOKENS {
        return Err(OracleError::TooManyTokens(tokens.len()));
    }
    let nouns: Vec<&Lexeme> = tokens.iter().filter(|t| !t.kind.is_verbal()).collect();
    // verb roots embed first, then auxiliaries in arrival order
    let mut preds: Vec<&Lexeme> = tokens.iter().filter(|t| t.kind.is_verbal()).collect();
    preds.sort_by_key(|p| p.cat.args().iter().any(|a| a.get(&["subcat"]).is_some()));
    let mut slots = Vec::new();
    for (i, p) in preds.iter().enumerate() {
        let head = p.sem.head_constant().unwrap_or("?").to_string();
        let controlled_role = preds
            .get(i + 1)
            .and_then(|next| next.cat.args().into_iter().find_map(|a| a.get(&["subcat"])))
            .and_then(|sub| sub.atom_at(&["role"]).map(|r| r.as_str().to_string()));
        for a in p.cat.args() {
            if a.get(&["subcat"]).is_some() {
                continue;
            }
            let role = a.atom_at(&["role"]).map(|r| r.as_str().to_string()).unwrap_or_default();
            if controlled_role.as_deref() == Some(role.as_str()) {
                continue;
            }
            let optional = a.atom_at(&["optionality"]).is_some_and(|l| l.as_str() == "+");
            slots.push(OSlot { key: SlotKey { predicate: head.clone(), role }, dag: a, optional });
        }
    }
    // cost[n][s], None when the pair cannot unify
    let cost: Vec<Vec<Option<Cost>>> = nouns
        .iter()
        .map(|n| {
            slots
                .iter()
                .map(|s| unify(&n.cat, &s.dag, &cfg.cost).ok().map(|(_, r)| r.cost))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut choice: Vec<Option<usize>> = vec![None; nouns.len()];
    enumerate(0, &mut choice, &cost, &mut vec![false; slots.len()], &mut |choice| {
        let mut placement = Placement::new();
        let mut total = Cost::ZERO;
        for (n, c) in choice.iter().enumerate() {
            if let Some(s) = c {
                total = total + cost[n][*s].expect("only finite choices");
                placement.insert((slots[*s].key.clone(), noun_name(nouns[n])));
            }
        }
        let taken: Vec<bool> = (0..slots.len()).map(|s| choice.contains(&Some(s))).collect();
        let mandatory = slots.iter().enumerate().all(|(s, sl)| sl.optional || taken[s]);
        let maximal = choice
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_none())
            .all(|(n, _)| (0..slots.len()).all(|s| taken[s] || cost[n][s].is_none()));
        out.push(Assignment { placement, cost: total, complete: mandatory && maximal });
    });
    Ok(out)
}

fn enumerate(
    n: usize,
    choice: &mut Vec<Option<usize>>,
    cost: &[Vec<Option<Cost>>],
    taken: &mut Vec<bool>,
    visit: &mut dyn FnMut(&[Option<usize>]),
) {
    if n == choice.len() {
        visit(choice);
        return;
    }
    choice[n] = None;
    enumerate(n + 1, choice, cost, taken, visit);
    for s in 0..taken.len() {
        if !taken[s] && cost[n][s].is_some() {
            taken[s] = true;
            choice[n] = Some(s);
            enumerate(n + 1, choice, cost, taken, visit);
            taken[s] = false;
        }
    }
    choice[n] = None;
}

fn noun_name(l: &Lexeme) -> String {
    l.sem.to_string()
}

/// Minimum cost over the complete assignments that place the most nouns,
/// with the assignments reaching it.
pub fn minimal(assignments: &[Assignment]) -> Option<(Cost, Vec<&Assignment>)> {
    let most = assignments.iter().filter(|a| a.complete).map(|a| a.placement.len()).max()?;
    let pool: Vec<&Assignment> =
        assignments.iter().filter(|a| a.complete && a.placement.len() == most).collect();
    let best = pool.iter().map(|a| a.cost).min()?;
    Some((best, pool.into_iter().filter(|a| a.cost == best).collect()))
}

/// The engine's final noun placement in oracle terms.
pub fn placement_of(sol: &Solution) -> Placement {
    let mut out = Placement::new();
    for (_, r) in sol.live_records() {
        if r.kind != RecordKind::Fill {
            continue;
        }
        let host = sol.molecule(r.host);
        let SlotState::Filled { filler, .. } = host.slots[r.slot].state else { continue };
        debug_assert_eq!(sol.location(filler), Location::Bound { host: r.host, slot: r.slot });
        let role = host.slots[r.slot].role().map(|l| l.as_str().to_string()).unwrap_or_default();
        out.insert((
            SlotKey { predicate: host.head().unwrap_or("?").to_string(), role },
            sol.molecule(filler).sem.to_string(),
        ));
    }
    out
}
