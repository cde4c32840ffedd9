mod common;

use cham_cug::cham_engine::{
    minimal, oracle_enumerate, placement_of, run, EngineConfig, EventKind, HaltReason, OracleError, PlaceId, Reading,
    SlotKey,
};
use cham_cug::feature_dag::Cost;
use cham_cug::lambda_core::{alpha_eq, Term};
use cham_cug::lexicon::{tokenize, Lexicon};
use common::{PLAIN, CAUSATIVE, PASSIVE, CAUSATIVE_PASSIVE};

fn term(s: &str) -> Term {
    Term::parse(s).unwrap()
}

fn run_sentence(sentence: &str, lex: &Lexicon) -> cham_cug::cham_engine::RunResult {
    run(&tokenize(sentence, lex).unwrap(), &EngineConfig::default()).unwrap()
}

fn top_term(out: &cham_cug::cham_engine::RunResult, reading: Reading) -> Term {
    let mains = cham_cug::cli::main_molecules(&out.solution);
    assert_eq!(mains.len(), 1, "{}", out.solution.render_configuration());
    out.solution.term(mains[0], reading)
}

#[test]
fn simple_sentence_saturates_read() {
    let out = run_sentence(PLAIN, &Lexicon::bundled_core());
    assert_eq!(out.halt, HaltReason::Quiescent);
    assert_eq!(out.solution.live_membranes().count(), 1);
    assert_eq!(out.solution.contents(PlaceId::Membrane(1)).len(), 1);
    assert!(alpha_eq(&top_term(&out, Reading::Raw), &term("read(K,N,B)")));
    let costs: Vec<Cost> = out.solution.live_records().map(|(_, r)| r.record.cost).collect();
    assert_eq!(costs, vec![Cost::ONE; 3]);
    assert_eq!(out.solution.total_cost(), Cost::int(3));
    assert!(out.solution.world().is_empty());
}

#[test]
fn causative_process_matches_golden() {
    let out = run_sentence(CAUSATIVE, &Lexicon::bundled_core());
    let lines = out.trace.process_lines();
    let golden: Vec<&str> = common::PROCESS_GOLDEN.lines().collect();
    assert_eq!(lines, golden);
    assert!(alpha_eq(&top_term(&out, Reading::Raw), &term("make(K,N,\\y.read(N,y,B))")));
    assert!(alpha_eq(&top_term(&out, Reading::Applied), &term("make(K,N,read(N,N,B))")));
    assert_eq!(out.solution.total_cost(), Cost::int(3));
    let ties: Vec<_> = out.trace.of_kind(EventKind::Tiebreak).collect();
    assert_eq!(ties.len(), 2);
    assert!(ties[0].payload.contains("nom") && ties[0].payload.contains("agent"), "{}", ties[0].payload);
}

#[test]
fn passive_rows_use_the_derived_entry() {
    let lex = Lexicon::bundled_with_derived();
    let out = run_sentence(PASSIVE, &lex);
    assert_eq!(out.halt, HaltReason::Quiescent);
    assert!(alpha_eq(&top_term(&out, Reading::Applied), &term("suffer(K,N,read(N,K,B))")));
    let out = run_sentence(CAUSATIVE_PASSIVE, &lex);
    assert_eq!(out.halt, HaltReason::Quiescent);
    assert!(alpha_eq(&top_term(&out, Reading::Applied), &term("suffer(K,N,make(N,K,read(K,K,B)))")));
    assert!(Lexicon::bundled_core().get("-are-").is_none());
}

#[test]
fn lone_noun_stays_in_the_world() {
    let out = run_sentence("Ken-wa", &Lexicon::bundled_core());
    assert_eq!(out.halt, HaltReason::Quiescent);
    assert_eq!(out.solution.render_configuration(), "W |= K");
    assert_eq!(out.solution.total_cost(), Cost::ZERO);
}

#[test]
fn verb_without_nouns_is_incomplete() {
    let out = run_sentence("yom-u", &Lexicon::bundled_core());
    assert_eq!(out.halt, HaltReason::IncompleteMandatorySlot);
}

#[test]
fn step_limit_is_reported() {
    let tokens = tokenize(CAUSATIVE, &Lexicon::bundled_core()).unwrap();
    let out = run(&tokens, &EngineConfig { max_steps: 5, ..EngineConfig::default() }).unwrap();
    assert_eq!(out.halt, HaltReason::StepLimit);
    assert_eq!(out.steps(), 5);
    assert_eq!(out.trace.events.last().unwrap().kind, EventKind::Halt);
}

#[test]
fn oracle_finds_the_unique_minimum_for_the_simple_sentence() {
    let tokens = tokenize(PLAIN, &Lexicon::bundled_core()).unwrap();
    let all = oracle_enumerate(&tokens, &EngineConfig::default()).unwrap();
    assert!(all.iter().any(|a| a.placement.is_empty() && a.cost == Cost::ZERO));
    let (best, winners) = minimal(&all).unwrap();
    assert_eq!(best, Cost::int(3));
    assert_eq!(winners.len(), 1, "{winners:#?}");
    let key = |r: &str| SlotKey { predicate: "read".into(), role: r.into() };
    let want = [(key("agent"), "K"), (key("co-agent"), "N"), (key("object"), "B")]
        .into_iter()
        .map(|(k, n)| (k, n.to_string()))
        .collect();
    assert_eq!(winners[0].placement, want);
}

#[test]
fn engine_cost_is_minimal_on_bundled_sentences() {
    for (sentence, lex) in common::bundled_sentences() {
        let tokens = tokenize(sentence, &lex).unwrap();
        let out = run(&tokens, &EngineConfig::default()).unwrap();
        let all = oracle_enumerate(&tokens, &EngineConfig::default()).unwrap();
        let (best, winners) = minimal(&all).unwrap();
        assert_eq!(out.solution.total_cost(), best, "{sentence}");
        let placed = placement_of(&out.solution);
        assert!(winners.iter().any(|a| a.placement == placed), "{sentence}: {placed:?}");
    }
}

#[test]
fn oracle_refuses_long_inputs() {
    let lex = Lexicon::bundled_core();
    let mut tokens = tokenize(CAUSATIVE, &lex).unwrap();
    tokens.extend(tokenize("Ken-wa Naomi-ni", &lex).unwrap());
    assert_eq!(oracle_enumerate(&tokens, &EngineConfig::default()), Err(OracleError::TooManyTokens(7)));
}

#[test]
fn larger_k_keeps_the_sample_parse() {
    let tokens = tokenize(CAUSATIVE, &Lexicon::bundled_core()).unwrap();
    let cost = cham_cug::feature_dag::CostModel::default().with_k(num_rational::Ratio::new(7, 2)).unwrap();
    let out = run(&tokens, &EngineConfig { cost, ..EngineConfig::default() }).unwrap();
    assert_eq!(out.trace.process_lines(), common::PROCESS_GOLDEN.lines().collect::<Vec<_>>());
}

#[test]
fn shuffled_runs_conserve_and_terminate() {
    for seed in 0..20 {
        common::check_shuffled_run(seed).unwrap();
    }
}

#[test]
fn traces_are_deterministic() {
    let tokens = tokenize(CAUSATIVE_PASSIVE, &Lexicon::bundled_with_derived()).unwrap();
    let cfg = EngineConfig { seed: 42, ..EngineConfig::default() };
    let a = run(&tokens, &cfg).unwrap();
    let b = run(&tokens, &cfg).unwrap();
    assert_eq!(a.trace.render_records(), b.trace.render_records());
}
