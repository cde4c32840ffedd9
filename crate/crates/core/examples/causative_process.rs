//! The causative sentence, step by step: membrane configurations as the
//! causative auxiliary pulls Ken and Naomi out of read's membrane and then
//! swallows it.

use cham_cug::cham_engine::{run, EngineConfig, EventKind, Reading};
use cham_cug::lexicon::{tokenize, Lexicon};

fn main() {
    let lex = Lexicon::bundled_core();
    let tokens = tokenize("Ken-wa Naomi-ni hon-wo yom-ase-ru", &lex).expect("sample sentence segments");
    let out = run(&tokens, &EngineConfig::default()).expect("non-empty input");

    for line in out.trace.process_lines() {
        println!("{line}");
    }
    println!();
    for e in out.trace.of_kind(EventKind::Tiebreak) {
        println!("tie: {}", e.payload);
    }
    let top = out.solution.live_membranes().last().and_then(|m| m.contents.first().copied()).unwrap();
    println!("raw:     {}", out.solution.term(top, Reading::Raw));
    println!("applied: {}", out.solution.term(top, Reading::Applied));
    println!("cost {} ({})", out.solution.total_cost(), out.solution.render_records());
    println!("halt {}", out.halt.as_str());
}
