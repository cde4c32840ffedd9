//! Scrambled noun orders reach the same reading: molecules meet in the
//! solution regardless of arrival order. Also checks each run's trace.

use cham_cug::cham_engine::{run, EngineConfig, Reading};
use cham_cug::cli::main_molecules;
use cham_cug::lexicon::{tokenize, Lexicon};

fn main() {
    let lex = Lexicon::bundled_core();
    for sentence in [
        "Ken-wa Naomi-ni hon-wo yom-ase-ru",
        "hon-wo Ken-wa Naomi-ni yom-ase-ru",
        "Naomi-ni hon-wo Ken-wa yom-ase-ru",
        "yom-ase-ru Naomi-ni Ken-wa hon-wo",
    ] {
        let out = run(&tokenize(sentence, &lex).unwrap(), &EngineConfig::default()).unwrap();
        let sol = &out.solution;
        let term = main_molecules(sol).first().map(|&m| sol.term(m, Reading::Applied).to_string());
        let checks = out.trace.check_conservation().and(out.trace.replay(sol)).and(sol.check_typing());
        println!(
            "{sentence:<36} {:<24} cost {} steps {:>3} {}",
            term.unwrap_or_else(|| "-".into()),
            sol.total_cost(),
            out.steps(),
            if checks.is_ok() { "ok" } else { "CHECK FAILED" }
        );
    }
}
