//! Brute-force enumeration of noun placements, compared with the engine's
//! final assignment.

use cham_cug::cham_engine::{minimal, oracle_enumerate, placement_of, run, EngineConfig};
use cham_cug::lexicon::{tokenize, Lexicon};

fn main() {
    let lex = Lexicon::bundled_with_derived();
    let cfg = EngineConfig::default();
    for sentence in ["Ken-wa Naomi-ni hon-wo yom-u", "Ken-wa Naomi-ni hon-wo yom-ase-(r)-are-ru"] {
        let tokens = tokenize(sentence, &lex).unwrap();
        let all = oracle_enumerate(&tokens, &cfg).unwrap();
        let (best, winners) = minimal(&all).expect("some complete assignment");
        let out = run(&tokens, &cfg).unwrap();
        let placed = placement_of(&out.solution);
        println!("{sentence}");
        println!("  {} assignments, {} complete, minimum {best}", all.len(), all.iter().filter(|a| a.complete).count());
        for w in &winners {
            let slots: Vec<String> = w.placement.iter().map(|(k, n)| format!("{k}={n}")).collect();
            println!("  minimal: {}", slots.join(" "));
        }
        println!("  engine cost {} minimal: {}", out.solution.total_cost(), winners.iter().any(|w| w.placement == placed));
    }
}
