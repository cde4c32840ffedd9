//! Who reads? Stacking causative and passive auxiliaries on `yom-` moves
//! the reading agent between Ken and Naomi.

use cham_cug::cli::answer_agent;
use cham_cug::lexicon::Lexicon;

fn main() {
    let core = Lexicon::bundled_core();
    let derived = Lexicon::bundled_with_derived();
    let rows = [
        ("Ken-wa Naomi-ni hon-wo yom-u", &core),
        ("Ken-wa Naomi-ni hon-wo yom-ase-ru", &core),
        ("Ken-wa Naomi-ni hon-wo yom-are-ru", &derived),
        ("Ken-wa Naomi-ni hon-wo yom-ase-(r)-are-ru", &derived),
    ];
    for (sentence, lex) in rows {
        let who = answer_agent(sentence, lex).unwrap_or_else(|e| format!("({e})"));
        println!("{sentence:<44} {who}");
    }
}
