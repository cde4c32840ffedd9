//! Agglutinative segmentation against the bundled lexicon, and the lexemes
//! the engine receives after case markers and tense fuse into their hosts.

use cham_cug::lexicon::{segment, tokenize, Lexicon};

fn main() {
    let lex = Lexicon::bundled_with_derived();
    println!("{} entries", lex.len());
    for token in ["Ken-wa", "hon-wo", "yom-u", "yom-ase-ru", "yom-are-ru", "yom-ase-(r)-are-ru", "yom-xyz"] {
        match segment(token, &lex) {
            Ok(ms) => println!("{token:<20} {}", ms.iter().map(|m| m.surface.as_str()).collect::<Vec<_>>().join(" + ")),
            Err(e) => println!("{token:<20} error: {e}"),
        }
    }
    println!();
    for lx in tokenize("Ken-wa Naomi-ni hon-wo yom-ase-ru", &lex).unwrap() {
        println!("{:<10} {:<17} {:<26} {}", lx.surface, lx.kind.as_str(), lx.sem.to_string(), lx.cat);
    }
}
