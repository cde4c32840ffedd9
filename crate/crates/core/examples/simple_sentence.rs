//! Parses the plain transitive sentence and prints the full report the
//! `chamcug` binary would print.

use cham_cug::cham_engine::EngineConfig;
use cham_cug::cli::{process, Format, TraceMode};
use cham_cug::lexicon::Lexicon;

fn main() {
    let lex = Lexicon::bundled_core();
    let sentence = std::env::args().nth(1).unwrap_or_else(|| "Ken-wa Naomi-ni hon-wo yom-u".into());
    match process(&sentence, &lex, &EngineConfig::default()) {
        Ok(report) => print!("{}", report.render(TraceMode::Events, Format::Text)),
        Err(e) => eprintln!("{e}"),
    }
}
