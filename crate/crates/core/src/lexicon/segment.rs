//! Agglutinative segmentation: `yom-ase-(r)-are-ru` ↦ yom- -ase- -are- -(r)u.

use thiserror::Error;

use super::{Kind, Lexicon, LexiconEntry, Origin};
use crate::feature_dag::{unify, CostModel, FeatureStructure};
use crate::lambda_core::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("cannot segment `{token}`: no morpheme matches `{residue}`")]
    UnknownToken { token: String, residue: String },
    #[error("case marker `{0}` has no preceding noun")]
    OrphanCaseMarker(String),
    #[error("tense marker `{0}` has no verbal host")]
    NoVerbalHost(String),
    #[error("`{marker}` does not unify with `{host}`")]
    Incompatible { marker: String, host: String },
}

/// One matched morpheme: the lexicon surface and the text it consumed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morpheme {
    pub surface: String,
    pub text: String,
}

/// A lexical item ready for injection: nouns fused with their case marker,
/// verbal morphemes with tense folded in.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexeme {
    /// `Ken-wa`, `yom-`, `-ase-`.
    pub surface: String,
    pub kind: Kind,
    pub sem: Term,
    pub cat: FeatureStructure,
    pub origin: Origin,
}

impl Lexeme {
    pub fn spawns_membrane(&self) -> bool {
        self.kind.is_verbal()
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Start,
    AfterNoun,
    Closed,
    AfterVerbal,
}

impl State {
    fn allows(self, k: Kind) -> bool {
        match self {
            State::Start => matches!(k, Kind::Noun | Kind::CaseMarkedNoun | Kind::VerbRoot),
            State::AfterNoun => k == Kind::CaseMarker,
            State::Closed => false,
            State::AfterVerbal => matches!(k, Kind::Auxiliary | Kind::TenseMarker),
        }
    }

    fn after(k: Kind) -> State {
        match k {
            Kind::Noun => State::AfterNoun,
            Kind::VerbRoot | Kind::Auxiliary => State::AfterVerbal,
            Kind::CaseMarker | Kind::CaseMarkedNoun | Kind::TenseMarker => State::Closed,
        }
    }
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn vowel_final(s: &str) -> bool {
    s.chars().last().is_some_and(is_vowel)
}

fn vowel_initial(s: &str) -> bool {
    s.chars().next().is_some_and(is_vowel)
}

/// Texts an entry can consume, given whether the previous morpheme ended
/// in a vowel.
fn forms(e: &LexiconEntry, prev_vowel: bool) -> Vec<String> {
    let stem = e.stem();
    let mut out = Vec::new();
    if let Some(rest) = stem.strip_prefix("(r)") {
        out.push(format!("r{rest}"));
        out.push(rest.to_string());
    } else {
        out.push(stem.to_string());
        if prev_vowel && vowel_initial(stem) {
            out.push(format!("r{stem}"));
        }
    }
    out
}

fn search<'a>(lex: &'a Lexicon, s: &str, pos: usize, state: State, prev_vowel: bool) -> Option<Vec<(&'a LexiconEntry, String)>> {
    if pos == s.len() {
        return Some(Vec::new());
    }
    let mut cands: Vec<(&LexiconEntry, String)> = lex
        .entries()
        .filter(|e| state.allows(e.kind))
        .flat_map(|e| forms(e, prev_vowel).into_iter().map(move |f| (e, f)))
        .filter(|(_, f)| !f.is_empty() && s[pos..].starts_with(f.as_str()))
        .collect();
    cands.sort_by(|a, b| b.1.len().cmp(&a.1.len()).then(a.0.surface.cmp(&b.0.surface)));
    for (e, f) in cands {
        let next = pos + f.len();
        if let Some(mut rest) = search(lex, s, next, State::after(e.kind), vowel_final(&f)) {
            rest.insert(0, (e, f));
            return Some(rest);
        }
    }
    None
}

/// Longest-match decomposition honoring noun (+case) | root (+aux)* (+tense).
pub fn segment(token: &str, lex: &Lexicon) -> Result<Vec<Morpheme>, SegmentError> {
    let flat: String = token.replace("(r)", "").replace('-', "");
    match search(lex, &flat, 0, State::Start, false) {
        Some(parts) => Ok(parts.into_iter().map(|(e, text)| Morpheme { surface: e.surface.clone(), text }).collect()),
        None => {
            // report the residue after the longest segmentable prefix
            let mut best = 0;
            for end in (0..=flat.len()).rev().filter(|&i| flat.is_char_boundary(i)) {
                if search(lex, &flat[..end], 0, State::Start, false).is_some() {
                    best = end;
                    break;
                }
            }
            Err(SegmentError::UnknownToken { token: token.to_string(), residue: flat[best..].to_string() })
        }
    }
}

/// Inverse of `segment` for lexicon surfaces, writing the epenthetic `(r)`
/// the way the sample sentences do: `yom-ase-(r)-are-ru`.
pub fn join(surfaces: &[&str]) -> String {
    let mut pieces: Vec<String> = Vec::new();
    let mut prev_vowel = false;
    for s in surfaces {
        let stem = s.trim_matches('-');
        let piece = if let Some(rest) = stem.strip_prefix("(r)") {
            if prev_vowel { format!("r{rest}") } else { rest.to_string() }
        } else {
            if prev_vowel && vowel_initial(stem) {
                pieces.push("(r)".into());
            }
            stem.to_string()
        };
        prev_vowel = vowel_final(&piece);
        pieces.push(piece);
    }
    pieces.join("-")
}

/// Turns one token's morphemes into lexemes, appending to `out` so tense
/// markers can reach a host from an earlier token.
fn lookup_into(token: &str, morphemes: &[Morpheme], lex: &Lexicon, out: &mut Vec<Lexeme>) -> Result<(), SegmentError> {
    let cost = CostModel::default();
    let start = out.len();
    for m in morphemes {
        let e = lex.get(&m.surface).expect("segment only yields known surfaces");
        match e.kind {
            Kind::CaseMarker => {
                let host = out[start..]
                    .last_mut()
                    .filter(|l| l.kind == Kind::Noun)
                    .ok_or_else(|| SegmentError::OrphanCaseMarker(m.surface.clone()))?;
                let (cat, _) = unify(&host.cat, &e.cat, &cost)
                    .map_err(|_| SegmentError::Incompatible { marker: m.surface.clone(), host: host.surface.clone() })?;
                host.cat = cat;
                host.kind = Kind::CaseMarkedNoun;
                host.surface = token.to_string();
            }
            Kind::TenseMarker => {
                let host = out
                    .iter_mut()
                    .rev()
                    .find(|l| l.kind.is_verbal())
                    .ok_or_else(|| SegmentError::NoVerbalHost(m.surface.clone()))?;
                let (cat, _) = unify(&host.cat, &e.cat, &cost)
                    .map_err(|_| SegmentError::Incompatible { marker: m.surface.clone(), host: host.surface.clone() })?;
                host.cat = cat;
            }
            _ => out.push(Lexeme {
                surface: if e.kind.is_verbal() { e.surface.clone() } else { token.to_string() },
                kind: e.kind,
                sem: e.sem.clone().expect("non-marker entries carry sem"),
                cat: e.cat.clone(),
                origin: e.origin,
            }),
        }
    }
    Ok(())
}

/// Lexemes for one token's morphemes.
pub fn lookup(token: &str, morphemes: &[Morpheme], lex: &Lexicon) -> Result<Vec<Lexeme>, SegmentError> {
    let mut out = Vec::new();
    lookup_into(token, morphemes, lex, &mut out)?;
    Ok(out)
}

/// Segments and looks up a whitespace-separated sentence. A final `.` is
/// ignored.
pub fn tokenize(sentence: &str, lex: &Lexicon) -> Result<Vec<Lexeme>, SegmentError> {
    let mut out = Vec::new();
    for token in sentence.trim().trim_end_matches('.').split_whitespace() {
        let ms = segment(token, lex)?;
        lookup_into(token, &ms, lex, &mut out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(token: &str, lex: &Lexicon) -> Vec<String> {
        segment(token, lex).unwrap().into_iter().map(|m| m.surface).collect()
    }

    #[test]
    fn table_rows_segment() {
        let lex = Lexicon::bundled_with_derived();
        assert_eq!(surfaces("yom-u", &lex), ["yom-", "-(r)u"]);
        assert_eq!(surfaces("yom-ase-ru", &lex), ["yom-", "-ase-", "-(r)u"]);
        assert_eq!(surfaces("yom-are-ru", &lex), ["yom-", "-are-", "-(r)u"]);
        assert_eq!(surfaces("yom-ase-(r)-are-ru", &lex), ["yom-", "-ase-", "-are-", "-(r)u"]);
        assert_eq!(surfaces("yom-aseru", &lex), ["yom-", "-ase-", "-(r)u"]);
        assert_eq!(surfaces("yom-aserareru", &lex), ["yom-", "-ase-", "-are-", "-(r)u"]);
        assert_eq!(surfaces("Ken-wa", &lex), ["Ken", "-wa"]);
    }

    #[test]
    fn join_inverts_segment() {
        let lex = Lexicon::bundled_with_derived();
        for row in ["yom-u", "yom-ase-ru", "yom-are-ru", "yom-ase-(r)-are-ru", "Ken-wa", "Naomi-ni", "hon-wo"] {
            let ms = surfaces(row, &lex);
            let refs: Vec<&str> = ms.iter().map(String::as_str).collect();
            assert_eq!(join(&refs), row);
        }
    }

    #[test]
    fn unknown_residue_is_named() {
        let lex = Lexicon::bundled_core();
        assert_eq!(
            segment("yom-are-ru", &lex),
            Err(SegmentError::UnknownToken { token: "yom-are-ru".into(), residue: "areru".into() })
        );
        assert!(matches!(segment("Taro-wa", &lex), Err(SegmentError::UnknownToken { .. })));
    }

    #[test]
    fn nouns_fuse_with_case() {
        let lex = Lexicon::bundled_core();
        let items = tokenize("Naomi-ni hon-wo", &lex).unwrap();
        assert_eq!(items.len(), 2);
        assert_eq!(items[0].surface, "Naomi-ni");
        assert_eq!(items[0].cat, FeatureStructure::parse("(dag (cat N) (case dat))").unwrap());
        assert_eq!(items[1].cat, FeatureStructure::parse("(dag (cat N) (case acc))").unwrap());
        assert_eq!(items[1].sem, Term::constant("B"));
    }

    #[test]
    fn tense_marks_the_nearest_verbal_host() {
        let lex = Lexicon::bundled_core();
        let items = tokenize("yom-ase-ru", &lex).unwrap();
        assert_eq!(items.len(), 2);
        assert!(items[0].cat.atom_at(&["val", "form", "form"]).is_none());
        assert_eq!(items[1].cat.atom_at(&["val", "form", "form"]).unwrap().as_str(), "finite");
        let read = tokenize("yom-u", &lex).unwrap();
        assert_eq!(read[0].cat.atom_at(&["val", "form", "form"]).unwrap().as_str(), "finite");
        assert!(read[0].spawns_membrane());
    }

    #[test]
    fn orphan_markers() {
        let lex = Lexicon::bundled_core();
        let m = vec![Morpheme { surface: "-wa".into(), text: "wa".into() }];
        assert_eq!(lookup("wa", &m, &lex), Err(SegmentError::OrphanCaseMarker("-wa".into())));
        let t = vec![Morpheme { surface: "-(r)u".into(), text: "u".into() }];
        assert_eq!(lookup("u", &t, &lex), Err(SegmentError::NoVerbalHost("-(r)u".into())));
    }
}
