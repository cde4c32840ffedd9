mod common;

use cham_cug::cli::{answer_agent, main_with};
use cham_cug::lexicon::Lexicon;
use common::{PLAIN, CAUSATIVE, PASSIVE, CAUSATIVE_PASSIVE};

fn cli(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut argv = vec!["chamcug"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = main_with(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    out.lines().find_map(|l| l.strip_prefix(prefix.as_str())).unwrap_or_else(|| panic!("no {key} in\n{out}"))
}

#[test]
fn process_trace_prints_golden_lines_first() {
    let (code, out, _) = cli(&["--trace", "fig4", CAUSATIVE], "");
    assert_eq!(code, 0);
    let head: Vec<&str> = out.lines().take(4).collect();
    assert_eq!(head, common::PROCESS_GOLDEN.lines().collect::<Vec<_>>());
    assert_eq!(field(&out, "raw"), "make(K,N,\\y.read(N,y,B)) : S");
}

#[test]
fn simple_sentence_report() {
    let (code, out, err) = cli(&[PLAIN], "");
    assert_eq!((code, err.as_str()), (0, ""));
    assert_eq!(field(&out, "raw"), "read(K,N,B) : S");
    assert_eq!(field(&out, "cost"), "3");
    assert_eq!(field(&out, "halt"), "quiescent");
    assert_eq!(field(&out, "agent"), "Ken");
    assert_eq!(field(&out, "segmentation"), "Ken -wa | Naomi -ni | hon -wo | yom- -(r)u");
}

#[test]
fn lone_noun_is_quiescent() {
    let (code, out, _) = cli(&["Ken-wa"], "");
    assert_eq!(code, 0);
    assert_eq!(field(&out, "solution"), "W |= K");
    assert_eq!(field(&out, "raw"), "none");
}

#[test]
fn agents_alternate() {
    let core = Lexicon::bundled_core();
    let derived = Lexicon::bundled_with_derived();
    assert_eq!(answer_agent(PLAIN, &core).unwrap(), "Ken");
    assert_eq!(answer_agent(CAUSATIVE, &core).unwrap(), "Naomi");
    assert_eq!(answer_agent(PASSIVE, &derived).unwrap(), "Naomi");
    assert_eq!(answer_agent(CAUSATIVE_PASSIVE, &derived).unwrap(), "Ken");
    assert!(answer_agent(PASSIVE, &core).is_err());
}

#[test]
fn derived_lexicon_is_opt_in() {
    let (code, _, err) = cli(&[PASSIVE], "");
    assert_eq!(code, 2);
    assert!(err.contains("yom-are-ru"), "{err}");
    let (code, out, _) = cli(&["--lexicon", "bundled:core", "--lexicon", "bundled:derived", PASSIVE], "");
    assert_eq!(code, 0);
    assert_eq!(field(&out, "agent"), "Naomi");
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["yom-u"], "").0, 1);
    assert_eq!(cli(&["--max-steps", "4", CAUSATIVE], "").0, 3);
    assert_eq!(cli(&["--max-steps", "0", CAUSATIVE], "").0, 2);
    assert_eq!(cli(&["--k", "1", PLAIN], "").0, 2);
    assert_eq!(cli(&["--k", "abc", PLAIN], "").0, 2);
    assert_eq!(cli(&["--lexicon", "/nonexistent.lex", PLAIN], "").0, 2);
    assert_eq!(cli(&["--bogus"], "").0, 2);
    assert_eq!(cli(&[], "").0, 2);
    assert_eq!(cli(&["--help"], "").0, 0);
}

#[test]
fn stdin_sentences_get_one_report_each() {
    let (code, out, _) = cli(&[], &format!("{PLAIN}\n\n{CAUSATIVE}\nyom-u\n"));
    assert_eq!(code, 1);
    assert_eq!(out.matches("input: ").count(), 3);
}

#[test]
fn records_format_quotes_values() {
    let (code, out, _) = cli(&["--format", "records", "--trace", "events", CAUSATIVE], "");
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("step=1 kind=inject")), "{out}");
    assert!(out.contains("kind=tiebreak"));
    assert!(out.lines().any(|l| l == "cost=\"3\""));
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 2] = [
        &["--lexicon", "bundled:core", "--lexicon", "bundled:derived", "--trace", "events", "--seed", "7", CAUSATIVE_PASSIVE],
        &["--trace", "fig4", "--format", "records", CAUSATIVE],
    ];
    for args in runs {
        assert_eq!(cli(args, ""), cli(args, ""));
    }
}
