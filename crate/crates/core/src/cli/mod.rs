//! Command-line driver. `chamcug` is a thin wrapper around [`main_with`].

use std::io::{BufRead, Write};

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::cham_engine::{run, EngineConfig, EngineError, HaltReason, Reading, RunResult, Solution};
use crate::feature_dag::{parse_rational, CostModel};
use crate::lambda_core::{Style, Term, TypeExpr};
use crate::lexicon::{segment, tokenize, Kind, Lexicon, LexiconError, SegmentError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TraceMode {
    Off,
    Events,
    #[value(name = "fig4")]
    Process,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Records,
}

/// Parse romanized Japanese with the membrane engine.
#[derive(Debug, Parser)]
#[command(name = "chamcug", version)]
pub struct Args {
    /// Lexicon file; `bundled:core` and `bundled:derived` name the built-in
    /// files. Repeatable. Defaults to `bundled:core`.
    #[arg(long = "lexicon", value_name = "PATH")]
    pub lexicons: Vec<String>,
    /// The k weight of the cost table (rational, > 1).
    #[arg(long, default_value = "2")]
    pub k: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub max_steps: usize,
    #[arg(long, value_enum, default_value_t = TraceMode::Off)]
    pub trace: TraceMode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Sentence to parse; read one per line from stdin when absent.
    pub sentence: Option<String>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Lexicon { path: String, source: LexiconError },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("--k: {0}")]
    Weight(String),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("--max-steps must be at least 1")]
    ZeroSteps,
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

pub fn load_lexicons(specs: &[String]) -> Result<Lexicon, CliError> {
    let default = ["bundled:core".to_string()];
    let specs = if specs.is_empty() { &default[..] } else { specs };
    let mut lex = Lexicon::default();
    for spec in specs {
        let text = match spec.as_str() {
            "bundled:core" => crate::lexicon::JAPANESE_CORE.to_string(),
            "bundled:derived" => crate::lexicon::JAPANESE_DERIVED.to_string(),
            path => std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?,
        };
        let part = Lexicon::load(&text).map_err(|source| CliError::Lexicon { path: spec.clone(), source })?;
        lex.merge(part).map_err(|source| CliError::Lexicon { path: spec.clone(), source })?;
    }
    Ok(lex)
}

pub fn engine_config(args: &Args) -> Result<EngineConfig, CliError> {
    let k = parse_rational(&args.k).map_err(|e| CliError::Weight(e.to_string()))?;
    let cost = CostModel::default().with_k(k).map_err(|e| CliError::Weight(e.to_string()))?;
    if args.max_steps == 0 {
        return Err(CliError::ZeroSteps);
    }
    Ok(EngineConfig { cost, seed: args.seed, max_steps: args.max_steps, ..EngineConfig::default() })
}

/// Everything printed about one sentence.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub input: String,
    pub segmentation: Vec<Vec<String>>,
    pub result: RunResult,
    pub agent: Option<String>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        match self.result.halt {
            HaltReason::Quiescent => 0,
            HaltReason::IncompleteMandatorySlot => 1,
            HaltReason::StepLimit => 3,
        }
    }

    fn segmentation_text(&self) -> String {
        self.segmentation.iter().map(|t| t.join(" ")).collect::<Vec<_>>().join(" | ")
    }

    /// `term : category` for each main predicate, or `none`.
    fn semantics(&self, reading: Reading) -> String {
        let sol = &self.result.solution;
        let mains = main_molecules(sol);
        if mains.is_empty() {
            return "none".into();
        }
        mains
            .iter()
            .map(|&m| {
                let t = sol.term(m, reading);
                format!("{} : {}", t.display(Style::Ascii), term_category(sol, m, &t))
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let sol = &self.result.solution;
        vec![
            ("input", self.input.clone()),
            ("segmentation", self.segmentation_text()),
            ("solution", sol.render_configuration()),
            ("raw", self.semantics(Reading::Raw)),
            ("applied", self.semantics(Reading::Applied)),
            ("cost", sol.total_cost().to_string()),
            ("records", sol.render_records()),
            ("steps", self.result.steps().to_string()),
            ("halt", self.result.halt.as_str().to_string()),
            ("agent", self.agent.clone().unwrap_or_else(|| "none".into())),
        ]
    }

    pub fn render(&self, trace: TraceMode, format: Format) -> String {
        let mut out = String::new();
        match (trace, format) {
            (TraceMode::Off, _) => {}
            (TraceMode::Events, Format::Text) => out.push_str(&self.result.trace.render_text()),
            (TraceMode::Events, Format::Records) => out.push_str(&self.result.trace.render_records()),
            (TraceMode::Process, f) => {
                let mut lines = self.result.trace.process_lines();
                if lines.is_empty() {
                    lines.push(self.result.solution.render_configuration());
                }
                for l in lines {
                    match f {
                        Format::Text => out.push_str(&format!("{l}\n")),
                        Format::Records => out.push_str(&format!("config={l:?}\n")),
                    }
                }
            }
        }
        for (k, v) in self.fields() {
            match format {
                Format::Text => out.push_str(&format!("{k}: {v}\n")),
                Format::Records => out.push_str(&format!("{k}={v:?}\n")),
            }
        }
        out
    }
}

/// Verbal molecules still free in a live membrane, by membrane.
pub fn main_molecules(sol: &Solution) -> Vec<usize> {
    sol.live_membranes()
        .flat_map(|m| m.contents.iter().copied())
        .filter(|&m| sol.molecule(m).is_verbal())
        .collect()
}

fn term_category(sol: &Solution, m: usize, t: &Term) -> TypeExpr {
    let result = sol
        .molecule(m)
        .result_cat()
        .atom_at(&["cat"])
        .map(|l| TypeExpr::constant(l.as_str()))
        .unwrap_or_else(|| TypeExpr::constant("S"));
    let (binders, _) = t.strip_binders();
    TypeExpr::arrows(binders.iter().map(|b| b.ty.clone()), result)
}

/// Surface of the noun filling the verb root's agent in the applied
/// reading; `None` unless the parse is complete.
pub fn agent_of(result: &RunResult, lex: &Lexicon) -> Option<String> {
    if result.halt != HaltReason::Quiescent {
        return None;
    }
    let sol = &result.solution;
    let root = sol.molecules().iter().find(|m| m.kind == Kind::VerbRoot)?;
    let head = root.head()?;
    let site = root.slot_by_role("agent")?;
    for m in main_molecules(sol) {
        let t = sol.term(m, Reading::Applied);
        if let Some(Term::Const(c)) = find_application(&t, head).and_then(|args| args.get(site).cloned()) {
            return lex.by_constant(&c).map(|e| e.surface.clone());
        }
    }
    None
}

fn find_application(t: &Term, head: &str) -> Option<Vec<Term>> {
    let (h, args) = t.spine();
    if matches!(h, Term::Const(c) if c == head) {
        return Some(args.into_iter().cloned().collect());
    }
    match t {
        Term::App(f, a) => find_application(f, head).or_else(|| find_application(a, head)),
        Term::Abs(_, b) => find_application(b, head),
        _ => None,
    }
}

#[derive(Debug, Error)]
pub enum AnswerError {
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error("empty sentence")]
    Empty,
    #[error("parse halted {0}; no answer")]
    Incomplete(&'static str),
}

/// Who reads? The surface of the reading agent.
pub fn answer_agent(sentence: &str, lex: &Lexicon) -> Result<String, AnswerError> {
    let tokens = tokenize(sentence, lex)?;
    let out = run(&tokens, &EngineConfig::default()).map_err(|_| AnswerError::Empty)?;
    agent_of(&out, lex).ok_or(AnswerError::Incomplete(out.halt.as_str()))
}

/// Segments, runs and reports one sentence.
pub fn process(sentence: &str, lex: &Lexicon, cfg: &EngineConfig) -> Result<RunReport, CliError> {
    let tokens = tokenize(sentence, lex)?;
    let segmentation = sentence
        .trim()
        .trim_end_matches('.')
        .split_whitespace()
        .map(|tok| segment(tok, lex).map(|ms| ms.into_iter().map(|m| m.surface).collect()))
        .collect::<Result<Vec<Vec<String>>, _>>()?;
    let result = run(&tokens, cfg)?;
    let agent = agent_of(&result, lex);
    Ok(RunReport { input: sentence.trim().to_string(), segmentation, result, agent })
}

/// Runs the CLI; returns the exit code. Exit codes: 0 complete, 1
/// incomplete, 2 usage or lexicon error, 3 step limit. With several stdin
/// sentences the largest code wins.
pub fn main_with<I, T>(args: I, stdin: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{e}");
            return code;
        }
    };
    let setup = load_lexicons(&args.lexicons).and_then(|lex| Ok((lex, engine_config(&args)?)));
    let (lex, cfg) = match setup {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "chamcug: {e}");
            return e.exit_code();
        }
    };
    let sentences: Vec<String> = match &args.sentence {
        Some(s) => vec![s.clone()],
        None => stdin.lines().map_while(Result::ok).filter(|l| !l.trim().is_empty()).collect(),
    };
    if sentences.is_empty() {
        let _ = writeln!(err, "chamcug: no sentence given");
        return 2;
    }
    let mut code = 0;
    for (i, s) in sentences.iter().enumerate() {
        if i > 0 {
            let _ = writeln!(out);
        }
        match process(s, &lex, &cfg) {
            Ok(report) => {
                let _ = write!(out, "{}", report.render(args.trace, args.format));
                code = code.max(report.exit_code());
            }
            Err(e) => {
                let _ = writeln!(err, "chamcug: {e}");
                code = code.max(e.exit_code());
            }
        }
    }
    code
}
