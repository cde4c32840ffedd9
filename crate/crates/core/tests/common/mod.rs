//! Seeded generators and law checks shared by the property tests and the
//! acceptance harness.
#![allow(dead_code)]

use cham_cug::feature_dag::{subsumes, undo, unify, CostModel, FeatureStructure, UnifierRecord};
use cham_cug::lambda_core::{
    abstract_argument, alpha_eq, comb_b, comb_c, is_normal, normalize, Fresh, Term, TypeContext, TypeExpr,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LAW_CASES: u32 = 1000;

fn n() -> TypeExpr {
    TypeExpr::constant("N")
}

fn s() -> TypeExpr {
    TypeExpr::constant("S")
}

fn arr(a: TypeExpr, b: TypeExpr) -> TypeExpr {
    TypeExpr::arrow(a, b)
}

pub fn signature() -> Vec<(&'static str, TypeExpr)> {
    vec![
        ("K", n()),
        ("N", n()),
        ("B", n()),
        ("g", arr(n(), n())),
        ("read", TypeExpr::arrows([n(), n(), n()], s())),
        ("make", TypeExpr::arrows([n(), n(), s()], s())),
        ("f", arr(s(), s())),
        ("h", arr(arr(n(), s()), s())),
    ]
}

pub fn context() -> TypeContext {
    let mut ctx = TypeContext::new(CostModel::default());
    for (c, ty) in signature() {
        ctx.declare(c, ty);
    }
    ctx
}

pub fn small_type(rng: &mut ChaCha8Rng) -> TypeExpr {
    match rng.gen_range(0..6) {
        0 => n(),
        1 => s(),
        2 => arr(n(), s()),
        3 => arr(n(), n()),
        4 => arr(s(), s()),
        _ => TypeExpr::arrows([n(), n()], s()),
    }
}

/// Random closed well-typed terms over [`signature`], with β-redexes.
pub struct TermGen {
    pub rng: ChaCha8Rng,
    next: usize,
}

impl TermGen {
    pub fn new(seed: u64) -> Self {
        TermGen { rng: ChaCha8Rng::seed_from_u64(seed), next: 0 }
    }

    fn fresh(&mut self) -> String {
        self.next += 1;
        format!("x{}", self.next)
    }

    pub fn closed(&mut self, ty: &TypeExpr, depth: usize) -> Term {
        self.gen(ty, &mut Vec::new(), depth)
    }

    /// A term of `ty` whose leading binders cover every arrow of `ty`.
    pub fn abstraction(&mut self, ty: &TypeExpr, depth: usize) -> Term {
        self.eta_long(ty, &mut Vec::new(), depth)
    }

    fn eta_long(&mut self, ty: &TypeExpr, env: &mut Vec<(String, TypeExpr)>, depth: usize) -> Term {
        match ty {
            TypeExpr::Arrow(a, b) => {
                let x = self.fresh();
                env.push((x.clone(), (**a).clone()));
                let body = self.eta_long(b, env, depth);
                env.pop();
                Term::lam(&x, (**a).clone(), body)
            }
            _ => self.gen(ty, env, depth),
        }
    }

    fn gen(&mut self, ty: &TypeExpr, env: &mut Vec<(String, TypeExpr)>, depth: usize) -> Term {
        if let TypeExpr::Arrow(a, b) = ty {
            if depth == 0 || self.rng.gen_bool(0.6) {
                let x = self.fresh();
                env.push((x.clone(), (**a).clone()));
                let body = self.gen(b, env, depth.saturating_sub(1));
                env.pop();
                return Term::lam(&x, (**a).clone(), body);
            }
        }
        if depth > 0 && self.rng.gen_bool(0.25) {
            let a = small_type(&mut self.rng);
            let fun = self.eta_long(&arr(a.clone(), ty.clone()), env, depth - 1);
            let arg = self.gen(&a, env, depth - 1);
            return Term::app(fun, arg);
        }
        // heads applied to enough arguments to reach `ty`
        let mut heads: Vec<(Term, Vec<TypeExpr>)> = Vec::new();
        let sig = signature();
        let named = env
            .iter()
            .map(|(x, t)| (Term::var(x), t.clone()))
            .chain(sig.into_iter().map(|(c, t)| (Term::constant(c), t)));
        for (head, hty) in named {
            let mut params = Vec::new();
            let mut cur = hty;
            loop {
                if &cur == ty {
                    let simple = params.iter().all(|p| *p == n());
                    if depth > 0 || simple {
                        heads.push((head.clone(), params.clone()));
                    }
                }
                match cur {
                    TypeExpr::Arrow(a, b) => {
                        params.push(*a);
                        cur = *b;
                    }
                    _ => break,
                }
            }
        }
        let (head, params) = heads.choose(&mut self.rng).cloned().expect("every base type has a head");
        let args: Vec<Term> = params.iter().map(|p| self.gen(p, env, depth.saturating_sub(1))).collect();
        Term::apps(head, args)
    }
}

// Reference normalizer on de Bruijn terms, independent of the library's.

#[derive(Clone, Debug, PartialEq)]
pub enum Db {
    Var(usize),
    Free(String),
    Lam(Box<Db>),
    App(Box<Db>, Box<Db>),
}

pub fn to_db(t: &Term) -> Db {
    fn go(t: &Term, scope: &mut Vec<String>) -> Db {
        match t {
            Term::Var(x) => match scope.iter().rev().position(|y| y == x) {
                Some(i) => Db::Var(i),
                None => Db::Free(x.clone()),
            },
            Term::Const(c) => Db::Free(c.clone()),
            Term::Abs(b, body) => {
                scope.push(b.name.clone());
                let out = Db::Lam(Box::new(go(body, scope)));
                scope.pop();
                out
            }
            Term::App(f, a) => Db::App(Box::new(go(f, scope)), Box::new(go(a, scope))),
        }
    }
    go(t, &mut Vec::new())
}

fn shift(t: &Db, by: isize, cutoff: usize) -> Db {
    match t {
        Db::Var(i) if *i >= cutoff => Db::Var((*i as isize + by) as usize),
        Db::Lam(b) => Db::Lam(Box::new(shift(b, by, cutoff + 1))),
        Db::App(f, a) => Db::App(Box::new(shift(f, by, cutoff)), Box::new(shift(a, by, cutoff))),
        other => other.clone(),
    }
}

fn subst_db(t: &Db, j: usize, s: &Db) -> Db {
    match t {
        Db::Var(i) if *i == j => s.clone(),
        Db::Lam(b) => Db::Lam(Box::new(subst_db(b, j + 1, &shift(s, 1, 0)))),
        Db::App(f, a) => Db::App(Box::new(subst_db(f, j, s)), Box::new(subst_db(a, j, s))),
        other => other.clone(),
    }
}

pub fn db_normalize(t: &Db) -> Db {
    match t {
        Db::Lam(b) => Db::Lam(Box::new(db_normalize(b))),
        Db::App(f, a) => match db_normalize(f) {
            Db::Lam(body) => db_normalize(&shift(&subst_db(&body, 0, &shift(a, 1, 0)), -1, 0)),
            f => Db::App(Box::new(f), Box::new(db_normalize(a))),
        },
        other => other.clone(),
    }
}

fn type_of(t: &Term) -> Result<TypeExpr, String> {
    context().infer(t).map(|ty| ty.canonical()).map_err(|e| format!("{t}: {e}"))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Normal forms agree with the reference normalizer and keep their type.
pub fn check_subject_reduction(seed: u64) -> Result<(), String> {
    let mut g = TermGen::new(seed);
    let ty = small_type(&mut g.rng);
    let depth = g.rng.gen_range(1..5);
    let t = g.closed(&ty, depth);
    ensure(type_of(&t)? == ty.canonical(), || format!("generated {t} is not of type {ty}"))?;
    let nf = normalize(&t);
    ensure(is_normal(&nf), || format!("{nf} is not normal"))?;
    ensure(to_db(&nf) == db_normalize(&to_db(&t)), || format!("{t} normalized to {nf}"))?;
    let nty = type_of(&nf)?;
    ensure(nty == ty.canonical(), || format!("{t} : {ty} but {nf} : {nty}"))
}

/// C∘C is the identity and C swaps the order arguments are consumed in.
pub fn check_c_involution(seed: u64) -> Result<(), String> {
    let mut g = TermGen::new(seed);
    let (a, b, r) = (small_type(&mut g.rng), small_type(&mut g.rng), small_type(&mut g.rng));
    let depth = g.rng.gen_range(1..4);
    let t = g.abstraction(&TypeExpr::arrows([a.clone(), b.clone()], r.clone()), depth);
    let c = comb_c(&t).map_err(|e| e.to_string())?;
    let cc = comb_c(&c).map_err(|e| e.to_string())?;
    ensure(alpha_eq(&cc, &t), || format!("C(C({t})) = {cc}"))?;
    let swapped = TypeExpr::arrows([b.clone(), a.clone()], r).canonical();
    ensure(type_of(&c)? == swapped, || format!("C({t}) is not of type {swapped}"))?;
    let (x, y) = (g.closed(&a, 2), g.closed(&b, 2));
    let lhs = normalize(&Term::apps(c, [y.clone(), x.clone()]));
    let rhs = normalize(&Term::apps(t.clone(), [x, y]));
    ensure(alpha_eq(&lhs, &rhs), || format!("C({t}) applied gives {lhs}, expected {rhs}"))
}

/// `B f g a` = `f (g a)`.
pub fn check_b_law(seed: u64) -> Result<(), String> {
    let mut g = TermGen::new(seed);
    let (a, b, c) = (small_type(&mut g.rng), small_type(&mut g.rng), small_type(&mut g.rng));
    let depth = g.rng.gen_range(1..4);
    let f = g.abstraction(&arr(b.clone(), c.clone()), depth);
    let h = g.abstraction(&arr(a.clone(), b), depth);
    let mut ctx = context();
    let fh = comb_b(&mut ctx, &f, &h).map_err(|e| e.to_string())?;
    let want = arr(a.clone(), c).canonical();
    ensure(type_of(&fh)? == want, || format!("B({f})({h}) is not of type {want}"))?;
    let x = g.closed(&a, 2);
    let lhs = normalize(&Term::app(fh, x.clone()));
    let rhs = normalize(&Term::app(f.clone(), Term::app(h.clone(), x)));
    ensure(alpha_eq(&lhs, &rhs), || format!("B({f})({h}) applied gives {lhs}, expected {rhs}"))
}

fn slot_record(arg_ty: &TypeExpr, site: usize, rng: &mut ChaCha8Rng) -> UnifierRecord {
    let (noun, slot) = if *arg_ty == s() {
        ("(dag (cat S))", "(dag (cat S))")
    } else {
        *[
            ("(dag (cat N) (case nom))", "(dag (cat N) (role agent))"),
            ("(dag (cat N) (case dat))", "(dag (cat N) (role co-agent))"),
            ("(dag (cat N) (case acc))", "(dag (cat N) (role object))"),
        ]
        .choose(rng)
        .unwrap()
    };
    let p = |t: &str| FeatureStructure::parse(t).unwrap();
    unify(&p(noun), &p(slot), &CostModel::default()).unwrap().1.at_site(site)
}

/// Abstracting filled positions one at a time, in random order, and
/// applying each result to its filler gives back the previous term.
pub fn check_inverse_beta(seed: u64) -> Result<(), String> {
    let mut g = TermGen::new(seed);
    let pred = *["read", "make"].choose(&mut g.rng).unwrap();
    let params = if pred == "read" { vec![n(), n(), n()] } else { vec![n(), n(), s()] };
    let args: Vec<Term> = params.iter().map(|p| normalize(&g.closed(p, 2))).collect();
    let records: Vec<UnifierRecord> =
        params.iter().enumerate().map(|(i, p)| slot_record(p, i, &mut g.rng)).collect();
    let mut sites: Vec<usize> = (0..params.len()).collect();
    sites.shuffle(&mut g.rng);
    let steps = g.rng.gen_range(1..=sites.len());
    let mut cur = Term::apps(Term::constant(pred), args.clone());
    let mut fresh = Fresh::new();
    for &site in &sites[..steps] {
        let abs = abstract_argument(&cur, site, &records, &mut fresh).map_err(|e| e.to_string())?;
        ensure(alpha_eq(&abs.filler, &args[site]), || format!("site {site} of {cur} gave filler {}", abs.filler))?;
        ensure(abs.binder_sites[0] == site, || format!("outer binder of {} does not feed {site}", abs.term))?;
        ensure(undo(&abs.record) == records[site].snapshot, || "record does not undo".into())?;
        let back = normalize(&Term::app(abs.term.clone(), abs.filler.clone()));
        ensure(alpha_eq(&back, &cur), || format!("{} applied to {} gives {back}, expected {cur}", abs.term, abs.filler))?;
        cur = abs.term;
    }
    Ok(())
}

// Random feature structures over a small vocabulary, so pairs often unify.

const FEATURES: [&str; 6] = ["cat", "case", "role", "form", "f", "g"];

fn atom_for(feature: &str, rng: &mut ChaCha8Rng) -> &'static str {
    let pool: &[&str] = match feature {
        "cat" => &["N", "S", "_"],
        "case" => &["nom", "dat", "acc"],
        "role" => &["agent", "co-agent", "object"],
        "form" => &["finite", "base", "_"],
        _ => &["a", "b", "_"],
    };
    pool.choose(rng).unwrap()
}

struct DagGen<'r> {
    rng: &'r mut ChaCha8Rng,
    tags: Vec<bool>,
}

impl DagGen<'_> {
    fn node(&mut self, depth: usize, out: &mut String) {
        let count = self.rng.gen_range(if depth == 0 { 0..2 } else { 0..4 });
        let mut feats: Vec<&str> = FEATURES.to_vec();
        feats.shuffle(self.rng);
        if count == 0 {
            out.push_str("()");
            return;
        }
        for (i, feat) in feats.into_iter().take(count).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("({feat} "));
            self.value(feat, depth, out);
            out.push(')');
        }
    }

    fn value(&mut self, feat: &str, depth: usize, out: &mut String) {
        // shared leaves give reentrancy without cycles
        if self.rng.gen_bool(0.3) {
            let t = self.rng.gen_range(0..2);
            if self.tags[t] {
                out.push_str(&format!("#{}", t + 1));
                return;
            }
            self.tags[t] = true;
            out.push_str(&format!("#{} ", t + 1));
            out.push_str(atom_for(feat, self.rng));
            return;
        }
        if depth > 0 && matches!(feat, "f" | "g") && self.rng.gen_bool(0.6) {
            self.node(depth - 1, out);
        } else {
            out.push_str(atom_for(feat, self.rng));
        }
    }
}

pub fn random_dag(rng: &mut ChaCha8Rng) -> FeatureStructure {
    let mut body = String::new();
    DagGen { rng, tags: vec![false; 2] }.node(2, &mut body);
    let text = if body == "()" { "(dag)".to_string() } else { format!("(dag {body})") };
    FeatureStructure::parse(&text).unwrap_or_else(|e| panic!("generated {text}: {e}"))
}

/// Outcome of one unification law case: whether the pair unified.
pub fn check_unification(seed: u64) -> Result<bool, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_dag(&mut rng);
    let b = if rng.gen_bool(0.3) {
        // a weaker copy of `a` always unifies with it
        let feats: Vec<String> = a.features().iter().map(|l| l.as_str().to_string()).collect();
        feats.iter().filter(|_| rng.gen_bool(0.5)).fold(a.clone(), |acc, f| acc.without_feature(f))
    } else {
        random_dag(&mut rng)
    };
    let model = CostModel::default();

    let (aa, rec) = unify(&a, &a, &model).map_err(|e| format!("{a} with itself: {e}"))?;
    ensure(aa == a, || format!("{a} ⊔ {a} = {aa}"))?;
    ensure(rec.cost.is_finite(), || format!("self-unification of {a} costs {}", rec.cost))?;

    let ab = unify(&a, &b, &model);
    let ba = unify(&b, &a, &model);
    match (&ab, &ba) {
        (Ok((u, r)), Ok((v, q))) => {
            ensure(u == v, || format!("{a} ⊔ {b} = {u} but {b} ⊔ {a} = {v}"))?;
            ensure(r.cost == q.cost, || format!("costs {} and {} differ", r.cost, q.cost))?;
            ensure(subsumes(&a, u) && subsumes(&b, u), || format!("{u} is not above {a} and {b}"))?;
            let (ua, ub) = undo(r);
            ensure(ua == a && ub == b, || format!("undo of {a} ⊔ {b} gave {ua}, {ub}"))?;
            let (redo, _) = unify(&ua, &ub, &model).map_err(|e| format!("redo failed: {e}"))?;
            ensure(redo == *u, || format!("redo gave {redo}, expected {u}"))?;
            let (uu, _) = unify(u, &b, &model).map_err(|e| format!("{u} ⊔ {b}: {e}"))?;
            ensure(uu == *u, || format!("({a} ⊔ {b}) ⊔ {b} = {uu}"))?;
            Ok(true)
        }
        (Err(_), Err(_)) => {
            ensure(!subsumes(&a, &b) || !binding_compatible(&a, &b), || format!("{a} subsumes {b} but they do not unify"))?;
            Ok(false)
        }
        _ => Err(format!("{a} and {b} unify in one order only")),
    }
}

fn binding_compatible(a: &FeatureStructure, b: &FeatureStructure) -> bool {
    let model = CostModel::default();
    let la = a.atom_at(&["case"]).or_else(|| a.atom_at(&["role"]));
    let lb = b.atom_at(&["case"]).or_else(|| b.atom_at(&["role"]));
    match (la, lb) {
        (Some(x), Some(y)) => model.lookup(x, y).is_finite(),
        _ => true,
    }
}

// Engine fixtures.

pub const PLAIN: &str = "Ken-wa Naomi-ni hon-wo yom-u";
pub const CAUSATIVE: &str = "Ken-wa Naomi-ni hon-wo yom-ase-ru";
pub const PASSIVE: &str = "Ken-wa Naomi-ni hon-wo yom-are-ru";
pub const CAUSATIVE_PASSIVE: &str = "Ken-wa Naomi-ni hon-wo yom-ase-(r)-are-ru";

/// Every bundled sample sentence with the lexicon it needs.
pub fn bundled_sentences() -> Vec<(&'static str, cham_cug::lexicon::Lexicon)> {
    use cham_cug::lexicon::Lexicon;
    vec![
        ("Ken-wa", Lexicon::bundled_core()),
        (PLAIN, Lexicon::bundled_core()),
        (CAUSATIVE, Lexicon::bundled_core()),
        (PASSIVE, Lexicon::bundled_with_derived()),
        (CAUSATIVE_PASSIVE, Lexicon::bundled_with_derived()),
    ]
}

pub const PROCESS_GOLDEN: &str = include_str!("../golden/causative_process.txt");

/// Runs a shuffled token order and checks conservation, structure, typing
/// after every event, replay and termination. Returns the halt reason.
pub fn check_shuffled_run(seed: u64) -> Result<cham_cug::cham_engine::HaltReason, String> {
    use cham_cug::cham_engine::{run, EngineConfig, HaltReason};
    use cham_cug::lexicon::tokenize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sentences = bundled_sentences();
    let (sentence, lex) = &sentences[1 + (seed as usize) % (sentences.len() - 1)];
    let mut tokens = tokenize(sentence, lex).map_err(|e| e.to_string())?;
    let original = tokens.clone();
    tokens.shuffle(&mut rng);
    // same verb complex in sentence order: the reading a shuffle must keep
    let mut verbs = tokens.iter().filter(|t| t.kind.is_verbal()).cloned();
    let reference: Vec<_> = original
        .into_iter()
        .map(|t| if t.kind.is_verbal() { verbs.next().unwrap() } else { t })
        .collect();
    let canonical = run(&reference, &EngineConfig::default()).map_err(|e| e.to_string())?;
    let order: Vec<&str> = tokens.iter().map(|t| t.surface.as_str()).collect();
    let cfg = EngineConfig { seed, ..EngineConfig::default() };
    let out = run(&tokens, &cfg).map_err(|e| e.to_string())?;
    let ctx = |msg: String| format!("seed {seed}, order {order:?}: {msg}");
    out.trace.check_conservation().map_err(ctx)?;
    out.trace.replay(&out.solution).map_err(ctx)?;
    if out.halt == HaltReason::StepLimit {
        return Err(ctx("hit the step limit".into()));
    }
    if out.halt == HaltReason::Quiescent {
        let reading = |r: &cham_cug::cham_engine::RunResult| {
            let sol = &r.solution;
            let mains = cham_cug::cli::main_molecules(sol);
            mains.iter().map(|&m| sol.term(m, cham_cug::cham_engine::Reading::Applied)).collect::<Vec<_>>()
        };
        let (got, want) = (reading(&out), reading(&canonical));
        let same = got.len() == want.len() && got.iter().zip(&want).all(|(a, b)| alpha_eq(a, b));
        if !same || out.solution.total_cost() != canonical.solution.total_cost() {
            let show = |ts: &[Term]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(", ");
            return Err(ctx(format!("reading {} differs from the in-order {}", show(&got), show(&want))));
        }
    }
    // intermediate states: a run cut off after n events is the prefix state
    for limit in 1..=out.steps() {
        let part = run(&tokens, &EngineConfig { max_steps: limit, ..cfg.clone() }).map_err(|e| e.to_string())?;
        let at = format!("after {} events", limit - 1);
        part.solution.check_structure().map_err(|e| ctx(format!("{at}: {e}")))?;
        part.solution.check_typing().map_err(|e| ctx(format!("{at}: {e}")))?;
        if part.trace.events[..limit - 1] != out.trace.events[..limit - 1] {
            return Err(ctx(format!("prefix run diverged {at}")));
        }
    }
    Ok(out.halt)
}
