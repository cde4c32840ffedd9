use std::collections::BTreeSet;
use std::fmt;

use super::types::TypeExpr;

/// A λ-bound variable and its type annotation.
#[derive(Clone, Debug, PartialEq)]
pub struct Binder {
    pub name: String,
    pub ty: TypeExpr,
}

impl Binder {
    pub fn new(name: impl Into<String>, ty: TypeExpr) -> Self {
        Binder { name: name.into(), ty }
    }
}

/// λ-terms. Constants are free symbols (`read`, `K`); applications are
/// curried, so `read(K,N,B)` is three nested `App`s.
///
/// `PartialEq` is syntactic; use [`alpha_eq`] for term identity.
#[derive(Clone, Debug, PartialEq)]
pub enum Term {
    Var(String),
    Const(String),
    Abs(Binder, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn lam(name: &str, ty: TypeExpr, body: Term) -> Term {
        Term::Abs(Binder::new(name, ty), Box::new(body))
    }

    /// Wraps `body` in the given binders, first binder outermost.
    pub fn lams(binders: impl IntoIterator<Item = Binder>, body: Term) -> Term {
        let binders: Vec<Binder> = binders.into_iter().collect();
        binders.into_iter().rev().fold(body, |acc, b| Term::Abs(b, Box::new(acc)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    /// Leading binders and the body under them.
    pub fn strip_binders(&self) -> (Vec<&Binder>, &Term) {
        let mut binders = Vec::new();
        let mut cur = self;
        while let Term::Abs(b, body) = cur {
            binders.push(b);
            cur = body;
        }
        (binders, cur)
    }

    pub fn binder_count(&self) -> usize {
        self.strip_binders().0.len()
    }

    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// Name of the head constant of the body, if any.
    pub fn head_constant(&self) -> Option<&str> {
        match self.strip_binders().1.spine().0 {
            Term::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_free(self, &mut Vec::new(), &mut out);
        out
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        collect_names(self, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Abs(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    pub fn display(&self, style: Style) -> Displayed<'_> {
        Displayed { term: self, style }
    }

    /// Parses the term syntax, e.g. `\x y. read(x,y,B)`.
    pub fn parse(text: &str) -> Result<Term, super::ParseError> {
        super::syntax::parse_term(text)
    }
}

fn collect_free(t: &Term, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Term::Const(_) => {}
        Term::Abs(b, body) => {
            bound.push(b.name.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        Term::App(f, a) => {
            collect_free(f, bound, out);
            collect_free(a, bound, out);
        }
    }
}

fn collect_names(t: &Term, out: &mut BTreeSet<String>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Const(_) => {}
        Term::Abs(b, body) => {
            out.insert(b.name.clone());
            collect_names(body, out);
        }
        Term::App(f, a) => {
            collect_names(f, out);
            collect_names(a, out);
        }
    }
}

/// Deterministic fresh-name supply.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    counter: u64,
}

impl Fresh {
    pub fn new() -> Self {
        Fresh::default()
    }

    /// A name of the form `{base}_{n}` not in `avoid`.
    pub fn name(&mut self, base: &str, avoid: &BTreeSet<String>) -> String {
        let base = base.split('_').next().filter(|b| !b.is_empty()).unwrap_or("v");
        loop {
            self.counter += 1;
            let candidate = format!("{base}_{}", self.counter);
            if !avoid.contains(&candidate) {
                return candidate;
            }
        }
    }
}

/// Capture-avoiding substitution `t[x := s]`.
pub fn subst(t: &Term, x: &str, s: &Term, fresh: &mut Fresh) -> Term {
    let fv = s.free_vars();
    subst_inner(t, x, s, &fv, fresh)
}

fn subst_inner(t: &Term, x: &str, s: &Term, fv: &BTreeSet<String>, fresh: &mut Fresh) -> Term {
    match t {
        Term::Var(y) if y == x => s.clone(),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(subst_inner(f, x, s, fv, fresh), subst_inner(a, x, s, fv, fresh)),
        Term::Abs(b, body) => {
            if b.name == x || !body.free_vars().contains(x) {
                return t.clone();
            }
            if fv.contains(&b.name) {
                let mut avoid = fv.clone();
                avoid.extend(body.all_names());
                avoid.insert(x.to_string());
                let renamed = fresh.name(&b.name, &avoid);
                let body = subst_inner(body, &b.name, &Term::Var(renamed.clone()), &BTreeSet::from([renamed.clone()]), fresh);
                Term::Abs(Binder::new(renamed, b.ty.clone()), Box::new(subst_inner(&body, x, s, fv, fresh)))
            } else {
                Term::Abs(b.clone(), Box::new(subst_inner(body, x, s, fv, fresh)))
            }
        }
    }
}

/// β-normal form. Typed terms always normalize; untyped input may not.
pub fn normalize(t: &Term) -> Term {
    let mut fresh = Fresh::new();
    nf(t, &mut fresh)
}

fn nf(t: &Term, fresh: &mut Fresh) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(nf(body, fresh))),
        Term::App(f, a) => match nf(f, fresh) {
            Term::Abs(b, body) => {
                let reduced = subst(&body, &b.name, a, fresh);
                nf(&reduced, fresh)
            }
            head => Term::app(head, nf(a, fresh)),
        },
    }
}

/// True iff `t` contains no β-redex.
pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::Abs(_, body) => is_normal(body),
        Term::App(f, a) => !matches!(**f, Term::Abs(..)) && is_normal(f) && is_normal(a),
    }
}

/// Identity up to renaming of bound variables. Binder annotations are not
/// compared.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env_a: &mut Vec<&'a str>, env_b: &mut Vec<&'a str>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let ix = env_a.iter().rposition(|n| *n == x);
                let iy = env_b.iter().rposition(|n| *n == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Abs(bx, tx), Term::Abs(by, ty)) => {
                env_a.push(&bx.name);
                env_b.push(&by.name);
                let r = go(tx, ty, env_a, env_b);
                env_a.pop();
                env_b.pop();
                r
            }
            (Term::App(fa, xa), Term::App(fb, xb)) => go(fa, fb, env_a, env_b) && go(xa, xb, env_a, env_b),
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// Printing conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// `\x y.read(x,y,B)`; parseable.
    Ascii,
    /// `\x:N y:N.read(x,y,B)`; parseable, keeps annotations.
    Typed,
    /// `λxy.read(x,y,B)`, the membrane-diagram notation.
    Lambda,
}

pub struct Displayed<'a> {
    term: &'a Term,
    style: Style,
}

impl fmt::Display for Displayed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self.term, self.style)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, Style::Ascii)
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, style: Style) -> fmt::Result {
    match t {
        Term::Var(x) | Term::Const(x) => f.write_str(x),
        Term::Abs(..) => {
            let (binders, body) = t.strip_binders();
            f.write_str(if style == Style::Lambda { "λ" } else { "\\" })?;
            for (i, b) in binders.iter().enumerate() {
                match style {
                    Style::Lambda => f.write_str(&b.name)?,
                    Style::Ascii => {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        f.write_str(&b.name)?;
                    }
                    Style::Typed => {
                        if i > 0 {
                            f.write_str(" ")?;
                        }
                        write!(f, "{}:{}", b.name, b.ty.display_atomic())?;
                    }
                }
            }
            f.write_str(".")?;
            write_term(f, body, style)
        }
        Term::App(..) => {
            let (head, args) = t.spine();
            match head {
                Term::Var(_) | Term::Const(_) => write_term(f, head, style)?,
                _ => {
                    f.write_str("(")?;
                    write_term(f, head, style)?;
                    f.write_str(")")?;
                }
            }
            f.write_str("(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write_term(f, a, style)?;
            }
            f.write_str(")")
        }
    }
}
