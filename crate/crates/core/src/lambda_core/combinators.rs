//! Order-freeing combinators and argument abstraction (inverse β).

use std::collections::BTreeSet;

use thiserror::Error;

use super::term::{normalize, Binder, Fresh, Term};
use super::types::{TypeContext, TypeError, TypeExpr};
use crate::feature_dag::UnifierRecord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CombinatorError {
    #[error("need at least {needed} leading binders, found {found}")]
    Arity { needed: usize, found: usize },
    #[error("{0} is not an abstraction")]
    NotAbstraction(String),
    #[error("B: codomain of g does not match the domain of f: {0}")]
    Composition(TypeError),
    #[error("argument position {site} out of range for {term}")]
    SiteOutOfRange { site: usize, term: String },
    #[error("argument position {0} holds a λ-bound variable, nothing to abstract")]
    SiteEmpty(usize),
    #[error("no unification record for argument position {0}")]
    MissingRecord(usize),
    #[error("{0} is not a constant application")]
    NotApplication(String),
}

/// C: swaps the two outermost binders, `λxy.f(x,y)` ↦ `λyx.f(x,y)`.
pub fn comb_c(t: &Term) -> Result<Term, CombinatorError> {
    match t {
        Term::Abs(x, inner) => match inner.as_ref() {
            Term::Abs(y, body) => Ok(Term::Abs(y.clone(), Box::new(Term::Abs(x.clone(), body.clone())))),
            _ => Err(CombinatorError::Arity { needed: 2, found: 1 }),
        },
        _ => Err(CombinatorError::Arity { needed: 2, found: 0 }),
    }
}

/// Applies C under `depth` binders, swapping binders `depth` and `depth+1`.
pub fn comb_c_at(t: &Term, depth: usize) -> Result<Term, CombinatorError> {
    if depth == 0 {
        return comb_c(t);
    }
    match t {
        Term::Abs(b, body) => Ok(Term::Abs(b.clone(), Box::new(comb_c_at(body, depth - 1)?))),
        _ => Err(CombinatorError::Arity { needed: depth + 2, found: t.binder_count() }),
    }
}

/// Moves leading binder `index` to the outermost position by a chain of C
/// applications, keeping the relative order of the others.
pub fn hoist_binder(t: &Term, index: usize) -> Result<Term, CombinatorError> {
    let found = t.binder_count();
    if index >= found {
        return Err(CombinatorError::Arity { needed: index + 1, found });
    }
    let mut cur = t.clone();
    for depth in (0..index).rev() {
        cur = comb_c_at(&cur, depth)?;
    }
    Ok(cur)
}

/// B: composition, `B(λx.f(x))(λy.g(y))` = `λx.f(g(x))`. The result is
/// β-normal; its binder has the domain type of `g`.
pub fn comb_b(ctx: &mut TypeContext, f: &Term, g: &Term) -> Result<Term, CombinatorError> {
    let g_binder = match g {
        Term::Abs(b, _) => b.clone(),
        other => return Err(CombinatorError::NotAbstraction(other.to_string())),
    };
    let f_ty = ctx.infer(f).map_err(CombinatorError::Composition)?;
    let g_ty = ctx.infer(g).map_err(CombinatorError::Composition)?;
    let (domain, codomain) = match &g_ty {
        TypeExpr::Arrow(a, b) => ((**a).clone(), (**b).clone()),
        _ => return Err(CombinatorError::NotAbstraction(g.to_string())),
    };
    match &f_ty {
        TypeExpr::Arrow(param, _) => {
            ctx.unify(param, &codomain).map_err(CombinatorError::Composition)?;
        }
        _ => return Err(CombinatorError::NotAbstraction(f.to_string())),
    }
    let mut avoid: BTreeSet<String> = f.free_vars();
    avoid.extend(g.free_vars());
    let name = if avoid.contains(&g_binder.name) {
        Fresh::new().name(&g_binder.name, &avoid)
    } else {
        g_binder.name.clone()
    };
    let x = Term::var(&name);
    let body = normalize(&Term::app(f.clone(), Term::app(g.clone(), x)));
    Ok(Term::Abs(Binder::new(name, ctx.apply(&domain)), Box::new(body)))
}

/// Result of abstracting one filled argument position.
#[derive(Clone, Debug)]
pub struct Abstraction {
    /// `λv.t[site := v]`, with the new binder outermost.
    pub term: Term,
    /// The detached record; undoing it restores the filler's original DAG.
    pub record: UnifierRecord,
    /// The term that occupied the position.
    pub filler: Term,
    /// For each leading binder of `term`, the argument position it feeds.
    pub binder_sites: Vec<usize>,
}

/// Inverse β: turns the filled argument at position `site` of a (possibly
/// partially abstracted) constant application into a fresh outermost
/// binder typed by the record's slot structure. Applying the result to the
/// returned filler β-reduces back to `t`.
pub fn abstract_argument(
    t: &Term,
    site: usize,
    records: &[UnifierRecord],
    fresh: &mut Fresh,
) -> Result<Abstraction, CombinatorError> {
    let (binders, body) = t.strip_binders();
    let (head, args) = body.spine();
    if !matches!(head, Term::Const(_)) {
        return Err(CombinatorError::NotApplication(t.to_string()));
    }
    let filler = *args
        .get(site)
        .ok_or_else(|| CombinatorError::SiteOutOfRange { site, term: t.to_string() })?;
    let bound: Vec<&str> = binders.iter().map(|b| b.name.as_str()).collect();
    if let Term::Var(v) = filler {
        if bound.contains(&v.as_str()) {
            return Err(CombinatorError::SiteEmpty(site));
        }
    }
    let record = records
        .iter()
        .find(|r| r.site == Some(site))
        .cloned()
        .ok_or(CombinatorError::MissingRecord(site))?;

    let mut avoid = t.all_names();
    avoid.extend(filler.free_vars());
    let name = fresh.name("v", &avoid);
    let new_args: Vec<Term> = args
        .iter()
        .enumerate()
        .map(|(i, a)| if i == site { Term::var(&name) } else { (*a).clone() })
        .collect();
    let new_body = Term::apps(head.clone(), new_args);

    // λ(old binders).λv.body, then C-hoist v outermost.
    let mut all: Vec<Binder> = binders.iter().map(|b| (*b).clone()).collect();
    all.push(Binder::new(name.clone(), TypeExpr::Cat(record.snapshot.1.clone())));
    let inner = Term::lams(all.clone(), new_body);
    let term = hoist_binder(&inner, all.len() - 1)?;

    let site_of = |b: &Binder| -> usize {
        args.iter()
            .position(|a| matches!(a.spine().0, Term::Var(v) if *v == b.name))
            .unwrap_or(site)
    };
    let mut binder_sites = vec![site];
    binder_sites.extend(binders.iter().map(|b| site_of(b)));
    Ok(Abstraction { term, record, filler: filler.clone(), binder_sites })
}
