use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::term::{Binder, Term};
use crate::feature_dag::{self, CostModel, FeatureStructure, UnifierRecord, UnifyFailure};

/// Simple and category types. Category DAGs are atomic types whose
/// unification is delegated to [`feature_dag::unify`].
#[derive(Clone, Debug, PartialEq)]
pub enum TypeExpr {
    Const(String),
    Var(u32),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Cat(FeatureStructure),
}

impl TypeExpr {
    pub fn constant(name: &str) -> TypeExpr {
        TypeExpr::Const(name.to_string())
    }

    pub fn arrow(from: TypeExpr, to: TypeExpr) -> TypeExpr {
        TypeExpr::Arrow(Box::new(from), Box::new(to))
    }

    /// `a1 -> a2 -> ... -> result`.
    pub fn arrows(params: impl IntoIterator<Item = TypeExpr>, result: TypeExpr) -> TypeExpr {
        let params: Vec<TypeExpr> = params.into_iter().collect();
        params.into_iter().rev().fold(result, |acc, p| TypeExpr::arrow(p, acc))
    }

    /// Splits `a1 -> ... -> an -> r` into its parameters and result.
    pub fn uncurry(&self) -> (Vec<&TypeExpr>, &TypeExpr) {
        let mut params = Vec::new();
        let mut cur = self;
        while let TypeExpr::Arrow(a, b) = cur {
            params.push(a.as_ref());
            cur = b;
        }
        (params, cur)
    }

    fn occurs(&self, v: u32) -> bool {
        match self {
            TypeExpr::Var(w) => *w == v,
            TypeExpr::Arrow(a, b) => a.occurs(v) || b.occurs(v),
            _ => false,
        }
    }

    fn max_var(&self) -> Option<u32> {
        match self {
            TypeExpr::Var(v) => Some(*v),
            TypeExpr::Arrow(a, b) => a.max_var().max(b.max_var()),
            _ => None,
        }
    }

    /// Renames type variables to 0, 1, ... in order of first occurrence, so
    /// types equal up to renaming compare equal.
    pub fn canonical(&self) -> TypeExpr {
        fn go(t: &TypeExpr, map: &mut BTreeMap<u32, u32>) -> TypeExpr {
            match t {
                TypeExpr::Var(v) => {
                    let n = map.len() as u32;
                    TypeExpr::Var(*map.entry(*v).or_insert(n))
                }
                TypeExpr::Arrow(a, b) => {
                    let a = go(a, map);
                    TypeExpr::arrow(a, go(b, map))
                }
                other => other.clone(),
            }
        }
        go(self, &mut BTreeMap::new())
    }

    /// Display wrapped in parentheses unless atomic.
    pub fn display_atomic(&self) -> String {
        match self {
            TypeExpr::Arrow(..) => format!("({self})"),
            _ => self.to_string(),
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Const(c) => f.write_str(c),
            TypeExpr::Var(v) => write!(f, "'t{v}"),
            TypeExpr::Arrow(a, b) => write!(f, "{}->{}", a.display_atomic(), b),
            TypeExpr::Cat(fs) => write!(f, "[{}]", fs.to_avm()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TypeError {
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("cannot unify {expected} with {found}")]
    Mismatch { expected: TypeExpr, found: TypeExpr },
    #[error("type variable 't{0} occurs in {1}")]
    Occurs(u32, TypeExpr),
    #[error("category mismatch: {0}")]
    Category(UnifyFailure),
    #[error("application of {fun} : {fun_ty} to {arg} : {arg_ty} failed: {cause}")]
    Application { fun: String, fun_ty: TypeExpr, arg: String, arg_ty: TypeExpr, cause: Box<TypeError> },
}

/// A term with its inferred type and, for an application whose argument
/// type is a category, the record of the category unification.
#[derive(Clone, Debug)]
pub struct Typed {
    pub term: Term,
    pub ty: TypeExpr,
    pub record: Option<UnifierRecord>,
}

/// Typing context: declared identifiers plus the accumulated substitution.
#[derive(Clone, Debug)]
pub struct TypeContext {
    env: BTreeMap<String, TypeExpr>,
    subst: BTreeMap<u32, TypeExpr>,
    next_var: u32,
    cost: CostModel,
    records: Vec<UnifierRecord>,
}

impl Default for TypeContext {
    fn default() -> Self {
        TypeContext::new(CostModel::default())
    }
}

impl TypeContext {
    pub fn new(cost: CostModel) -> Self {
        TypeContext { env: BTreeMap::new(), subst: BTreeMap::new(), next_var: 0, cost, records: Vec::new() }
    }

    /// Declares the type of a constant or free variable.
    pub fn declare(&mut self, name: &str, ty: TypeExpr) {
        if let Some(v) = ty.max_var() {
            self.next_var = self.next_var.max(v + 1);
        }
        self.env.insert(name.to_string(), ty);
    }

    pub fn lookup(&self, name: &str) -> Option<TypeExpr> {
        self.env.get(name).map(|t| self.apply(t))
    }

    pub fn fresh_var(&mut self) -> TypeExpr {
        let v = self.next_var;
        self.next_var += 1;
        TypeExpr::Var(v)
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    /// Category unification records made so far, in order.
    pub fn records(&self) -> &[UnifierRecord] {
        &self.records
    }

    /// Applies the current substitution.
    pub fn apply(&self, t: &TypeExpr) -> TypeExpr {
        match t {
            TypeExpr::Var(v) => match self.subst.get(v) {
                Some(bound) => self.apply(bound),
                None => t.clone(),
            },
            TypeExpr::Arrow(a, b) => TypeExpr::arrow(self.apply(a), self.apply(b)),
            other => other.clone(),
        }
    }

    fn bind(&mut self, v: u32, t: TypeExpr) -> Result<(), TypeError> {
        if t == TypeExpr::Var(v) {
            return Ok(());
        }
        if t.occurs(v) {
            return Err(TypeError::Occurs(v, t));
        }
        // Keep the substitution idempotent: no bound variable appears in
        // any range.
        for range in self.subst.values_mut() {
            *range = substitute_var(range, v, &t);
        }
        self.subst.insert(v, t);
        Ok(())
    }

    /// Unifies `expected` with `found`. Category pairs delegate to DAG
    /// unification with `found` as the filler side; the record is returned
    /// and also logged in the context.
    pub fn unify(&mut self, expected: &TypeExpr, found: &TypeExpr) -> Result<Option<UnifierRecord>, TypeError> {
        let e = self.apply(expected);
        let f = self.apply(found);
        match (&e, &f) {
            (TypeExpr::Var(a), TypeExpr::Var(b)) if a == b => Ok(None),
            (TypeExpr::Var(a), _) => self.bind(*a, f.clone()).map(|_| None),
            (_, TypeExpr::Var(b)) => self.bind(*b, e.clone()).map(|_| None),
            (TypeExpr::Const(a), TypeExpr::Const(b)) if a == b => Ok(None),
            (TypeExpr::Arrow(a1, r1), TypeExpr::Arrow(a2, r2)) => {
                let first = self.unify(a1, a2)?;
                let second = self.unify(r1, r2)?;
                Ok(first.or(second))
            }
            (TypeExpr::Cat(slot), TypeExpr::Cat(filler)) => {
                let (_, record) = feature_dag::unify(filler, slot, &self.cost).map_err(TypeError::Category)?;
                self.records.push(record.clone());
                Ok(Some(record))
            }
            _ => Err(TypeError::Mismatch { expected: e, found: f }),
        }
    }

    /// Infers the type of a term under this context.
    pub fn infer(&mut self, t: &Term) -> Result<TypeExpr, TypeError> {
        let ty = match t {
            Term::Var(x) | Term::Const(x) => self.lookup(x).ok_or_else(|| TypeError::Unbound(x.clone()))?,
            Term::Abs(b, body) => self.infer_abs(b, body)?.ty,
            Term::App(f, a) => self.infer_app(f, a)?.ty,
        };
        Ok(self.apply(&ty))
    }

    /// Abstraction rule: typing `body` with `x : α` in scope yields
    /// `λx^α.body : α → β`.
    pub fn infer_abs(&mut self, binder: &Binder, body: &Term) -> Result<Typed, TypeError> {
        if let Some(v) = binder.ty.max_var() {
            self.next_var = self.next_var.max(v + 1);
        }
        let shadowed = self.env.insert(binder.name.clone(), binder.ty.clone());
        let result = self.infer(body);
        match shadowed {
            Some(prev) => self.env.insert(binder.name.clone(), prev),
            None => self.env.remove(&binder.name),
        };
        let body_ty = result?;
        let ty = TypeExpr::arrow(self.apply(&binder.ty), body_ty);
        Ok(Typed { term: Term::Abs(binder.clone(), Box::new(body.clone())), ty, record: None })
    }

    /// Application rule: `t : α → β` and `s : α'` with α, α' unifiable give
    /// `t(s) : βθ`.
    pub fn infer_app(&mut self, fun: &Term, arg: &Term) -> Result<Typed, TypeError> {
        let fun_ty = self.infer(fun)?;
        let arg_ty = self.infer(arg)?;
        let result = self.fresh_var();
        let wrap = |cause: TypeError, ctx: &TypeContext| TypeError::Application {
            fun: fun.to_string(),
            fun_ty: ctx.apply(&fun_ty),
            arg: arg.to_string(),
            arg_ty: ctx.apply(&arg_ty),
            cause: Box::new(cause),
        };
        let record = match &fun_ty {
            TypeExpr::Arrow(param, ret) => {
                let rec = self.unify(param, &arg_ty).map_err(|e| wrap(e, self))?;
                self.unify(ret, &result).map_err(|e| wrap(e, self))?;
                rec
            }
            _ => {
                let expected = TypeExpr::arrow(arg_ty.clone(), result.clone());
                self.unify(&fun_ty, &expected).map_err(|e| wrap(e, self))?
            }
        };
        Ok(Typed { term: Term::app(fun.clone(), arg.clone()), ty: self.apply(&result), record })
    }
}

fn substitute_var(t: &TypeExpr, v: u32, by: &TypeExpr) -> TypeExpr {
    match t {
        TypeExpr::Var(w) if *w == v => by.clone(),
        TypeExpr::Arrow(a, b) => TypeExpr::arrow(substitute_var(a, v, by), substitute_var(b, v, by)),
        other => other.clone(),
    }
}
