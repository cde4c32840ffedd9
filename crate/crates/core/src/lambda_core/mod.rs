//! Typed λ-calculus with category-valued types, β-normalisation and the
//! C/B combinators used to free argument order.

mod combinators;
mod syntax;
mod term;
mod types;

pub use combinators::{abstract_argument, comb_b, comb_c, comb_c_at, hoist_binder, Abstraction, CombinatorError};
pub use syntax::{parse_type, ParseError};
pub use term::{alpha_eq, is_normal, normalize, subst, Binder, Displayed, Fresh, Style, Term};
pub use types::{TypeContext, TypeError, TypeExpr, Typed};
