//! Order-freeing combinators: C swaps binders, B composes, and argument
//! abstraction undoes a β-step so a filled slot can be re-bound.

use cham_cug::feature_dag::{unify, CostModel, FeatureStructure};
use cham_cug::lambda_core::{abstract_argument, comb_b, comb_c, normalize, parse_type, Fresh, Style, Term, TypeContext};

fn t(s: &str) -> Term {
    Term::parse(s).expect("valid term")
}

fn main() {
    let read = t("\\x y z.read(x,y,z)");
    let swapped = comb_c(&read).unwrap();
    println!("C {}  =  {}", read.display(Style::Lambda), swapped.display(Style::Lambda));
    let back = comb_c(&swapped).unwrap();
    println!("C C gives back {}", back.display(Style::Lambda));

    let mut ctx = TypeContext::default();
    ctx.declare("f", parse_type("S->S").unwrap());
    ctx.declare("read", parse_type("N->N->N->S").unwrap());
    for noun in ["K", "N", "B"] {
        ctx.declare(noun, parse_type("N").unwrap());
    }
    let composed = comb_b(&mut ctx, &t("\\s:S.f(s)"), &t("\\x:N.read(x,N,B)")).unwrap();
    println!("B f (λx.read(x,N,B))  =  {}", composed.display(Style::Lambda));
    println!("  applied to K: {}", normalize(&Term::app(composed, t("K"))).display(Style::Lambda));

    let p = |s: &str| s.parse::<FeatureStructure>().unwrap();
    let record = unify(&p("(dag (cat N) (case nom))"), &p("(dag (cat N) (role agent))"), &CostModel::default())
        .unwrap()
        .1
        .at_site(0);
    let saturated = t("read(K,N,B)");
    let abs = abstract_argument(&saturated, 0, &[record], &mut Fresh::new()).unwrap();
    println!("abstract position 0 of {saturated}: {}  (filler {})", abs.term.display(Style::Lambda), abs.filler);
    println!("  β back: {}", normalize(&Term::app(abs.term, abs.filler)).display(Style::Lambda));
}
