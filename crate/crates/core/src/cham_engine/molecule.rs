//! Molecules: a lexical term with its category and argument slots.

use crate::feature_dag::{FeatureStructure, Label};
use crate::lambda_core::{Term, TypeExpr};
use crate::lexicon::{Kind, Lexeme};

pub type MolId = usize;

/// Index into the solution's record table; printed as θ(n+1).
pub type RecordId = usize;

#[derive(Clone, Debug, PartialEq)]
pub enum SlotState {
    Open,
    Filled { filler: MolId, record: RecordId },
    /// Bound by the control equation to another molecule's slot.
    Controlled { source: (MolId, usize), record: RecordId },
}

/// Sentential argument: `(cat S)` with a subcategorized agent.
#[derive(Clone, Debug, PartialEq)]
pub struct Sentential {
    pub subcat: FeatureStructure,
    /// Role of the sibling slot that controls the subcat binder, if the
    /// entry names one; otherwise the variable the sem applies it to.
    pub control: Option<Label>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slot {
    pub var: String,
    pub dag: FeatureStructure,
    pub optional: bool,
    pub sentential: Option<Sentential>,
    pub state: SlotState,
}

impl Slot {
    pub fn role(&self) -> Option<&Label> {
        self.dag.atom_at(&["role"])
    }

    pub fn is_open(&self) -> bool {
        self.state == SlotState::Open
    }

    pub fn binder_type(&self) -> TypeExpr {
        let n = TypeExpr::constant("N");
        if self.sentential.is_some() {
            TypeExpr::arrow(n, TypeExpr::constant("S"))
        } else {
            n
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Molecule {
    pub id: MolId,
    /// Token index in the input.
    pub origin: usize,
    pub surface: String,
    pub kind: Kind,
    /// Lexical sem with binders renamed to the slot variables.
    pub sem: Term,
    pub cat: FeatureStructure,
    pub slots: Vec<Slot>,
}

fn primes(n: usize) -> String {
    "'".repeat(n)
}

impl Molecule {
    /// `generation` primes the binder names: 0 ↦ x, 1 ↦ x', 2 ↦ x''.
    pub fn from_lexeme(id: MolId, origin: usize, lex: &Lexeme, generation: usize) -> Molecule {
        let (binders, body) = lex.sem.strip_binders();
        let args = lex.cat.args();
        let mut sem = body.clone();
        let mut vars = Vec::new();
        for b in &binders {
            let v = format!("{}{}", b.name, primes(generation));
            if v != b.name {
                sem = rename(&sem, &b.name, &v);
            }
            vars.push(v);
        }
        let slots = vars
            .into_iter()
            .zip(args)
            .map(|(var, dag)| {
                let optional = dag.atom_at(&["optionality"]).is_some_and(|l| l.as_str() == "+");
                let sentential = dag.get(&["subcat"]).map(|subcat| Sentential {
                    subcat,
                    control: dag.atom_at(&["control"]).cloned(),
                });
                Slot { var, dag, optional, sentential, state: SlotState::Open }
            })
            .collect();
        Molecule { id, origin, surface: lex.surface.clone(), kind: lex.kind, sem, cat: lex.cat.clone(), slots }
    }

    pub fn is_verbal(&self) -> bool {
        self.kind.is_verbal()
    }

    pub fn head(&self) -> Option<&str> {
        self.sem.head_constant()
    }

    pub fn open_slots(&self) -> impl Iterator<Item = (usize, &Slot)> {
        self.slots.iter().enumerate().filter(|(_, s)| s.is_open())
    }

    pub fn slot_by_role(&self, role: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.role().is_some_and(|r| r.as_str() == role))
    }

    /// Category of the complete application: the `val` part, or the whole
    /// category for nouns.
    pub fn result_cat(&self) -> FeatureStructure {
        self.cat.get(&["val"]).unwrap_or_else(|| self.cat.clone())
    }

    /// Simple type of the head constant, read off the slot categories.
    pub fn head_type(&self) -> TypeExpr {
        let cat_of = |fs: &FeatureStructure| {
            TypeExpr::constant(fs.atom_at(&["cat"]).map(|l| l.as_str()).unwrap_or("N"))
        };
        TypeExpr::arrows(self.slots.iter().map(|s| cat_of(&s.dag)), cat_of(&self.result_cat()))
    }
}

/// Renames free occurrences of variable `from`.
pub(crate) fn rename(t: &Term, from: &str, to: &str) -> Term {
    match t {
        Term::Var(v) if v == from => Term::Var(to.to_string()),
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(rename(f, from, to), rename(a, from, to)),
        Term::Abs(b, _) if b.name == from => t.clone(),
        Term::Abs(b, body) => Term::Abs(b.clone(), Box::new(rename(body, from, to))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::{tokenize, Lexicon};

    #[test]
    fn causative_slots() {
        let lex = Lexicon::bundled_core();
        let items = tokenize("yom-ase-ru", &lex).unwrap();
        let make = Molecule::from_lexeme(0, 1, &items[1], 1);
        assert_eq!(make.sem.to_string(), "make(x',y',z'(y'))");
        let vars: Vec<&str> = make.slots.iter().map(|s| s.var.as_str()).collect();
        assert_eq!(vars, ["x'", "y'", "z'"]);
        assert!(make.slots[1].optional);
        assert!(make.slots[2].sentential.is_some());
        assert_eq!(make.slots[2].role().unwrap().as_str(), "t");
        assert_eq!(make.head_type().to_string(), "N->N->S->S");
        assert_eq!(make.slot_by_role("co-agent"), Some(1));
        assert_eq!(make.head(), Some("make"));
    }

    #[test]
    fn nouns_have_no_slots() {
        let lex = Lexicon::bundled_core();
        let items = tokenize("Ken-wa", &lex).unwrap();
        let k = Molecule::from_lexeme(0, 0, &items[0], 0);
        assert!(k.slots.is_empty());
        assert_eq!(k.result_cat(), k.cat);
    }
}
