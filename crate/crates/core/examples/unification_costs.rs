//! Case/role unification with the pairing cost table, and undoing a
//! unification from its record.

use cham_cug::feature_dag::{subsumes, undo, unify, CostModel, FeatureStructure, Label};

fn fs(s: &str) -> FeatureStructure {
    s.parse().expect("valid AVM")
}

fn main() {
    let model = CostModel::default();
    println!("k = {}", model.k());
    for (x, y) in [("nom", "agent"), ("dat", "co-agent"), ("dat", "agent"), ("nom", "dat"), ("acc", "acc")] {
        println!("cost({x},{y}) = {}", model.lookup(&Label::new(x), &Label::new(y)));
    }
    println!();

    let ken = fs("(dag (cat N) (case nom))");
    for slot in ["(dag (cat N) (role agent))", "(dag (cat N) (role co-agent))", "(dag (cat S))"] {
        let slot = fs(slot);
        match unify(&ken, &slot, &model) {
            Ok((u, rec)) => {
                println!("{ken} + {slot}");
                println!("  = {u}  pair ({},{}) cost {}", rec.pair.0, rec.pair.1, rec.cost);
                println!("  subsumes both: {}", subsumes(&ken, &u) && subsumes(&slot, &u));
                let (a, b) = undo(&rec);
                println!("  undo restores inputs: {}", a == ken && b == slot);
            }
            Err(e) => println!("{ken} + {slot}: {e}"),
        }
    }
}
