mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(common::LAW_CASES))]

    #[test]
    fn unification_laws(seed in any::<u64>()) {
        common::check_unification(seed).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn generated_pairs_exercise_both_outcomes() {
    let outcomes: Vec<bool> = (0..500).map(|s| common::check_unification(s).unwrap()).collect();
    let unified = outcomes.iter().filter(|&&u| u).count();
    assert!(unified > 100 && unified < 490, "{unified} of 500 unified");
}
