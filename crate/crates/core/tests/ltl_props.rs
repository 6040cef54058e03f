mod common;

use common::{random_lasso, random_ltl, suites};
use hyperfix::formula::Ltl;
use hyperfix::ltl2nba::{eval_ltl_on_lasso, ltl_to_nba};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn aps() -> Vec<String> {
    vec!["a".into(), "b".into()]
}

#[test]
fn translation_agrees_with_evaluation() {
    assert_eq!(suites::ltl_agreement(1000, 42), 0);
}

#[test]
fn negation_matches_complement() {
    let mut rng = StdRng::seed_from_u64(99);
    let tracks = vec!["p".to_string()];
    for _ in 0..60 {
        let phi = random_ltl(&mut rng, 2, &["p"]);
        let neg = ltl_to_nba(&Ltl::not(phi.clone()), &tracks, &aps()).unwrap();
        let comp = ltl_to_nba(&phi, &tracks, &aps()).unwrap().complement().unwrap();
        for _ in 0..10 {
            let w = random_lasso(&mut rng, 1, 2);
            assert_eq!(neg.accepts(&w).unwrap(), comp.accepts(&w).unwrap(), "{phi}");
        }
    }
}

fn small_word() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (prop::collection::vec(0u64..4, 0..4), prop::collection::vec(0u64..4, 1..5))
}

proptest! {
    #[test]
    fn derived_operators_normalize(seed in 0u64..10_000, (p, c) in small_word()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let psi = random_ltl(&mut rng, 2, &["p"]);
        let w = hyperfix::automata::LassoWord::single(&p, &c);
        let tracks = vec!["p".to_string()];
        let ev = |e: &Ltl| eval_ltl_on_lasso(e, &w, &tracks, &aps()).unwrap();
        prop_assert_eq!(ev(&Ltl::eventually(psi.clone())), ev(&Ltl::until(Ltl::Const(true), psi.clone())));
        prop_assert_eq!(ev(&Ltl::globally(psi.clone())), ev(&Ltl::not(Ltl::eventually(Ltl::not(psi.clone())))));
        let a = random_ltl(&mut rng, 1, &["p"]);
        let weak = Ltl::weak_until(a.clone(), psi.clone());
        let unfolded = Ltl::or(Ltl::until(a.clone(), psi.clone()), Ltl::globally(a));
        prop_assert_eq!(ev(&weak), ev(&unfolded));
    }
}
