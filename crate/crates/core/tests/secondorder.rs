mod common;

use common::corpus::cases;
use common::{small_benchmarks, suites};
use hyperfix::automata::{Nba, DEFAULT_STATE_BUDGET};
use hyperfix::firstorder::{Bound, Env};
use hyperfix::formula::Formula;
use hyperfix::secondorder::{FixSystem, Iteration};
use hyperfix::system::TransitionSystem;

fn instances() -> Vec<(String, TransitionSystem, Formula)> {
    let mut out: Vec<_> = small_benchmarks().into_iter().map(|i| (i.name, i.system, i.formula)).collect();
    for c in cases() {
        if !c.formula.so_quants().is_empty() {
            out.push((c.name.to_string(), c.system, c.formula));
        }
    }
    out
}

#[test]
fn first_iterate_is_empty_and_second_is_the_seed() {
    for (name, ts, f) in instances() {
        let sys = FixSystem::new(&f, f.so_quants()[0], &Env::new(ts.to_nba()), Bound::Lower).unwrap();
        let mut it = Iteration::new(sys.clone(), DEFAULT_STATE_BUDGET);
        assert!(it.get(0).unwrap().is_empty().is_none(), "{name}");
        let seed = sys.step(&Nba::empty(sys.arity(), sys.props())).unwrap();
        let c1 = it.get(1).unwrap().clone();
        assert!(seed.language_included(&c1).unwrap().is_none(), "{name}");
        assert!(c1.language_included(&seed).unwrap().is_none(), "{name}");
    }
}

#[test]
fn approximations_are_sound() {
    for (name, ts, f) in instances() {
        let issues = suites::approximation_issues(&name, &ts, &f, 8, 3);
        assert!(issues.is_empty(), "{issues:#?}");
    }
}
