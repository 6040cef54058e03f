//! Property probes shared by the property tests and the acceptance run.
//! Each returns the number of violations.

use super::{random_lasso, random_ltl, random_nba};
use hyperfix::ltl2nba::{eval_ltl_on_lasso, ltl_to_nba};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn complement_exclusive(probes: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut done, mut bad) = (0, 0);
    while done < probes {
        let arity = rng.gen_range(1..=2);
        let a = random_nba(&mut rng, arity, 1, 4);
        let c = a.complement().expect("small automaton");
        for _ in 0..10 {
            let w = random_lasso(&mut rng, arity, 1);
            bad += usize::from(a.accepts(&w).unwrap() == c.accepts(&w).unwrap());
            done += 1;
        }
    }
    bad
}

pub fn de_morgan(automata: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..automata {
        let a = random_nba(&mut rng, 1, 2, 2);
        let b = random_nba(&mut rng, 1, 2, 2);
        let lhs = a.intersect(&b).unwrap().complement().unwrap();
        let rhs = a.complement().unwrap().union(&b.complement().unwrap()).unwrap();
        for _ in 0..10 {
            let w = random_lasso(&mut rng, 1, 2);
            bad += usize::from(lhs.accepts(&w).unwrap() != rhs.accepts(&w).unwrap());
        }
    }
    bad
}

pub fn witness_replay(automata: usize, seed: u64) -> usize {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut bad = 0;
    for _ in 0..automata {
        let arity = rng.gen_range(0..=2);
        let a = random_nba(&mut rng, arity, 2, 5);
        if let Some(w) = a.is_empty() {
            bad += usize::from(!a.accepts(&w).unwrap());
        }
    }
    bad
}

pub fn ltl_agreement(pairs: usize, seed: u64) -> usize {
    let aps: Vec<String> = vec!["a".into(), "b".into()];
    let mut rng = StdRng::seed_from_u64(seed);
    let (mut done, mut bad) = (0, 0);
    while done < pairs {
        let m = rng.gen_range(1..=2);
        let vars: Vec<&str> = ["p", "q"][..m].to_vec();
        let tracks: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let phi = random_ltl(&mut rng, 5, &vars);
        let nba = ltl_to_nba(&phi, &tracks, &aps).unwrap();
        for _ in 0..5 {
            let w = random_lasso(&mut rng, m, 2);
            let expect = eval_ltl_on_lasso(&phi, &w, &tracks, &aps).unwrap();
            bad += usize::from(nba.accepts(&w).unwrap() != expect);
            done += 1;
        }
    }
    bad
}

/// Chain monotonicity up to convergence (at most `chain` steps), then
/// sandwich and inductivity of the bounds in rounds `0..=rounds` for the
/// first set variable. Returns a description of every violation.
pub fn approximation_issues(
    name: &str,
    ts: &hyperfix::system::TransitionSystem,
    f: &hyperfix::formula::Formula,
    chain: usize,
    rounds: usize,
) -> Vec<String> {
    use hyperfix::automata::{Nba, DEFAULT_STATE_BUDGET};
    use hyperfix::engine::{approximation_trace, CheckConfig, Method};
    use hyperfix::firstorder::{Bound, Env};
    use hyperfix::secondorder::{park_violation, FixSystem, Iteration};

    let mut issues = Vec::new();
    let env = Env::new(ts.to_nba());
    let so = f.so_quants()[0];
    let mut it = Iteration::new(FixSystem::new(f, so, &env, Bound::Lower).unwrap(), DEFAULT_STATE_BUDGET);
    for m in 0..chain {
        let a = it.get(m).unwrap().clone();
        let b = it.get(m + 1).unwrap().clone();
        if a.language_included(&b).unwrap().is_some() {
            issues.push(format!("{name}: iterate {m} not below iterate {}", m + 1));
        }
        if it.converged(m + 1).unwrap() {
            break;
        }
    }
    let upper_sys = FixSystem::new(f, so, &env, Bound::Upper).unwrap();
    let seed = upper_sys.step(&Nba::empty(upper_sys.arity(), upper_sys.props())).unwrap();
    for method in [Method::Both, Method::LearnOnly] {
        let cfg = CheckConfig { max_precision: rounds, method, ..Default::default() };
        for (n, sets) in approximation_trace(ts, f, &cfg).unwrap().iter().enumerate() {
            let b = &sets[0];
            let tag = format!("{name} {} round {n}", method.name());
            if b.lower.language_included(&b.upper).unwrap().is_some() {
                issues.push(format!("{tag}: lower escapes upper"));
            }
            if seed.language_included(&b.upper).unwrap().is_some() {
                issues.push(format!("{tag}: seed escapes upper"));
            }
            if park_violation(&upper_sys, &b.upper, DEFAULT_STATE_BUDGET).unwrap().is_some() {
                issues.push(format!("{tag}: upper not closed under the step"));
            }
        }
    }
    issues
}
