mod common;

use common::corpus::cases;
use hyperfix::automata::LassoWord;
use hyperfix::engine::{brute_force_check, verify, BruteConfig, CheckConfig, Method, Outcome};
use hyperfix::formula::{PrefixItem, SoRef};
use hyperfix::ltl2nba::eval_ltl_on_lasso;

fn cfg(method: Method, max_precision: usize) -> CheckConfig {
    CheckConfig { max_precision, method, ..Default::default() }
}

#[test]
fn corpus_matches_explicit_checker() {
    for c in cases() {
        let brute = brute_force_check(&c.system, &c.formula, &BruteConfig { depth: c.depth, ..Default::default() })
            .unwrap_or_else(|e| panic!("{}: {e}", c.name));
        assert_eq!(brute.outcome, c.expected, "{} explicit", c.name);
        let v = verify(&c.system, &c.formula, &cfg(Method::Both, 10)).unwrap();
        assert_eq!(v.outcome, c.expected, "{} symbolic", c.name);
    }
}

#[test]
fn methods_never_contradict() {
    for c in cases() {
        for m in [Method::IterOnly, Method::LearnOnly] {
            let v = verify(&c.system, &c.formula, &cfg(m, 4)).unwrap();
            assert!(v.outcome == Outcome::Unknown || v.outcome == c.expected, "{} under {}", c.name, m.name());
        }
    }
}

#[test]
fn decided_verdicts_persist_at_higher_caps() {
    for c in cases().into_iter().take(8) {
        let v = verify(&c.system, &c.formula, &cfg(Method::IterOnly, 6)).unwrap();
        if v.outcome == Outcome::Unknown {
            continue;
        }
        for cap in v.precision..v.precision + 3 {
            let again = verify(&c.system, &c.formula, &cfg(Method::IterOnly, cap)).unwrap();
            assert_eq!(again.outcome, v.outcome, "{}", c.name);
            assert_eq!(again.precision, v.precision, "{}", c.name);
        }
    }
}

#[test]
fn witnesses_replay() {
    for c in cases() {
        let v = verify(&c.system, &c.formula, &cfg(Method::Both, 10)).unwrap();
        let Some(w) = &v.witness else { continue };
        let nba = c.system.to_nba();
        let fo = c.formula.fo_quants();
        for (name, trace) in w {
            let q = fo.iter().find(|q| &q.var == name).expect("witness names a quantified trace");
            if q.domain == SoRef::System {
                assert!(nba.accepts(trace).unwrap(), "{}: {name} not a system trace", c.name);
            }
        }
        let pure = c.formula.prefix.iter().all(|p| matches!(p, PrefixItem::Fo(_)));
        if pure && w.len() == fo.len() {
            let names: Vec<String> = w.iter().map(|(n, _)| n.clone()).collect();
            let zip = LassoWord::zip(&w.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>());
            let holds = eval_ltl_on_lasso(&c.formula.body, &zip, &names, &c.formula.aps).unwrap();
            assert_eq!(holds, v.outcome == Outcome::Sat, "{}", c.name);
        }
    }
}

#[test]
fn mismatched_propositions_are_rejected() {
    let c = &cases()[0];
    let other = hyperfix::encodings::ck_system();
    assert!(verify(&other, &c.formula, &CheckConfig::default()).is_err());
}
