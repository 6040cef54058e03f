//! Small systems and formulas whose fixpoints stay short enough for the
//! explicit checker.

use hyperfix::engine::Outcome;
use hyperfix::formula::{parse_formula, Formula};
use hyperfix::system::{parse_system, TransitionSystem};

pub struct Case {
    pub name: &'static str,
    pub system: TransitionSystem,
    pub formula: Formula,
    pub expected: Outcome,
    pub depth: usize,
}

const SINGLE: &str = "aps: a\ninit: 0\nstates:\n0 {a} -> 1\n1 {} -> 1\n";
const BRANCH: &str = "aps: a\ninit: 0\nstates:\n0 {} -> 1 2\n1 {a} -> 1\n2 {} -> 2\n";
const TOGGLE: &str = "aps: a\ninit: 0\nstates:\n0 {a} -> 1\n1 {} -> 0 1\n";
const PAIR: &str = "aps: a b\ninit: 0\nstates:\n0 {a} -> 1 2\n1 {b} -> 1\n2 {a b} -> 2\n";

const TABLE: &[(&str, &str, &str, bool)] = &[
    ("single_eventually_off", SINGLE, "forall p in S. F !a@p", true),
    ("single_always_on", SINGLE, "exists p in S. G a@p", false),
    ("branch_agree_next", BRANCH, "forall p in S. forall q in S. X (a@p <-> a@q)", false),
    ("branch_opposite_exists", BRANCH, "exists p in S. exists q in S. X G (a@p <-> !a@q)", true),
    ("branch_opposite_forall", BRANCH, "forall p in S. exists q in S. X G (a@p <-> !a@q)", true),
    ("toggle_no_repeat", TOGGLE, "forall p in S. G (a@p -> X !a@p)", true),
    ("toggle_dominating", TOGGLE, "exists p in S. forall q in S. G (a@q -> a@p)", false),
    ("toggle_same_start", TOGGLE, "forall p in S. forall q in S. (a@p <-> a@q)", true),
    ("toggle_diverge", TOGGLE, "exists p in S. exists q in S. X X (a@p & !a@q)", true),
    ("branch_some_differs", BRANCH, "forall p in S. exists q in S. F (a@p <-> !a@q)", true),
    (
        "single_closure",
        SINGLE,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in A. G eq(q1,q2;a) => q2 in X }. forall r in X. F !a@r",
        true,
    ),
    (
        "branch_next_closure",
        BRANCH,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in S. X eq(q1,q2;a) => q2 in X }. forall r in X. X a@r",
        false,
    ),
    (
        "branch_start_closure_all",
        BRANCH,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in S. eq(q1,q2;a) => q2 in X }. forall r in X. X a@r",
        false,
    ),
    (
        "branch_start_closure_some",
        BRANCH,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in S. eq(q1,q2;a) => q2 in X }. exists r in X. X a@r",
        true,
    ),
    (
        "pair_by_a",
        PAIR,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in S. G eq(q1,q2;a) => q2 in X }. forall r1 in X. forall r2 in X. G (b@r1 <-> b@r2)",
        true,
    ),
    (
        "pair_by_b",
        PAIR,
        "forall p in S. fix X min { p in X; forall q1 in X. forall q2 in S. G eq(q1,q2;b) => q2 in X }. forall r1 in X. forall r2 in X. G (a@r1 <-> a@r2)",
        false,
    ),
    (
        "pair_exists_outer",
        PAIR,
        "exists p in S. fix X min { p in X; forall q1 in X. forall q2 in S. G eq(q1,q2;b) => q2 in X }. exists r in X. G a@r",
        true,
    ),
    (
        "closed_seed",
        SINGLE,
        "fix X min { forall q in A. a@q & X G !a@q => q in X }. forall r in X. a@r",
        true,
    ),
    (
        "closed_flip_holds",
        SINGLE,
        "fix X min { forall q in A. G !a@q => q in X; forall q1 in X. forall q2 in A. (a@q2 <-> !a@q1) & X G eq(q1,q2;a) => q2 in X }. forall r in X. X G !a@r",
        true,
    ),
    (
        "closed_flip_fails",
        SINGLE,
        "fix X min { forall q in A. G !a@q => q in X; forall q1 in X. forall q2 in A. (a@q2 <-> !a@q1) & X G eq(q1,q2;a) => q2 in X }. forall r in X. !a@r",
        false,
    ),
];

pub fn cases() -> Vec<Case> {
    TABLE
        .iter()
        .map(|&(name, sys, f, sat)| {
            let system = parse_system(sys).expect("corpus system");
            let formula = parse_formula(f, system.aps()).unwrap_or_else(|e| panic!("{name}: {e}"));
            let depth = if system.aps().len() == 1 { 4 } else { 3 };
            let expected = if sat { Outcome::Sat } else { Outcome::Unsat };
            Case { name, system, formula, expected, depth }
        })
        .collect()
}
