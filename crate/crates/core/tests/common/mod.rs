#![allow(dead_code)]

pub mod corpus;
pub mod suites;

use hyperfix::automata::{LassoWord, Nba};
use hyperfix::guard::{Guard, Var};
use rand::rngs::StdRng;
use rand::Rng;

pub fn random_guard(rng: &mut StdRng, arity: usize, props: usize) -> Guard {
    let mut g = Guard::ff();
    for _ in 0..rng.gen_range(1..=2) {
        let mut cube = Guard::tt();
        for _ in 0..rng.gen_range(0..=2) {
            let v = Var::new(rng.gen_range(0..props), rng.gen_range(0..arity.max(1)));
            cube = cube.and(&Guard::lit(v, rng.gen_bool(0.5)));
        }
        g = g.or(&cube);
    }
    g
}

pub fn random_nba(rng: &mut StdRng, arity: usize, props: usize, max_states: usize) -> Nba {
    let n = rng.gen_range(1..=max_states);
    let mut edges = Vec::new();
    for _ in 0..n {
        let mut out = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let g = if arity == 0 { Guard::tt() } else { random_guard(rng, arity, props) };
            out.push((g, rng.gen_range(0..n)));
        }
        edges.push(out);
    }
    let accepting = (0..n).map(|_| rng.gen_bool(0.4)).collect();
    let mut initial = vec![0];
    if n > 1 && rng.gen_bool(0.3) {
        initial.push(1);
    }
    Nba::from_parts(arity, props, initial, accepting, edges)
}

pub fn random_lasso(rng: &mut StdRng, arity: usize, props: usize) -> LassoWord {
    let mask = (1u64 << props) - 1;
    let letter = |rng: &mut StdRng| (0..arity).map(|_| rng.gen::<u64>() & mask).collect::<Vec<_>>();
    let p = rng.gen_range(0..=3);
    let c = rng.gen_range(1..=3);
    let prefix = (0..p).map(|_| letter(rng)).collect();
    let cycle = (0..c).map(|_| letter(rng)).collect();
    LassoWord::new(arity, prefix, cycle)
}

use hyperfix::formula::Ltl;

/// Random body of depth at most `depth` over props `a`,`b` and the given
/// trace variables.
pub fn random_ltl(rng: &mut StdRng, depth: usize, vars: &[&str]) -> Ltl {
    let props = ["a", "b"];
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..10) {
            0 => Ltl::Const(rng.gen_bool(0.5)),
            _ => Ltl::atom(props[rng.gen_range(0..2)], vars[rng.gen_range(0..vars.len())]),
        };
    }
    let sub = |rng: &mut StdRng| random_ltl(rng, depth - 1, vars);
    match rng.gen_range(0..12) {
        0 => Ltl::not(sub(rng)),
        1 => Ltl::and(sub(rng), sub(rng)),
        2 => Ltl::or(sub(rng), sub(rng)),
        3 => Ltl::implies(sub(rng), sub(rng)),
        4 => Ltl::iff(sub(rng), sub(rng)),
        5 => Ltl::next(sub(rng)),
        6 => Ltl::eventually(sub(rng)),
        7 => Ltl::globally(sub(rng)),
        8 | 9 => Ltl::until(sub(rng), sub(rng)),
        _ => Ltl::weak_until(sub(rng), sub(rng)),
    }
}

/// Benchmark instances small enough for repeated approximation checks.
pub fn small_benchmarks() -> Vec<hyperfix::encodings::Instance> {
    use hyperfix::encodings::*;
    let mut all = Vec::new();
    for n in 1..=3 {
        let (a, b) = gen_ck_chain(n);
        all.extend([a, b]);
    }
    for p in [OdProgram::TSyn, OdProgram::TAsyn, OdProgram::Q1] {
        let (_, b) = gen_async_od(p);
        all.push(b);
    }
    for v in [Mazurkiewicz::SwapA, Mazurkiewicz::SwapATwice, Mazurkiewicz::SwapAN(3), Mazurkiewicz::SwapAViolation(3)] {
        all.push(gen_mazurkiewicz(v));
    }
    all.push(gen_muddy_children(2, 1));
    all.push(gen_muddy_children(2, 2));
    all
}
