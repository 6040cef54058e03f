//! Büchi complementation: subset construction for safety automata, two-copy
//! construction for deterministic ones, a breakpoint construction for weak
//! ones, level rankings otherwise.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{AutomataError, Nba};
use crate::guard::Guard;

pub(super) fn complement(a: &Nba, budget: usize) -> Result<Nba, AutomataError> {
    let t = a.trim();
    if t.state_count() == 0 {
        return Ok(Nba::universal(a.arity, a.props));
    }
    if a.arity == 0 {
        // a single possible word, and it is accepted
        return Ok(Nba::empty(0, a.props));
    }
    let out = if t.all_accepting() {
        safety(&t, budget)?
    } else if t.is_deterministic() {
        deterministic(&t)
    } else if is_weak(&t) {
        weak(&t, budget)?
    } else {
        ranked(&super::reduce::simulation_reduce(&super::reduce::quotient(&t)), budget)?
    };
    Ok(out.trim())
}

/// Guards from a set of states grouped by target.
fn by_target(a: &Nba, set: &[usize]) -> (Vec<usize>, Vec<Guard>) {
    let mut acc: BTreeMap<usize, Guard> = BTreeMap::new();
    for &s in set {
        for (g, t) in &a.edges[s] {
            acc.entry(*t).and_modify(|h| *h = h.or(g)).or_insert_with(|| g.clone());
        }
    }
    acc.into_iter().unzip()
}

/// Complement of a trimmed automaton in which every state is accepting:
/// a word is rejected iff every run eventually dies.
fn safety(a: &Nba, budget: usize) -> Result<Nba, AutomataError> {
    const SINK: usize = 0;
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new()];
    let mut queue = VecDeque::new();
    let init = a.initial.clone();
    index.insert(init.clone(), 1);
    sets.push(init);
    queue.push_back(1usize);
    let mut edges: Vec<Vec<(Guard, usize)>> = vec![vec![(Guard::tt(), SINK)]];
    while let Some(id) = queue.pop_front() {
        let (targets, guards) = by_target(a, &sets[id]);
        let mut out = Vec::new();
        for (blk, members) in Guard::partition(&guards) {
            let next: Vec<usize> = members.iter().map(|&i| targets[i]).collect();
            let dst = if next.is_empty() {
                SINK
            } else if let Some(&d) = index.get(&next) {
                d
            } else {
                let d = sets.len();
                if d > budget {
                    return Err(AutomataError::BudgetExceeded { limit: budget });
                }
                index.insert(next.clone(), d);
                sets.push(next);
                queue.push_back(d);
                d
            };
            out.push((blk, dst));
        }
        if edges.len() <= id {
            edges.resize(id + 1, Vec::new());
        }
        edges[id] = out;
    }
    edges.resize(sets.len(), Vec::new());
    let mut accepting = vec![false; sets.len()];
    accepting[SINK] = true;
    Ok(Nba::from_parts(a.arity, a.props, vec![1], accepting, edges))
}

/// Every cycle stays among accepting states or among rejecting ones.
fn is_weak(a: &Nba) -> bool {
    let succ = |s: usize| a.edges[s].iter().map(|&(_, t)| t).collect::<Vec<_>>();
    let comp = super::graph::scc(a.state_count(), &succ);
    (0..a.state_count()).all(|s| a.edges[s].iter().all(|&(_, t)| comp[t] != comp[s] || a.accepting[t] == a.accepting[s]))
}

/// Complement of a weak automaton. A word is rejected iff every run ends in
/// a rejecting component, i.e. visits rejecting states infinitely often;
/// that universal condition is checked with a breakpoint set `O` of runs
/// still owing such a visit.
fn weak(a: &Nba, budget: usize) -> Result<Nba, AutomataError> {
    type Key = (Vec<usize>, Vec<usize>);
    let mut index: HashMap<Key, usize> = HashMap::new();
    let mut keys: Vec<Key> = Vec::new();
    let mut queue = VecDeque::new();
    let init: Key = (a.initial.clone(), Vec::new());
    index.insert(init.clone(), 0);
    keys.push(init);
    queue.push_back(0usize);
    let mut edges: Vec<Vec<(Guard, usize)>> = vec![Vec::new()];
    while let Some(id) = queue.pop_front() {
        let (set, owing) = keys[id].clone();
        let owes = |s: usize| owing.binary_search(&s).is_ok();
        let moves: Vec<(&Guard, usize, bool)> = set
            .iter()
            .flat_map(|&s| a.edges[s].iter().map(move |(g, t)| (g, *t, owes(s))))
            .collect();
        let guards: Vec<Guard> = moves.iter().map(|m| m.0.clone()).collect();
        let mut out = Vec::new();
        for (blk, members) in Guard::partition(&guards) {
            let mut next: Vec<usize> = members.iter().map(|&i| moves[i].1).collect();
            next.sort_unstable();
            next.dedup();
            let mut from_owing: Vec<usize> = if owing.is_empty() {
                next.clone()
            } else {
                members.iter().filter(|&&i| moves[i].2).map(|&i| moves[i].1).collect()
            };
            from_owing.retain(|&t| a.accepting[t]);
            from_owing.sort_unstable();
            from_owing.dedup();
            let key = (next, from_owing);
            let dst = match index.get(&key) {
                Some(&d) => d,
                None => {
                    let d = keys.len();
                    if d > budget {
                        return Err(AutomataError::BudgetExceeded { limit: budget });
                    }
                    index.insert(key.clone(), d);
                    keys.push(key);
                    edges.push(Vec::new());
                    queue.push_back(d);
                    d
                }
            };
            out.push((blk, dst));
        }
        edges[id] = out;
    }
    let accepting = keys.iter().map(|(_, o)| o.is_empty()).collect();
    Ok(Nba::from_parts(a.arity, a.props, vec![0], accepting, edges))
}

/// Two-copy complement of a deterministic automaton. Copy one tracks the
/// run, copy two guesses the last visit to an accepting state, and a sink
/// catches letters on which the run dies.
fn deterministic(a: &Nba) -> Nba {
    let n = a.state_count();
    let sink = 2 * n;
    let mut edges: Vec<Vec<(Guard, usize)>> = vec![Vec::new(); 2 * n + 1];
    for q in 0..n {
        let mut any = Guard::ff();
        for (g, t) in &a.edges[q] {
            any = any.or(g);
            edges[q].push((g.clone(), *t));
            if !a.accepting[*t] {
                edges[q].push((g.clone(), n + t));
                if !a.accepting[q] {
                    edges[n + q].push((g.clone(), n + t));
                }
            }
        }
        edges[q].push((any.not(), sink));
    }
    edges[sink].push((Guard::tt(), sink));
    let mut accepting = vec![false; 2 * n + 1];
    for q in 0..n {
        accepting[n + q] = !a.accepting[q];
    }
    accepting[sink] = true;
    Nba::from_parts(a.arity, a.props, a.initial.clone(), accepting, edges)
}

const ABSENT: u8 = u8::MAX;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Macro {
    /// Guessing phase: plain subset, no ranks yet.
    Subset(Vec<usize>),
    /// Tight level ranking with breakpoint set.
    Ranked(Vec<u8>, Vec<bool>),
}

/// Rank-based complement in two phases: a subset phase, then a jump into
/// tight level rankings (maximal rank odd, every smaller odd rank in use)
/// with a breakpoint set of even-ranked states owing a visit to an odd rank.
fn ranked(a: &Nba, budget: usize) -> Result<Nba, AutomataError> {
    let n = a.state_count();
    if 2 * n >= ABSENT as usize {
        return Err(AutomataError::BudgetExceeded { limit: budget });
    }
    let mut index: HashMap<Macro, usize> = HashMap::new();
    let mut macros: Vec<Macro> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |m: Macro, macros: &mut Vec<Macro>, queue: &mut VecDeque<usize>| -> Result<usize, AutomataError> {
        if let Some(&d) = index.get(&m) {
            return Ok(d);
        }
        let d = macros.len();
        if d >= budget {
            return Err(AutomataError::BudgetExceeded { limit: budget });
        }
        index.insert(m.clone(), d);
        macros.push(m);
        queue.push_back(d);
        Ok(d)
    };
    intern(Macro::Subset(a.initial.clone()), &mut macros, &mut queue)?;
    let mut edges: Vec<Vec<(Guard, usize)>> = Vec::new();
    type Blocks = (Vec<(usize, usize)>, Vec<(Guard, Vec<usize>)>);
    let mut blocks_cache: HashMap<Vec<usize>, Blocks> = HashMap::new();
    while let Some(id) = queue.pop_front() {
        let cur = macros[id].clone();
        let present: Vec<usize> = match &cur {
            Macro::Subset(s) => s.clone(),
            Macro::Ranked(f, _) => (0..n).filter(|&q| f[q] != ABSENT).collect(),
        };
        let (flat, blocks) = blocks_cache
            .entry(present.clone())
            .or_insert_with(|| {
                let mut flat: Vec<(usize, usize)> = Vec::new();
                let mut guards: Vec<Guard> = Vec::new();
                for &q in &present {
                    for (g, t) in &a.edges[q] {
                        flat.push((q, *t));
                        guards.push(g.clone());
                    }
                }
                let blocks = Guard::partition(&guards);
                (flat, blocks)
            })
            .clone();
        let mut out = Vec::new();
        for (blk, members) in blocks {
            let mut succ = vec![false; n];
            for &i in &members {
                succ[flat[i].1] = true;
            }
            let succs: Vec<usize> = (0..n).filter(|&t| succ[t]).collect();
            match &cur {
                Macro::Subset(_) => {
                    let d = intern(Macro::Subset(succs.clone()), &mut macros, &mut queue)?;
                    out.push((blk.clone(), d));
                    let bound = vec![(2 * n) as u8; n];
                    let free = succs.iter().filter(|&&t| !a.accepting[t]).count();
                    let ranks: Vec<u8> = if succs.is_empty() { vec![1] } else { (1..2 * free as u8).step_by(2).collect() };
                    for r in ranks {
                        for choice in tight_rankings(n, &succs, &bound, &a.accepting, r) {
                            let o2 = (0..n).map(|t| choice[t] != ABSENT && choice[t] % 2 == 0).collect();
                            let d = intern(Macro::Ranked(choice, o2), &mut macros, &mut queue)?;
                            out.push((blk.clone(), d));
                        }
                    }
                }
                Macro::Ranked(f, o) => {
                    let o_empty = !o.iter().any(|&x| x);
                    let mut bound = vec![ABSENT; n];
                    let mut from_o = vec![false; n];
                    for &i in &members {
                        let (q, t) = flat[i];
                        bound[t] = bound[t].min(f[q]);
                        if o[q] {
                            from_o[t] = true;
                        }
                    }
                    for choice in tight_rankings(n, &succs, &bound, &a.accepting, rank_of(f).max(1)) {
                        let even = |t: usize| choice[t] != ABSENT && choice[t] % 2 == 0;
                        let o2 = (0..n).map(|t| even(t) && (o_empty || from_o[t])).collect();
                        let d = intern(Macro::Ranked(choice, o2), &mut macros, &mut queue)?;
                        out.push((blk.clone(), d));
                    }
                }
            }
        }
        if edges.len() <= id {
            edges.resize(id + 1, Vec::new());
        }
        edges[id] = out;
    }
    edges.resize(macros.len(), Vec::new());
    let accepting = macros
        .iter()
        .map(|m| match m {
            Macro::Subset(_) => false,
            Macro::Ranked(_, o) => !o.iter().any(|&x| x),
        })
        .collect();
    Ok(Nba::from_parts(a.arity, a.props, vec![0], accepting, edges))
}

/// Tight level rankings of `succs` with maximal rank exactly `r` (odd):
/// bounded pointwise by `bound`, even on accepting states, and using every
/// odd rank below `r`. An empty `succs` yields the empty ranking.
fn tight_rankings(n: usize, succs: &[usize], bound: &[u8], accepting: &[bool], r: u8) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if succs.is_empty() {
        out.push(vec![ABSENT; n]);
        return out;
    }
    let mut cur = vec![ABSENT; n];
    let mut used = vec![0u32; r as usize + 1];
    let free_after: Vec<usize> =
        (0..=succs.len()).map(|k| succs[k..].iter().filter(|&&t| !accepting[t]).count()).collect();
    struct Ctx<'a> {
        succs: &'a [usize],
        bound: &'a [u8],
        accepting: &'a [bool],
        free_after: &'a [usize],
        r: u8,
    }
    fn go(c: &Ctx, k: usize, cur: &mut Vec<u8>, used: &mut Vec<u32>, out: &mut Vec<Vec<u8>>) {
        let missing = (1..=c.r).step_by(2).filter(|&x| used[x as usize] == 0).count();
        if missing > c.free_after[k] {
            return;
        }
        if k == c.succs.len() {
            out.push(cur.clone());
            return;
        }
        let t = c.succs[k];
        for x in (0..=c.bound[t].min(c.r)).rev() {
            if c.accepting[t] && x % 2 == 1 {
                continue;
            }
            cur[t] = x;
            used[x as usize] += 1;
            go(c, k + 1, cur, used, out);
            used[x as usize] -= 1;
        }
        cur[t] = ABSENT;
    }
    let ctx = Ctx { succs, bound, accepting, free_after: &free_after, r };
    go(&ctx, 0, &mut cur, &mut used, &mut out);
    out
}

/// Maximal rank of a ranking.
fn rank_of(f: &[u8]) -> u8 {
    f.iter().copied().filter(|&x| x != ABSENT).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::LassoWord;
    use crate::guard::Var;

    fn a() -> Guard {
        Guard::lit(Var::new(0, 0), true)
    }

    /// "finitely many a": guess the point after which a never holds.
    fn fin_a() -> Nba {
        Nba::from_parts(
            1,
            1,
            vec![0],
            vec![false, true],
            vec![vec![(Guard::tt(), 0), (a().not(), 1)], vec![(a().not(), 1)]],
        )
    }

    #[test]
    fn complement_of_universal_is_empty() {
        assert!(Nba::universal(2, 1).complement().unwrap().is_empty().is_none());
    }

    #[test]
    fn complement_of_cobuchi_shape() {
        let c = fin_a().complement().unwrap();
        assert!(c.accepts(&LassoWord::single(&[], &[1])).unwrap());
        assert!(c.accepts(&LassoWord::single(&[], &[0, 1])).unwrap());
        assert!(!c.accepts(&LassoWord::single(&[1, 1, 1], &[0])).unwrap());
    }

    #[test]
    fn deterministic_path() {
        // infinitely many a, deterministic
        let inf = Nba::from_parts(
            1,
            1,
            vec![0],
            vec![false, true],
            vec![vec![(a(), 1), (a().not(), 0)], vec![(a(), 1), (a().not(), 0)]],
        );
        assert!(inf.is_deterministic());
        let c = inf.complement().unwrap();
        assert!(c.accepts(&LassoWord::single(&[1, 1], &[0])).unwrap());
        assert!(!c.accepts(&LassoWord::single(&[], &[0, 1])).unwrap());
    }

    #[test]
    fn safety_path() {
        let ga = Nba::always(1, 1, a());
        let c = ga.complement().unwrap();
        assert!(c.accepts(&LassoWord::single(&[1], &[0])).unwrap());
        assert!(!c.accepts(&LassoWord::single(&[], &[1])).unwrap());
    }

    #[test]
    fn budget_reports_error() {
        assert!(matches!(fin_a().complement_with_budget(0), Err(AutomataError::BudgetExceeded { .. })));
        // mixed component, nondeterministic: goes through rankings
        let mixed = Nba::from_parts(1, 1, vec![0], vec![true, false], vec![vec![(a(), 0), (a(), 1)], vec![(Guard::tt(), 0)]]);
        assert!(!is_weak(&mixed.trim()));
        assert!(matches!(mixed.complement_with_budget(1), Err(AutomataError::BudgetExceeded { .. })));
    }
}
