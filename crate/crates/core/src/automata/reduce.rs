//! State-space reduction: trimming, forward-bisimulation quotient, direct
//! simulation, and for safety automata, determinization followed by the same
//! quotient.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::Nba;
use crate::guard::Guard;

pub(super) fn reduce(a: &Nba, det_cap: usize) -> Nba {
    let t = a.trim();
    if t.state_count() <= 1 {
        return t;
    }
    let mut q = quotient(&t);
    if q.state_count() <= REDUCE_SIM_CAP {
        q = simulation_reduce(&q);
    }
    if t.all_accepting() && !t.is_deterministic() {
        if let Some(d) = determinize_safety(&t, det_cap) {
            let dq = quotient(&d);
            if dq.state_count() < q.state_count() {
                return dq;
            }
        }
    }
    q
}

/// Merges states with equal acceptance and equal guarded successor classes.
pub(super) fn quotient(a: &Nba) -> Nba {
    let n = a.state_count();
    let mut class: Vec<usize> = a.accepting.iter().map(|&x| usize::from(x)).collect();
    let mut count = {
        let mut seen = class.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    };
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, Guard)>), usize> = HashMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let mut sig: BTreeMap<usize, Guard> = BTreeMap::new();
            for (g, t) in &a.edges[s] {
                sig.entry(class[*t]).and_modify(|h| *h = h.or(g)).or_insert_with(|| g.clone());
            }
            let key = (class[s], sig.into_iter().collect());
            let fresh = ids.len();
            next[s] = *ids.entry(key).or_insert(fresh);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut edges: Vec<Vec<(Guard, usize)>> = vec![Vec::new(); count];
    let mut accepting = vec![false; count];
    let mut done = vec![false; count];
    for s in 0..n {
        let c = class[s];
        if done[c] {
            continue;
        }
        done[c] = true;
        accepting[c] = a.accepting[s];
        edges[c] = a.edges[s].iter().map(|(g, t)| (g.clone(), class[*t])).collect();
    }
    let initial = a.initial.iter().map(|&s| class[s]).collect();
    Nba::from_parts(a.arity, a.props, initial, accepting, edges).trim()
}

/// Simulation is only computed up to this many states.
const SIM_CAP: usize = 400;
/// Routine reductions only pay for simulation on small automata.
const REDUCE_SIM_CAP: usize = 32;

/// Direct simulation: `rel[q][r]` iff `r` can match every move of `q` letter
/// by letter, visiting an accepting state whenever `q` does.
fn direct_simulation(a: &Nba) -> Vec<Vec<bool>> {
    let n = a.state_count();
    let mut rel: Vec<Vec<bool>> = (0..n).map(|q| (0..n).map(|r| !a.accepting[q] || a.accepting[r]).collect()).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            for r in 0..n {
                if q == r || !rel[q][r] {
                    continue;
                }
                let ok = a.edges[q].iter().all(|(g, qt)| {
                    let cover = a.edges[r]
                        .iter()
                        .filter(|(_, rt)| rel[*qt][*rt])
                        .fold(Guard::ff(), |acc, (h, _)| acc.or(h));
                    g.implies(&cover)
                });
                if !ok {
                    rel[q][r] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Merges simulation-equivalent states, then drops each transition on the
/// letters where a transition to a strictly larger state exists, and
/// initial states strictly simulated by another initial state.
pub(super) fn simulation_reduce(a: &Nba) -> Nba {
    let n = a.state_count();
    if n <= 1 || n > SIM_CAP {
        return a.clone();
    }
    let rel = direct_simulation(a);
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for s in 0..n {
        if class[s] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(s);
        for t in s..n {
            if class[t] == usize::MAX && rel[s][t] && rel[t][s] {
                class[t] = c;
            }
        }
    }
    let strictly = |x: usize, y: usize| rel[reps[x]][reps[y]] && !rel[reps[y]][reps[x]];
    let edges: Vec<Vec<(Guard, usize)>> = reps
        .iter()
        .map(|&s| {
            let mut merged: BTreeMap<usize, Guard> = BTreeMap::new();
            for (g, t) in &a.edges[s] {
                merged.entry(class[*t]).and_modify(|h| *h = h.or(g)).or_insert_with(|| g.clone());
            }
            let out: Vec<(usize, Guard)> = merged.into_iter().collect();
            out.iter()
                .map(|(t, g)| {
                    let bigger = out.iter().filter(|(u, _)| strictly(*t, *u)).fold(Guard::ff(), |acc, (_, h)| acc.or(h));
                    (g.and(&bigger.not()), *t)
                })
                .filter(|(g, _)| !g.is_false())
                .collect()
        })
        .collect();
    let accepting = reps.iter().map(|&s| a.accepting[s]).collect();
    let mut init: Vec<usize> = a.initial.iter().map(|&s| class[s]).collect();
    init.sort_unstable();
    init.dedup();
    let initial = init.iter().copied().filter(|&i| !init.iter().any(|&j| strictly(i, j))).collect();
    Nba::from_parts(a.arity, a.props, initial, accepting, edges).trim()
}

/// Subset construction for an automaton whose states are all accepting.
/// Gives up once more than `cap` subsets appear.
pub(super) fn determinize_safety(a: &Nba, cap: usize) -> Option<Nba> {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut queue = VecDeque::new();
    if a.initial.is_empty() {
        return Some(Nba::empty(a.arity, a.props));
    }
    index.insert(a.initial.clone(), 0);
    sets.push(a.initial.clone());
    queue.push_back(0usize);
    let mut edges: Vec<Vec<(Guard, usize)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let mut by_target: BTreeMap<usize, Guard> = BTreeMap::new();
        for &s in &sets[id] {
            for (g, t) in &a.edges[s] {
                by_target.entry(*t).and_modify(|h| *h = h.or(g)).or_insert_with(|| g.clone());
            }
        }
        let (targets, guards): (Vec<usize>, Vec<Guard>) = by_target.into_iter().unzip();
        let mut out = Vec::new();
        for (blk, members) in Guard::partition(&guards) {
            if members.is_empty() {
                continue;
            }
            let next: Vec<usize> = members.iter().map(|&i| targets[i]).collect();
            let dst = match index.get(&next) {
                Some(&d) => d,
                None => {
                    let d = sets.len();
                    if d >= cap {
                        return None;
                    }
                    index.insert(next.clone(), d);
                    sets.push(next);
                    queue.push_back(d);
                    d
                }
            };
            out.push((blk, dst));
        }
        if edges.len() <= id {
            edges.resize(id + 1, Vec::new());
        }
        edges[id] = out;
    }
    edges.resize(sets.len(), Vec::new());
    let accepting = vec![true; sets.len()];
    Some(Nba::from_parts(a.arity, a.props, vec![0], accepting, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::LassoWord;
    use crate::guard::Var;

    #[test]
    fn quotient_merges_copies() {
        let a = Guard::lit(Var::new(0, 0), true);
        // two identical G a loops
        let n = Nba::from_parts(1, 1, vec![0, 1], vec![true, true], vec![vec![(a.clone(), 0)], vec![(a.clone(), 1)]]);
        let r = n.reduce();
        assert_eq!(r.state_count(), 1);
        assert!(r.accepts(&LassoWord::single(&[], &[1])).unwrap());
        assert!(!r.accepts(&LassoWord::single(&[1], &[0])).unwrap());
    }

    #[test]
    fn simulation_prunes_dominated_branches() {
        let a = Guard::lit(Var::new(0, 0), true);
        // 0 -a-> 1 (G a, accepting), 0 -a-> 2 (true loop, accepting): 2 simulates 1
        let n = Nba::from_parts(
            1,
            1,
            vec![0],
            vec![false, true, true],
            vec![vec![(a.clone(), 1), (a.clone(), 2)], vec![(a.clone(), 1)], vec![(Guard::tt(), 2)]],
        );
        let r = simulation_reduce(&n);
        assert_eq!(r.state_count(), 2);
        for (p, c) in [(vec![1], vec![0]), (vec![1, 1], vec![1]), (vec![0], vec![1])] {
            let w = LassoWord::single(&p, &c);
            assert_eq!(n.accepts(&w).unwrap(), r.accepts(&w).unwrap());
        }
    }
}
