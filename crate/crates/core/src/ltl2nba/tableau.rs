//! On-the-fly tableau over negation normal form with transition-based
//! until fulfilment, degeneralized with a level counter.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::{resolve, LtlError};
use crate::automata::Nba;
use crate::formula::Ltl;
use crate::guard::Guard;

type Id = usize;

#[derive(Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Prop(Guard),
    And(Id, Id),
    Or(Id, Id),
    Next(Id),
    Until(Id, Id),
    Release(Id, Id),
}

struct Arena<'a> {
    nodes: Vec<Node>,
    index: HashMap<Node, Id>,
    tracks: &'a [String],
    aps: &'a [String],
}

impl<'a> Arena<'a> {
    fn mk(&mut self, n: Node) -> Id {
        let n = match n {
            Node::Prop(g) if g.is_true() => Node::True,
            Node::Prop(g) if g.is_false() => Node::False,
            Node::Until(_, b) | Node::Release(_, b) if matches!(self.nodes[b], Node::True | Node::False) => {
                self.nodes[b].clone()
            }
            Node::Until(a, b) | Node::Release(a, b) if a == b => self.nodes[b].clone(),
            Node::Next(a) if matches!(self.nodes[a], Node::True | Node::False) => self.nodes[a].clone(),
            other => other,
        };
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        self.nodes.push(n.clone());
        self.index.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn guard_of(&self, id: Id) -> Option<Guard> {
        match &self.nodes[id] {
            Node::True => Some(Guard::tt()),
            Node::False => Some(Guard::ff()),
            Node::Prop(g) => Some(g.clone()),
            _ => None,
        }
    }

    fn and(&mut self, a: Id, b: Id) -> Id {
        if let (Some(x), Some(y)) = (self.guard_of(a), self.guard_of(b)) {
            return self.mk(Node::Prop(x.and(&y)));
        }
        match (&self.nodes[a], &self.nodes[b]) {
            (Node::False, _) | (_, Node::False) => self.mk(Node::False),
            (Node::True, _) => b,
            (_, Node::True) => a,
            _ => self.mk(Node::And(a.min(b), a.max(b))),
        }
    }

    fn or(&mut self, a: Id, b: Id) -> Id {
        if let (Some(x), Some(y)) = (self.guard_of(a), self.guard_of(b)) {
            return self.mk(Node::Prop(x.or(&y)));
        }
        match (&self.nodes[a], &self.nodes[b]) {
            (Node::True, _) | (_, Node::True) => self.mk(Node::True),
            (Node::False, _) => b,
            (_, Node::False) => a,
            _ => self.mk(Node::Or(a.min(b), a.max(b))),
        }
    }

    /// Negation normal form of `e` (negated when `neg`).
    fn nnf(&mut self, e: &Ltl, neg: bool) -> Result<Id, LtlError> {
        Ok(match e {
            Ltl::Const(b) => self.mk(if *b != neg { Node::True } else { Node::False }),
            Ltl::Atom { prop, var } => {
                let v = resolve(prop, var, self.tracks, self.aps)?;
                self.mk(Node::Prop(Guard::lit(v, !neg)))
            }
            Ltl::Member { var, set } => return Err(LtlError::Unnormalized(format!("{var} in {set}"))),
            Ltl::Not(a) => self.nnf(a, !neg)?,
            Ltl::And(a, b) | Ltl::Or(a, b) => {
                let (x, y) = (self.nnf(a, neg)?, self.nnf(b, neg)?);
                if matches!(e, Ltl::And(..)) != neg {
                    self.and(x, y)
                } else {
                    self.or(x, y)
                }
            }
            Ltl::Implies(a, b) => {
                let (x, y) = (self.nnf(a, !neg)?, self.nnf(b, neg)?);
                if neg {
                    self.and(x, y)
                } else {
                    self.or(x, y)
                }
            }
            Ltl::Iff(a, b) => {
                let (pa, na) = (self.nnf(a, false)?, self.nnf(a, true)?);
                let (pb, nb) = (self.nnf(b, false)?, self.nnf(b, true)?);
                let (l, r) = if neg {
                    (self.and(pa, nb), self.and(na, pb))
                } else {
                    (self.and(pa, pb), self.and(na, nb))
                };
                self.or(l, r)
            }
            Ltl::Next(a) => {
                let x = self.nnf(a, neg)?;
                self.mk(Node::Next(x))
            }
            Ltl::Eventually(a) | Ltl::Globally(a) => {
                let x = self.nnf(a, neg)?;
                if matches!(e, Ltl::Eventually(_)) != neg {
                    let t = self.mk(Node::True);
                    self.mk(Node::Until(t, x))
                } else {
                    let f = self.mk(Node::False);
                    self.mk(Node::Release(f, x))
                }
            }
            Ltl::Until(a, b) => {
                let (x, y) = (self.nnf(a, neg)?, self.nnf(b, neg)?);
                if neg {
                    // !(a U b) = !a R !b
                    self.mk(Node::Release(x, y))
                } else {
                    self.mk(Node::Until(x, y))
                }
            }
            Ltl::WeakUntil(a, b) => {
                if neg {
                    // !(a W b) = !b U (!a & !b)
                    let (na, nb) = (self.nnf(a, true)?, self.nnf(b, true)?);
                    let both = self.and(na, nb);
                    self.mk(Node::Until(nb, both))
                } else {
                    // a W b = b R (a | b)
                    let (pa, pb) = (self.nnf(a, false)?, self.nnf(b, false)?);
                    let either = self.or(pa, pb);
                    self.mk(Node::Release(pb, either))
                }
            }
        })
    }
}

/// One way to satisfy an obligation set for one step.
#[derive(Clone)]
struct Cover {
    guard: Guard,
    next: BTreeSet<Id>,
    postponed: BTreeSet<Id>,
}

/// Merges covers with equal successor obligations and promises, then drops
/// covers subsumed by one with weaker obligations and a larger guard.
fn merge(covers: Vec<Cover>) -> Vec<Cover> {
    let mut merged: Vec<Cover> = Vec::new();
    let mut index: HashMap<(BTreeSet<Id>, BTreeSet<Id>), usize> = HashMap::new();
    for c in covers {
        if c.guard.is_false() {
            continue;
        }
        let key = (c.next.clone(), c.postponed.clone());
        match index.get(&key) {
            Some(&i) => merged[i].guard = merged[i].guard.or(&c.guard),
            None => {
                index.insert(key, merged.len());
                merged.push(c);
            }
        }
    }
    let keep: Vec<bool> = (0..merged.len())
        .map(|j| {
            let c2 = &merged[j];
            !merged.iter().enumerate().any(|(i, c1)| {
                i != j
                    && c1.next.is_subset(&c2.next)
                    && c1.postponed.is_subset(&c2.postponed)
                    && c2.guard.implies(&c1.guard)
                    && (c1.next.len() + c1.postponed.len() < c2.next.len() + c2.postponed.len() || i < j)
            })
        })
        .collect();
    merged.into_iter().zip(keep).filter_map(|(c, k)| k.then_some(c)).collect()
}

fn product(xs: &[Cover], ys: &[Cover]) -> Vec<Cover> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            let guard = x.guard.and(&y.guard);
            if guard.is_false() {
                continue;
            }
            out.push(Cover {
                guard,
                next: x.next.union(&y.next).copied().collect(),
                postponed: x.postponed.union(&y.postponed).copied().collect(),
            });
        }
    }
    merge(out)
}

fn unit(next: BTreeSet<Id>, postponed: BTreeSet<Id>) -> Vec<Cover> {
    vec![Cover { guard: Guard::tt(), next, postponed }]
}

/// Covers of a single obligation, memoized per node.
fn covers_of(arena: &Arena, f: Id, memo: &mut HashMap<Id, Vec<Cover>>) -> Vec<Cover> {
    if let Some(c) = memo.get(&f) {
        return c.clone();
    }
    let out = match &arena.nodes[f] {
        Node::True => unit(BTreeSet::new(), BTreeSet::new()),
        Node::False => Vec::new(),
        Node::Prop(g) => vec![Cover { guard: g.clone(), next: BTreeSet::new(), postponed: BTreeSet::new() }],
        Node::And(a, b) => {
            let (x, y) = (covers_of(arena, *a, memo), covers_of(arena, *b, memo));
            product(&x, &y)
        }
        Node::Or(a, b) => {
            let mut x = covers_of(arena, *a, memo);
            x.extend(covers_of(arena, *b, memo));
            merge(x)
        }
        Node::Next(a) => unit(BTreeSet::from([*a]), BTreeSet::new()),
        Node::Until(a, b) => {
            // fulfil now, or hold `a` and promise to fulfil later
            let mut now = covers_of(arena, *b, memo);
            let later = product(&covers_of(arena, *a, memo), &unit(BTreeSet::from([f]), BTreeSet::from([f])));
            now.extend(later);
            merge(now)
        }
        Node::Release(a, b) => {
            // b holds now, and either a releases it or the obligation continues
            let hold = covers_of(arena, *b, memo);
            let mut stop = product(&hold, &covers_of(arena, *a, memo));
            stop.extend(product(&hold, &unit(BTreeSet::from([f]), BTreeSet::new())));
            merge(stop)
        }
    };
    memo.insert(f, out.clone());
    out
}

fn expand(arena: &Arena, obligations: &BTreeSet<Id>, memo: &mut HashMap<Id, Vec<Cover>>) -> Vec<Cover> {
    obligations.iter().fold(unit(BTreeSet::new(), BTreeSet::new()), |acc, &f| product(&acc, &covers_of(arena, f, memo)))
}

/// Automaton over `track_order.len()` tracks accepting the zipped trace
/// tuples that satisfy `body`.
pub fn ltl_to_nba(body: &Ltl, track_order: &[String], aps: &[String]) -> Result<Nba, LtlError> {
    let mut arena = Arena { nodes: Vec::new(), index: HashMap::new(), tracks: track_order, aps };
    let root = arena.nnf(body, false)?;
    let untils: Vec<Id> = (0..arena.nodes.len()).filter(|&i| matches!(arena.nodes[i], Node::Until(..))).collect();
    let k = untils.len();
    let arity = track_order.len();
    let props = aps.len();

    let mut memo: HashMap<Id, Vec<Cover>> = HashMap::new();
    let mut sets: Vec<BTreeSet<Id>> = Vec::new();
    let mut set_index: HashMap<BTreeSet<Id>, usize> = HashMap::new();
    let mut covers: Vec<Vec<Cover>> = Vec::new();
    let mut state_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut states: Vec<(usize, usize)> = Vec::new();
    let mut queue = VecDeque::new();

    let mut set_id = |s: BTreeSet<Id>, sets: &mut Vec<BTreeSet<Id>>, covers: &mut Vec<Vec<Cover>>| -> usize {
        if let Some(&i) = set_index.get(&s) {
            return i;
        }
        covers.push(expand(&arena, &s, &mut memo));
        sets.push(s.clone());
        set_index.insert(s, sets.len() - 1);
        sets.len() - 1
    };
    let mut state_id = |key: (usize, usize), states: &mut Vec<(usize, usize)>, queue: &mut VecDeque<usize>| -> usize {
        *state_index.entry(key).or_insert_with(|| {
            states.push(key);
            queue.push_back(states.len() - 1);
            states.len() - 1
        })
    };

    let s0 = set_id(BTreeSet::from([root]), &mut sets, &mut covers);
    let init = state_id((s0, 0), &mut states, &mut queue);
    let mut edges: Vec<Vec<(Guard, usize)>> = Vec::new();
    while let Some(id) = queue.pop_front() {
        let (set, level) = states[id];
        let mut out = Vec::new();
        for ci in 0..covers[set].len() {
            let (guard, next, lvl) = {
                let c = &covers[set][ci];
                let mut l = if level == k { 0 } else { level };
                while l < k && !c.postponed.contains(&untils[l]) {
                    l += 1;
                }
                (c.guard.clone(), c.next.clone(), l)
            };
            let t = set_id(next, &mut sets, &mut covers);
            out.push((guard, state_id((t, lvl), &mut states, &mut queue)));
        }
        if edges.len() <= id {
            edges.resize(id + 1, Vec::new());
        }
        edges[id] = out;
    }
    edges.resize(states.len(), Vec::new());
    let accepting = states.iter().map(|&(_, l)| l == k).collect();
    Ok(Nba::from_parts(arity, props, vec![init], accepting, edges).reduce())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::LassoWord;
    use crate::formula::parse_ltl;

    fn nba(text: &str) -> Nba {
        ltl_to_nba(&parse_ltl(text).unwrap(), &["p".into(), "q".into()], &["a".into(), "b".into()]).unwrap()
    }

    #[test]
    fn true_is_universal() {
        let n = nba("true");
        assert!(Nba::universal(2, 2).language_included(&n).unwrap().is_none());
    }

    #[test]
    fn equality_of_tracks() {
        let n = nba("G (a@p <-> a@q)");
        let w = LassoWord::new(2, vec![vec![1, 1]], vec![vec![0, 0], vec![3, 1]]);
        assert!(n.accepts(&w).unwrap());
        let w = LassoWord::new(2, vec![], vec![vec![1, 0]]);
        assert!(!n.accepts(&w).unwrap());
    }

    #[test]
    fn until_needs_fulfilment() {
        let n = nba("a@p U b@p");
        assert!(n.accepts(&LassoWord::new(2, vec![vec![1, 0]], vec![vec![2, 0]])).unwrap());
        assert!(!n.accepts(&LassoWord::new(2, vec![], vec![vec![1, 0]])).unwrap());
    }

    #[test]
    fn safety_bodies_are_all_accepting() {
        assert!(nba("G (a@p -> X G !a@p)").all_accepting());
        assert!(nba("eq(p,q;a) W (a@p & X b@q)").all_accepting());
    }
}
