//! Büchi automata over zipped multi-track alphabets.

mod complement;
pub mod graph;
mod hoa;
mod lasso;
mod reduce;

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::guard::{Guard, Var, ZipLetter, MAX_TRACKS};

pub use lasso::LassoWord;

pub type StateId = usize;

/// Default cap on the number of states any single construction may create.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomataError {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("proposition count mismatch: {left} vs {right}")]
    PropsMismatch { left: usize, right: usize },
    #[error("track {track} out of range for arity {arity}")]
    TrackOutOfRange { track: usize, arity: usize },
    #[error("arity {0} exceeds the track limit")]
    TooManyTracks(usize),
    #[error("state budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
}

/// A nondeterministic Büchi automaton over `arity` tracks with `props`
/// propositions per track.
///
/// Edges are kept normalized: per source, at most one edge per target,
/// no `false` guards, sorted by target.
#[derive(Clone, Debug)]
pub struct Nba {
    arity: usize,
    props: usize,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    edges: Vec<Vec<(Guard, StateId)>>,
}

fn normalize(out: Vec<(Guard, StateId)>) -> Vec<(Guard, StateId)> {
    let mut merged: BTreeMap<StateId, Guard> = BTreeMap::new();
    for (g, t) in out {
        if g.is_false() {
            continue;
        }
        merged.entry(t).and_modify(|h| *h = h.or(&g)).or_insert(g);
    }
    merged.into_iter().map(|(t, g)| (g, t)).collect()
}

impl Nba {
    /// Builds an automaton from raw parts; edges are normalized.
    pub fn from_parts(
        arity: usize,
        props: usize,
        initial: Vec<StateId>,
        accepting: Vec<bool>,
        edges: Vec<Vec<(Guard, StateId)>>,
    ) -> Self {
        assert!(arity <= MAX_TRACKS as usize, "too many tracks");
        assert_eq!(accepting.len(), edges.len(), "accepting/edges length mismatch");
        let n = edges.len();
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        assert!(initial.iter().all(|&s| s < n), "initial state out of range");
        let edges: Vec<_> = edges.into_iter().map(normalize).collect();
        assert!(edges.iter().flatten().all(|&(_, t)| t < n), "edge target out of range");
        Nba { arity, props, initial, accepting, edges }
    }

    /// Accepts nothing.
    pub fn empty(arity: usize, props: usize) -> Self {
        Nba::from_parts(arity, props, vec![], vec![], vec![])
    }

    /// Accepts every word.
    pub fn universal(arity: usize, props: usize) -> Self {
        Nba::from_parts(arity, props, vec![0], vec![true], vec![vec![(Guard::tt(), 0)]])
    }

    /// Accepts every word whose letters all satisfy `g`.
    pub fn always(arity: usize, props: usize, g: Guard) -> Self {
        Nba::from_parts(arity, props, vec![0], vec![true], vec![vec![(g, 0)]])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn props(&self) -> usize {
        self.props
    }

    pub fn state_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn edges(&self, s: StateId) -> &[(Guard, StateId)] {
        &self.edges[s]
    }

    pub fn all_accepting(&self) -> bool {
        self.accepting.iter().all(|&a| a)
    }

    fn succ_list(&self, s: StateId) -> Vec<StateId> {
        self.edges[s].iter().map(|&(_, t)| t).collect()
    }

    fn check_compatible(&self, other: &Nba) -> Result<(), AutomataError> {
        if self.arity != other.arity {
            return Err(AutomataError::ArityMismatch { left: self.arity, right: other.arity });
        }
        if self.props != other.props {
            return Err(AutomataError::PropsMismatch { left: self.props, right: other.props });
        }
        Ok(())
    }

    /// Whether there is at most one initial state and the guards leaving each
    /// state are pairwise disjoint.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        self.edges.iter().all(|out| {
            out.iter().enumerate().all(|(i, (g, _))| out[i + 1..].iter().all(|(h, _)| !g.intersects(h)))
        })
    }

    /// Restricts to states reachable from an initial state and able to reach
    /// an accepting cycle. Renumbers in BFS order from the initial states.
    pub fn trim(&self) -> Nba {
        let n = self.state_count();
        let succ = |s: usize| self.succ_list(s);
        let reach = graph::reachable(n, &self.initial, &succ);
        let prod = graph::productive(n, &|s| self.accepting[s], &succ);
        let keep: Vec<bool> = (0..n).map(|s| reach[s] && prod[s]).collect();
        self.restrict_bfs(&keep)
    }

    /// Keeps only states in `keep`, renumbered in BFS order.
    fn restrict_bfs(&self, keep: &[bool]) -> Nba {
        let mut id: Vec<Option<usize>> = vec![None; self.state_count()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &s in &self.initial {
            if keep[s] && id[s].is_none() {
                id[s] = Some(order.len());
                order.push(s);
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &(_, t) in &self.edges[s] {
                if keep[t] && id[t].is_none() {
                    id[t] = Some(order.len());
                    order.push(t);
                    queue.push_back(t);
                }
            }
        }
        let initial = self.initial.iter().filter_map(|&s| id[s]).collect();
        let accepting = order.iter().map(|&s| self.accepting[s]).collect();
        let edges = order
            .iter()
            .map(|&s| self.edges[s].iter().filter_map(|(g, t)| id[*t].map(|nt| (g.clone(), nt))).collect())
            .collect();
        Nba::from_parts(self.arity, self.props, initial, accepting, edges)
    }

    /// Language intersection.
    pub fn intersect(&self, other: &Nba) -> Result<Nba, AutomataError> {
        self.check_compatible(other)?;
        let a = self.trim();
        let b = other.trim();
        let (fa, fb) = (a.all_accepting(), b.all_accepting());
        // phase 0 waits for an accepting state of `a`, phase 1 for one of `b`
        let phased = !fa && !fb;
        let mut index: HashMap<(usize, usize, u8), usize> = HashMap::new();
        let mut states: Vec<(usize, usize, u8)> = Vec::new();
        let mut queue = VecDeque::new();
        let mut intern = |key: (usize, usize, u8), states: &mut Vec<_>, queue: &mut VecDeque<usize>| -> usize {
            *index.entry(key).or_insert_with(|| {
                states.push(key);
                queue.push_back(states.len() - 1);
                states.len() - 1
            })
        };
        let mut initial = Vec::new();
        for &p in &a.initial {
            for &q in &b.initial {
                initial.push(intern((p, q, 0), &mut states, &mut queue));
            }
        }
        let mut edges: Vec<Vec<(Guard, usize)>> = Vec::new();
        while let Some(id) = queue.pop_front() {
            let (p, q, phase) = states[id];
            let next_phase = if !phased {
                0
            } else if phase == 0 {
                u8::from(a.accepting[p])
            } else {
                u8::from(!b.accepting[q])
            };
            let mut out = Vec::new();
            for (g, p2) in &a.edges[p] {
                for (h, q2) in &b.edges[q] {
                    let gh = g.and(h);
                    if !gh.is_false() {
                        out.push((gh, intern((*p2, *q2, next_phase), &mut states, &mut queue)));
                    }
                }
            }
            if edges.len() <= id {
                edges.resize(id + 1, Vec::new());
            }
            edges[id] = out;
            if states.len() > DEFAULT_STATE_BUDGET {
                return Err(AutomataError::BudgetExceeded { limit: DEFAULT_STATE_BUDGET });
            }
        }
        edges.resize(states.len(), Vec::new());
        let accepting = states
            .iter()
            .map(|&(p, q, phase)| match (fa, fb) {
                (true, true) => true,
                (true, false) => b.accepting[q],
                (false, true) => a.accepting[p],
                (false, false) => phase == 1 && b.accepting[q],
            })
            .collect();
        Ok(Nba::from_parts(a.arity, a.props, initial, accepting, edges).trim())
    }

    /// Language union (disjoint union of state spaces).
    pub fn union(&self, other: &Nba) -> Result<Nba, AutomataError> {
        self.check_compatible(other)?;
        let off = self.state_count();
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|s| s + off));
        let mut accepting = self.accepting.clone();
        accepting.extend_from_slice(&other.accepting);
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|out| out.iter().map(|(g, t)| (g.clone(), t + off)).collect()));
        Ok(Nba::from_parts(self.arity, self.props, initial, accepting, edges))
    }

    /// Existentially projects away one track.
    pub fn project_exists(&self, track: usize) -> Result<Nba, AutomataError> {
        if track >= self.arity {
            return Err(AutomataError::TrackOutOfRange { track, arity: self.arity });
        }
        let edges = self
            .edges
            .iter()
            .map(|out| {
                out.iter()
                    .map(|(g, t)| {
                        let h = g.exists(|v: Var| v.track() == track);
                        (h.remap_tracks(|x| if x > track { x - 1 } else { x }), *t)
                    })
                    .collect()
            })
            .collect();
        Ok(Nba::from_parts(self.arity - 1, self.props, self.initial.clone(), self.accepting.clone(), edges))
    }

    /// Projects away every track for which `drop` is true.
    pub fn project_tracks(&self, drop: &[bool]) -> Result<Nba, AutomataError> {
        if drop.len() != self.arity {
            return Err(AutomataError::ArityMismatch { left: drop.len(), right: self.arity });
        }
        let mut map = vec![0; self.arity];
        let mut next = 0;
        for t in 0..self.arity {
            map[t] = next;
            if !drop[t] {
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .map(|out| {
                out.iter()
                    .map(|(g, t)| (g.exists(|v: Var| drop[v.track()]).remap_tracks(|x| map[x]), *t))
                    .collect()
            })
            .collect();
        Ok(Nba::from_parts(next, self.props, self.initial.clone(), self.accepting.clone(), edges))
    }

    /// Places track `i` of `self` on track `map[i]` of an automaton with
    /// `target_arity` tracks; the remaining tracks are unconstrained.
    /// `map` must be strictly increasing.
    pub fn embed(&self, target_arity: usize, map: &[usize]) -> Result<Nba, AutomataError> {
        if map.len() != self.arity {
            return Err(AutomataError::ArityMismatch { left: map.len(), right: self.arity });
        }
        if target_arity > MAX_TRACKS as usize {
            return Err(AutomataError::TooManyTracks(target_arity));
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= target_arity) {
            return Err(AutomataError::TrackOutOfRange { track: bad, arity: target_arity });
        }
        assert!(map.windows(2).all(|w| w[0] < w[1]), "embedding must be monotone");
        let edges = self
            .edges
            .iter()
            .map(|out| out.iter().map(|(g, t)| (g.remap_tracks(|x| map[x]), *t)).collect())
            .collect();
        Ok(Nba::from_parts(target_arity, self.props, self.initial.clone(), self.accepting.clone(), edges))
    }

    /// Tracks `0..j` stay in place and the last track moves to the last
    /// track of the result.
    pub fn lift(&self, target_arity: usize) -> Result<Nba, AutomataError> {
        if self.arity == 0 || target_arity < self.arity {
            return Err(AutomataError::ArityMismatch { left: self.arity, right: target_arity });
        }
        let j = self.arity - 1;
        let mut map: Vec<usize> = (0..j).collect();
        map.push(target_arity - 1);
        self.embed(target_arity, &map)
    }

    /// Restricts every edge guard with `g`.
    pub fn restrict(&self, g: &Guard) -> Nba {
        let edges = self.edges.iter().map(|out| out.iter().map(|(h, t)| (h.and(g), *t)).collect()).collect();
        Nba::from_parts(self.arity, self.props, self.initial.clone(), self.accepting.clone(), edges)
    }

    /// `None` if the language is empty, otherwise an accepted lasso word.
    pub fn is_empty(&self) -> Option<LassoWord> {
        let n = self.state_count();
        let succ = |s: usize| self.succ_list(s);
        let comp = graph::scc(n, &succ);
        let mut comp_size: HashMap<usize, usize> = HashMap::new();
        for &c in &comp {
            *comp_size.entry(c).or_default() += 1;
        }
        let good = |s: usize| {
            self.accepting[s] && (comp_size[&comp[s]] > 1 || self.edges[s].iter().any(|&(_, t)| t == s))
        };
        let stem = graph::bfs_path(&self.initial, &good, &succ, n)?;
        let target = *stem.last().expect("nonempty path");
        // cycle back to `target` inside its component
        let c = comp[target];
        let in_comp = |s: usize| -> Vec<usize> { self.succ_list(s).into_iter().filter(|&t| comp[t] == c).collect() };
        let mut cycle_states = vec![target];
        if !self.edges[target].iter().any(|&(_, t)| t == target) {
            let starts = in_comp(target);
            let path = graph::bfs_path(&starts, &|s| s == target, &in_comp, n).expect("cycle inside scc");
            cycle_states.extend(path);
        } else {
            cycle_states.push(target);
        }
        let letter = |s: usize, t: usize| -> ZipLetter {
            let g = self.edges[s].iter().find(|&&(_, x)| x == t).map(|(g, _)| g).expect("edge exists");
            g.pick(self.arity).expect("normalized guards are satisfiable")
        };
        let prefix: Vec<ZipLetter> = stem.windows(2).map(|w| letter(w[0], w[1])).collect();
        let cycle: Vec<ZipLetter> = cycle_states.windows(2).map(|w| letter(w[0], w[1])).collect();
        Some(LassoWord::new(self.arity, prefix, cycle))
    }

    /// Exact membership of an ultimately periodic word.
    pub fn accepts(&self, w: &LassoWord) -> Result<bool, AutomataError> {
        if w.arity() != self.arity {
            return Err(AutomataError::ArityMismatch { left: w.arity(), right: self.arity });
        }
        let span = w.span();
        let n = self.state_count() * span;
        let node = |s: usize, i: usize| s * span + i;
        let succ = |v: usize| -> Vec<usize> {
            let (s, i) = (v / span, v % span);
            let l = w.letter(i);
            let j = w.next_pos(i);
            self.edges[s].iter().filter(|(g, _)| g.eval(l)).map(|&(_, t)| node(t, j)).collect()
        };
        let starts: Vec<usize> = self.initial.iter().map(|&s| node(s, 0)).collect();
        let reach = graph::reachable(n, &starts, &succ);
        let prod = graph::productive(n, &|v| self.accepting[v / span] && reach[v], &|v| {
            if reach[v] {
                succ(v)
            } else {
                Vec::new()
            }
        });
        Ok(starts.iter().any(|&v| prod[v]))
    }

    /// `None` if `L(self) ⊆ L(other)`, otherwise a word in the difference.
    pub fn language_included(&self, other: &Nba) -> Result<Option<LassoWord>, AutomataError> {
        self.included_with_budget(other, DEFAULT_STATE_BUDGET)
    }

    pub fn included_with_budget(&self, other: &Nba, budget: usize) -> Result<Option<LassoWord>, AutomataError> {
        self.check_compatible(other)?;
        let a = self.trim();
        if a.state_count() == 0 {
            return Ok(None);
        }
        let nb = other.complement_with_budget(budget)?;
        Ok(a.intersect(&nb)?.is_empty())
    }

    /// Complement with the default budget.
    pub fn complement(&self) -> Result<Nba, AutomataError> {
        self.complement_with_budget(DEFAULT_STATE_BUDGET)
    }

    pub fn complement_with_budget(&self, budget: usize) -> Result<Nba, AutomataError> {
        complement::complement(self, budget)
    }

    /// Trimming plus quotienting; see [`reduce`](Self::reduce_with_budget).
    pub fn reduce(&self) -> Nba {
        reduce::reduce(self, 4096)
    }

    /// Like [`reduce`](Self::reduce) with an explicit determinization cap.
    pub fn reduce_with_budget(&self, det_cap: usize) -> Nba {
        reduce::reduce(self, det_cap)
    }

    /// Renders the automaton in a HOA-like text format.
    pub fn to_hoa(&self, prop_names: &[String]) -> String {
        hoa::to_hoa(self, prop_names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a0() -> Guard {
        Guard::lit(Var::new(0, 0), true)
    }

    /// Words with `a` at position `k`.
    fn a_at(k: usize) -> Nba {
        let mut edges = Vec::new();
        for i in 0..k {
            edges.push(vec![(Guard::tt(), i + 1)]);
        }
        edges.push(vec![(a0(), k + 1)]);
        edges.push(vec![(Guard::tt(), k + 1)]);
        let mut acc = vec![false; k + 2];
        acc[k + 1] = true;
        Nba::from_parts(1, 1, vec![0], acc, edges)
    }

    #[test]
    fn intersection_of_positions() {
        let both = a_at(0).intersect(&a_at(1)).unwrap();
        assert!(both.accepts(&LassoWord::single(&[1, 1], &[0])).unwrap());
        assert!(!both.accepts(&LassoWord::single(&[1, 0], &[0])).unwrap());
    }

    #[test]
    fn union_of_constants() {
        let ga = Nba::always(1, 1, a0());
        let gn = Nba::always(1, 1, a0().not());
        let u = ga.union(&gn).unwrap();
        assert!(u.accepts(&LassoWord::single(&[], &[1])).unwrap());
        assert!(u.accepts(&LassoWord::single(&[], &[0])).unwrap());
        assert!(!u.accepts(&LassoWord::single(&[], &[1, 0])).unwrap());
    }

    #[test]
    fn emptiness_witness_replays() {
        let u = Nba::universal(1, 1);
        let w = u.is_empty().unwrap();
        assert!(u.accepts(&w).unwrap());
        assert!(Nba::empty(1, 1).is_empty().is_none());
        let x = a_at(2);
        let w = x.is_empty().unwrap();
        assert!(x.accepts(&w).unwrap());
    }

    #[test]
    fn projection_of_equal_tracks_is_universal() {
        let mut eq = Guard::tt();
        eq = eq.and(&Guard::lit(Var::new(0, 0), true).and(&Guard::lit(Var::new(0, 1), true)).or(
            &Guard::lit(Var::new(0, 0), false).and(&Guard::lit(Var::new(0, 1), false)),
        ));
        let a = Nba::always(2, 1, eq);
        let p = a.project_exists(1).unwrap();
        assert!(p.accepts(&LassoWord::single(&[1], &[0, 1])).unwrap());
        assert!(p.language_included(&Nba::universal(1, 1)).unwrap().is_none());
        assert!(Nba::universal(1, 1).language_included(&p).unwrap().is_none());
        assert!(Nba::empty(2, 1).project_exists(0).unwrap().is_empty().is_none());
    }

    #[test]
    fn lift_ignores_middle_tracks() {
        let ga = Nba::always(1, 1, a0());
        let l = ga.lift(2).unwrap();
        let w = LassoWord::new(2, vec![], vec![vec![0, 1], vec![1, 1]]);
        assert!(l.accepts(&w).unwrap());
        let w = LassoWord::new(2, vec![], vec![vec![1, 0]]);
        assert!(!l.accepts(&w).unwrap());
    }

    #[test]
    fn inclusion_counterexample() {
        let ga = Nba::always(1, 1, a0());
        let w = Nba::universal(1, 1).language_included(&ga).unwrap().unwrap();
        assert!(!ga.accepts(&w).unwrap());
        assert!(ga.language_included(&ga).unwrap().is_none());
        assert!(Nba::empty(1, 1).language_included(&ga).unwrap().is_none());
    }

    #[test]
    fn arity_checked() {
        assert!(Nba::universal(1, 1).intersect(&Nba::universal(2, 1)).is_err());
        assert!(Nba::universal(1, 1).project_exists(1).is_err());
    }
}
