//! Observation-table learning of safety invariants. Hypotheses are DFAs
//! over explicit zipped letters, read as "every prefix is accepted".

use std::collections::HashMap;

use super::{park_violation, FixSystem, Iteration};
use crate::automata::{AutomataError, LassoWord, Nba};
use crate::firstorder::place;
use crate::guard::{Guard, ZipLetter};

type Word = Vec<ZipLetter>;

/// Letter enumeration is only attempted up to this many bits per letter.
pub const MAX_LETTER_BITS: usize = 12;
const MAX_STATES: usize = 256;

/// Hypothesis checks granted per unit of budget.
pub fn rounds_for(budget: usize) -> usize {
    4 * (budget + 1)
}

/// Complete DFA; state 0 is initial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    arity: usize,
    props: usize,
}

impl Dfa {
    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    fn index(&self, l: &ZipLetter) -> usize {
        l.iter().enumerate().fold(0, |acc, (t, &v)| acc | ((v as usize) << (t * self.props)))
    }

    pub fn accepts_finite(&self, u: &[ZipLetter]) -> bool {
        let mut q = 0;
        for l in u {
            q = self.trans[q][self.index(l)];
        }
        self.accepting[q]
    }

    /// Length of the shortest prefix of `w` ending in a rejecting state.
    pub fn rejected_prefix(&self, w: &LassoWord) -> Option<usize> {
        let mut q = 0;
        let mut seen = vec![false; self.state_count() * w.span()];
        let mut pos = 0;
        for len in 0.. {
            if !self.accepting[q] {
                return Some(len);
            }
            if pos >= w.prefix().len() {
                let key = q * w.span() + pos;
                if seen[key] {
                    return None;
                }
                seen[key] = true;
            }
            q = self.trans[q][self.index(w.letter(pos))];
            pos = w.next_pos(pos);
        }
        unreachable!()
    }

    /// Safety automaton: the accepting states, all of them accepting.
    pub fn to_safety(&self) -> Nba {
        let keep: Vec<usize> = (0..self.state_count()).filter(|&q| self.accepting[q]).collect();
        let id: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let edges = keep
            .iter()
            .map(|&q| {
                let mut by_target: Vec<(usize, Guard)> = Vec::new();
                for (a, &t) in self.trans[q].iter().enumerate() {
                    let Some(&ti) = id.get(&t) else { continue };
                    let g = Guard::minterm(&letter_of(a, self.arity, self.props), self.arity, self.props);
                    match by_target.iter_mut().find(|(x, _)| *x == ti) {
                        Some((_, acc)) => *acc = acc.or(&g),
                        None => by_target.push((ti, g)),
                    }
                }
                by_target.into_iter().map(|(t, g)| (g, t)).collect()
            })
            .collect();
        let initial = if self.accepting[0] { vec![0] } else { vec![] };
        Nba::from_parts(self.arity, self.props, initial, vec![true; keep.len()], edges).trim()
    }
}

fn letter_of(idx: usize, arity: usize, props: usize) -> ZipLetter {
    let mask = (1u64 << props) - 1;
    (0..arity).map(|t| ((idx >> (t * props)) as u64) & mask).collect()
}

/// Outcome of feeding a trace reported by a failed chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feed {
    /// The trace is reachable: it really is in the set.
    Genuine,
    /// A prefix was spurious and the table grew.
    Refined,
    /// Nothing to do.
    NoOp,
}

/// Prefix-closed row set `S`, suffix-closed column set `E`; rows in `S` are
/// pairwise distinct, so the table stays consistent.
#[derive(Clone, Debug)]
pub struct Learner {
    arity: usize,
    props: usize,
    letters: usize,
    s: Vec<Word>,
    e: Vec<Word>,
    cache: HashMap<Word, bool>,
    depth: usize,
    hyp: Option<Dfa>,
}

impl Learner {
    /// `None` when the zipped alphabet is too large to enumerate.
    pub fn new(arity: usize, props: usize) -> Option<Learner> {
        let bits = arity * props;
        if bits > MAX_LETTER_BITS {
            return None;
        }
        Some(Learner {
            arity,
            props,
            letters: 1 << bits,
            s: vec![vec![]],
            e: vec![vec![]],
            cache: HashMap::new(),
            depth: 2,
            hyp: None,
        })
    }

    /// Membership depth beyond the query length.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn set_depth(&mut self, d: usize) {
        if d != self.depth {
            self.depth = d;
            self.cache.clear();
        }
    }

    pub fn hypothesis_dfa(&self) -> Option<&Dfa> {
        self.hyp.as_ref()
    }

    /// Is `u` a prefix of an iterate at depth `|u| + depth`?
    pub fn member(&mut self, it: &mut Iteration, u: &[ZipLetter]) -> Result<bool, AutomataError> {
        if let Some(&b) = self.cache.get(u) {
            return Ok(b);
        }
        let b = it.prefix_member(u, u.len() + self.depth)?;
        self.cache.insert(u.to_vec(), b);
        Ok(b)
    }

    fn row(&mut self, it: &mut Iteration, s: &[ZipLetter]) -> Result<Vec<bool>, AutomataError> {
        let mut r = Vec::with_capacity(self.e.len());
        for i in 0..self.e.len() {
            let mut w = s.to_vec();
            w.extend(self.e[i].iter().cloned());
            r.push(self.member(it, &w)?);
        }
        Ok(r)
    }

    /// Closes the table and returns its hypothesis; `None` once it grows
    /// past the state cap.
    pub fn hypothesis(&mut self, it: &mut Iteration) -> Result<Option<Dfa>, AutomataError> {
        let mut rows: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        // rows of S are distinct by construction; new ones are appended
        let mut s_rows: Vec<Vec<bool>> = Vec::new();
        while i < self.s.len() {
            let s = self.s[i].clone();
            let r = self.row(it, &s)?;
            rows.entry(r.clone()).or_insert(i);
            s_rows.push(r);
            i += 1;
        }
        let mut q = 0;
        while q < self.s.len() {
            if self.s.len() > MAX_STATES {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(self.letters);
            for a in 0..self.letters {
                let mut w = self.s[q].clone();
                w.push(letter_of(a, self.arity, self.props));
                let r = self.row(it, &w)?;
                let target = match rows.get(&r) {
                    Some(&t) => t,
                    None => {
                        let t = self.s.len();
                        self.s.push(w);
                        rows.insert(r.clone(), t);
                        s_rows.push(r);
                        t
                    }
                };
                out.push(target);
            }
            trans.push(out);
            q += 1;
        }
        // states are indices into S, distinct rows each
        let accepting = s_rows.iter().map(|r| r[0]).collect();
        let dfa = Dfa { trans, accepting, arity: self.arity, props: self.props };
        self.hyp = Some(dfa.clone());
        Ok(Some(dfa))
    }

    /// Adds every suffix of `u` as a column.
    pub fn add_counterexample(&mut self, u: &[ZipLetter]) {
        for k in 0..=u.len() {
            let suf = u[k..].to_vec();
            if !self.e.contains(&suf) {
                self.e.push(suf);
            }
        }
    }

    /// Alternates hypotheses and inductivity checks against `upper` for up to
    /// `rounds` checks. Returns an automaton passing both checks.
    pub fn learn(
        &mut self,
        it: &mut Iteration,
        upper: &FixSystem,
        depth: usize,
        rounds: usize,
        budget: usize,
    ) -> Result<Option<Nba>, AutomataError> {
        self.set_depth(depth.max(self.depth));
        let max_depth = self.depth + rounds;
        for _ in 0..rounds {
            let Some(h) = self.hypothesis(it)? else { return Ok(None) };
            let b = h.to_safety();
            let w = match park_violation(upper, &b, budget) {
                Ok(None) => return Ok(Some(b)),
                Ok(Some(w)) => w,
                Err(AutomataError::BudgetExceeded { .. }) => return Ok(None),
                Err(e) => return Err(e),
            };
            let len = h.rejected_prefix(&w).expect("violation leaves the hypothesis");
            let u = w.take(len);
            if self.member(it, &u)? {
                self.add_counterexample(&u);
                continue;
            }
            if let Some(v) = self.premise_counterexample(it, upper, &h, &b, budget)? {
                self.add_counterexample(&v);
                continue;
            }
            if self.depth >= max_depth {
                return Ok(None);
            }
            self.set_depth(self.depth + 1);
        }
        Ok(None)
    }

    /// A prefix of some premise trace that the hypothesis accepts but
    /// membership rejects.
    fn premise_counterexample(
        &mut self,
        it: &mut Iteration,
        upper: &FixSystem,
        h: &Dfa,
        b: &Nba,
        budget: usize,
    ) -> Result<Option<Word>, AutomataError> {
        let bad = match b.complement_with_budget(budget) {
            Ok(x) => x,
            Err(AutomataError::BudgetExceeded { .. }) => return Ok(None),
            Err(e) => return Err(e),
        };
        let outer = upper.arity() - 1;
        for r in upper.rules().iter().filter(|r| !r.is_seed()) {
            let full = r.full(b)?.intersect(&place(&bad, r.arity(), r.output_track())?)?;
            let Some(z) = full.is_empty() else { continue };
            for t in r.self_tracks() {
                let mut tracks: Vec<usize> = (0..outer).collect();
                tracks.push(t);
                let premise = z.select(&tracks);
                for len in 0..=premise.span() + h.state_count() {
                    let v = premise.take(len);
                    if !h.accepts_finite(&v) {
                        break;
                    }
                    if !self.member(it, &v)? {
                        return Ok(Some(v));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Checks a trace claimed to be in the current hypothesis but outside
    /// the fixpoint.
    pub fn feed_counterexample(&mut self, it: &mut Iteration, w: &LassoWord) -> Result<Feed, AutomataError> {
        if it.member(w, w.span() + self.depth)? {
            return Ok(Feed::Genuine);
        }
        let Some(h) = self.hyp.clone() else { return Ok(Feed::NoOp) };
        if h.rejected_prefix(w).is_some() {
            return Ok(Feed::NoOp);
        }
        for len in 0..=w.span() + h.state_count() {
            let u = w.take(len);
            if !self.member(it, &u)? {
                self.add_counterexample(&u);
                return Ok(Feed::Refined);
            }
        }
        Ok(Feed::NoOp)
    }
}
