//! Explicit-state reference checker over short lasso traces.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{EngineError, Outcome, RunStats, Verdict};
use crate::automata::LassoWord;
use crate::formula::{FixConstraint, Formula, PrefixItem, Quant, SoQuant, SoRef};
use crate::ltl2nba::eval_ltl_on_lasso;
use crate::system::TransitionSystem;

#[derive(Clone, Debug)]
pub struct BruteConfig {
    /// Longest prefix-plus-cycle length of a trace in the universe.
    pub depth: usize,
    pub max_universe: usize,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig { depth: 3, max_universe: 50_000 }
    }
}

fn lassos(letters: usize, depth: usize, cap: usize) -> Option<Vec<LassoWord>> {
    let mut out = BTreeSet::new();
    for len in 1..=depth {
        let total = letters.checked_pow(len as u32)?;
        if total > cap * 4 {
            return None;
        }
        for idx in 0..total {
            let mut word = Vec::with_capacity(len);
            let mut x = idx;
            for _ in 0..len {
                word.push(vec![(x % letters) as u64]);
                x /= letters;
            }
            for p in 0..len {
                let w = LassoWord::new(1, word[..p].to_vec(), word[p..].to_vec()).canonical();
                out.insert((w.prefix().to_vec(), w.cycle().to_vec()));
            }
        }
        if out.len() > cap {
            return None;
        }
    }
    Some(out.into_iter().map(|(p, c)| LassoWord::new(1, p, c)).collect())
}

struct Ctx<'a> {
    f: &'a Formula,
    all: Vec<LassoWord>,
    system: Vec<LassoWord>,
    depth: usize,
}

type Sets = HashMap<String, Vec<LassoWord>>;

impl Ctx<'_> {
    fn domain<'s>(&'s self, d: &SoRef, sets: &'s Sets) -> &'s [LassoWord] {
        match d {
            SoRef::System => &self.system,
            SoRef::AllTraces => &self.all,
            SoRef::User(x) => sets.get(x).map(Vec::as_slice).unwrap_or(&[]),
        }
    }

    fn holds(&self, body: &crate::formula::Ltl, bound: &[(String, LassoWord)]) -> Result<bool, EngineError> {
        let names: Vec<String> = bound.iter().map(|(n, _)| n.clone()).collect();
        let words: Vec<LassoWord> = bound.iter().map(|(_, w)| w.clone()).collect();
        let w = if words.is_empty() { LassoWord::new(0, vec![], vec![vec![]]) } else { LassoWord::zip(&words) };
        eval_ltl_on_lasso(body, &w, &names, &self.f.aps).map_err(|e| EngineError::NotFinitelyCheckable(e.to_string()))
    }

    /// Adds every trace derivable by `rule` from `current`.
    fn fire(
        &self,
        rule: &FixConstraint,
        owner: &str,
        current: &[LassoWord],
        sets: &Sets,
        bound: &mut Vec<(String, LassoWord)>,
        k: usize,
        out: &mut HashSet<LassoWord>,
    ) -> Result<(), EngineError> {
        if k == rule.dotted.len() {
            if self.holds(&rule.step, bound)? {
                let base = bound.len() - rule.dotted.len();
                out.insert(bound[base + rule.target - 1].1.clone());
            }
            return Ok(());
        }
        let q = &rule.dotted[k];
        let dom: &[LassoWord] = match &q.domain {
            SoRef::User(x) if x == owner => current,
            d => self.domain(d, sets),
        };
        for w in dom {
            bound.push((q.var.clone(), w.clone()));
            self.fire(rule, owner, current, sets, bound, k + 1, out)?;
            bound.pop();
        }
        Ok(())
    }

    fn fixpoint(&self, so: &SoQuant, sets: &Sets, bound: &[(String, LassoWord)]) -> Result<Vec<LassoWord>, EngineError> {
        let mut current: HashSet<LassoWord> = HashSet::new();
        loop {
            let cur: Vec<LassoWord> = current.iter().cloned().collect();
            let mut next = current.clone();
            for rule in so.rules() {
                let mut b = bound.to_vec();
                self.fire(rule, &so.var, &cur, sets, &mut b, 0, &mut next)?;
            }
            if next.len() == current.len() {
                break;
            }
            current = next;
        }
        if let Some(w) = current.iter().find(|w| w.span() >= self.depth) {
            return Err(EngineError::NotFinitelyCheckable(format!(
                "{} contains a trace of maximal length {}",
                so.var,
                w.span()
            )));
        }
        Ok(current.into_iter().collect())
    }

    fn walk(&self, i: usize, sets: &mut Sets, bound: &mut Vec<(String, LassoWord)>) -> Result<bool, EngineError> {
        let Some(item) = self.f.prefix.get(i) else {
            return self.holds(&self.f.body, bound);
        };
        match item {
            PrefixItem::So(so) => {
                let x = self.fixpoint(so, sets, bound)?;
                let saved = sets.insert(so.var.clone(), x);
                let r = self.walk(i + 1, sets, bound);
                match saved {
                    Some(s) => sets.insert(so.var.clone(), s),
                    None => sets.remove(&so.var),
                };
                r
            }
            PrefixItem::Fo(q) => {
                let dom = self.domain(&q.domain, sets).to_vec();
                let want = q.quant == Quant::Exists;
                for w in dom {
                    bound.push((q.var.clone(), w));
                    let r = self.walk(i + 1, sets, bound);
                    bound.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                Ok(!want)
            }
        }
    }
}

/// Decides `f` with every trace quantifier ranging over lassos of length at
/// most `cfg.depth`. Refuses when a fixpoint reaches that length, since the
/// truncation may then have cut it short.
pub fn brute_force_check(ts: &TransitionSystem, f: &Formula, cfg: &BruteConfig) -> Result<Verdict, EngineError> {
    if ts.aps() != f.aps.as_slice() {
        return Err(EngineError::ApMismatch { system: ts.aps().to_vec(), formula: f.aps.clone() });
    }
    let letters = 1usize << f.aps.len();
    let all = lassos(letters, cfg.depth, cfg.max_universe)
        .ok_or_else(|| EngineError::NotFinitelyCheckable(format!("more than {} traces", cfg.max_universe)))?;
    let nba = ts.to_nba();
    let mut system = Vec::new();
    for w in &all {
        if nba.accepts(w)? {
            system.push(w.clone());
        }
    }
    let ctx = Ctx { f, all, system, depth: cfg.depth };
    let sat = ctx.walk(0, &mut HashMap::new(), &mut Vec::new())?;
    Ok(Verdict {
        outcome: if sat { Outcome::Sat } else { Outcome::Unsat },
        precision: 0,
        witness: None,
        stats: RunStats::default(),
        diagnostic: None,
    })
}
