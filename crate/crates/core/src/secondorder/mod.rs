//! Under- and overapproximations of least-fixpoint set variables.

mod learner;

use thiserror::Error;

use crate::automata::{AutomataError, LassoWord, Nba};
use crate::guard::ZipLetter;
use crate::firstorder::{is_trivially_universal, place, Bound, Env, FirstOrderError};
use crate::formula::{FixConstraint, Formula, SoQuant, SoRef};
use crate::ltl2nba::{ltl_to_nba, LtlError};

pub use learner::{Dfa, Feed, Learner};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SecondOrderError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Ltl(#[from] LtlError),
    #[error(transparent)]
    FirstOrder(#[from] FirstOrderError),
    #[error("unknown second-order variable `{0}`")]
    UnknownVar(String),
}

/// One constraint compiled over tracks `(outer.., dotted..)`: everything
/// except the self-referencing domains is already intersected in.
#[derive(Clone, Debug)]
pub struct StepAutomaton {
    base: Nba,
    outer: usize,
    dotted: usize,
    self_slots: Vec<usize>,
    target: usize,
}

impl StepAutomaton {
    pub fn arity(&self) -> usize {
        self.outer + self.dotted
    }

    /// Track of the conclusion trace.
    pub fn output_track(&self) -> usize {
        self.outer + self.target
    }

    /// Tracks of dotted variables ranging over the variable itself.
    pub fn self_tracks(&self) -> impl Iterator<Item = usize> + '_ {
        self.self_slots.iter().map(move |&i| self.outer + i)
    }

    pub fn is_seed(&self) -> bool {
        self.self_slots.is_empty()
    }

    /// The product before projection, with `current` on every
    /// self-referencing track.
    pub fn full(&self, current: &Nba) -> Result<Nba, AutomataError> {
        let mut a = self.base.clone();
        for t in self.self_tracks() {
            if current.state_count() == 0 {
                return Ok(Nba::empty(self.arity(), self.base.props()));
            }
            a = a.intersect(&place(current, self.arity(), t)?)?;
        }
        Ok(a)
    }

    /// Conclusion traces: `zip(outer.., t)` for every `t` the constraint
    /// forces into the set given `current`.
    pub fn apply(&self, current: &Nba) -> Result<Nba, AutomataError> {
        let full = self.full(current)?;
        let drop: Vec<bool> = (0..self.arity()).map(|t| t >= self.outer && t != self.output_track()).collect();
        Ok(full.project_tracks(&drop)?.reduce())
    }
}

/// Compiles one constraint. Dotted domains other than `owner` read the
/// `bound` side of their binding.
pub fn compile_step(
    c: &FixConstraint,
    owner: &str,
    outer_vars: &[String],
    ctx: Option<&Nba>,
    env: &Env,
    aps: &[String],
    bound: Bound,
) -> Result<StepAutomaton, SecondOrderError> {
    let l = outer_vars.len();
    let n = c.dotted.len();
    let mut tracks = outer_vars.to_vec();
    tracks.extend(c.dotted.iter().map(|q| q.var.clone()));
    let mut base = ltl_to_nba(&c.step, &tracks, aps)?;
    if let Some(ctx) = ctx {
        base = base.intersect(&ctx.embed(l + n, &(0..l).collect::<Vec<_>>())?)?;
    }
    let mut self_slots = Vec::new();
    for (i, q) in c.dotted.iter().enumerate() {
        if q.domain == SoRef::User(owner.to_string()) {
            self_slots.push(i);
            continue;
        }
        let d = env.get(&q.domain)?.bound(bound);
        if !is_trivially_universal(d) {
            base = base.intersect(&place(d, l + n, l + i)?)?;
        }
    }
    Ok(StepAutomaton { base: base.reduce(), outer: l, dotted: n, self_slots, target: c.target - 1 })
}

/// All constraints of one set variable, plus the context its dependency
/// tracks range over.
#[derive(Clone, Debug)]
pub struct FixSystem {
    var: String,
    outer: usize,
    props: usize,
    ctx: Option<Nba>,
    rules: Vec<StepAutomaton>,
    seed: Nba,
    depends_on_sets: bool,
}

impl FixSystem {
    pub fn new(f: &Formula, so: &SoQuant, env: &Env, bound: Bound) -> Result<FixSystem, SecondOrderError> {
        let outer = f.bound_before(&so.var).ok_or_else(|| SecondOrderError::UnknownVar(so.var.clone()))?;
        let fo = f.fo_quants();
        let outer_vars: Vec<String> = fo[..outer].iter().map(|q| q.var.clone()).collect();
        let props = f.aps.len();
        let mut depends_on_sets = false;
        // dependency traces only ever range over their own domains
        let mut ctx: Option<Nba> = None;
        for (i, q) in fo[..outer].iter().enumerate() {
            depends_on_sets |= matches!(q.domain, SoRef::User(_));
            let d = env.get(&q.domain)?.upper.clone();
            if is_trivially_universal(&d) {
                continue;
            }
            let placed = place(&d, outer, i)?;
            ctx = Some(match ctx {
                None => placed,
                Some(c) => c.intersect(&placed)?.reduce(),
            });
        }
        let mut rules = Vec::new();
        for c in so.rules() {
            depends_on_sets |= c.dotted.iter().any(|q| matches!(&q.domain, SoRef::User(n) if *n != so.var));
            rules.push(compile_step(c, &so.var, &outer_vars, ctx.as_ref(), env, &f.aps, bound)?);
        }
        let mut seed = Nba::empty(outer + 1, props);
        for r in rules.iter().filter(|r| r.is_seed()) {
            seed = seed.union(&r.apply(&seed)?)?;
        }
        Ok(FixSystem { var: so.var.clone(), outer, props, ctx, rules, seed: seed.reduce(), depends_on_sets })
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    /// Arity of the set's automata: dependencies plus the member track.
    pub fn arity(&self) -> usize {
        self.outer + 1
    }

    pub fn props(&self) -> usize {
        self.props
    }

    pub fn rules(&self) -> &[StepAutomaton] {
        &self.rules
    }

    pub fn context(&self) -> Option<&Nba> {
        self.ctx.as_ref()
    }

    /// Whether the constraints read other set variables, whose
    /// approximations change between rounds.
    pub fn depends_on_sets(&self) -> bool {
        self.depends_on_sets
    }

    /// Restricts dependency tracks to the context.
    pub fn restrict(&self, a: &Nba) -> Result<Nba, AutomataError> {
        match &self.ctx {
            None => Ok(a.clone()),
            Some(c) => Ok(a.intersect(&c.embed(self.arity(), &(0..self.outer).collect::<Vec<_>>())?)?.reduce()),
        }
    }

    /// One application of every constraint to `current`.
    pub fn step(&self, current: &Nba) -> Result<Nba, AutomataError> {
        let mut out = self.seed.clone();
        if current.state_count() == 0 {
            return Ok(out);
        }
        for r in self.rules.iter().filter(|r| !r.is_seed()) {
            out = out.union(&r.apply(current)?)?;
        }
        Ok(out.reduce())
    }
}

/// Single-constraint step: everything `c` forces into the set given
/// `current`, over tracks `(outer.., member)`.
pub fn build_step(
    c: &FixConstraint,
    owner: &str,
    outer_vars: &[String],
    env: &Env,
    current: &Nba,
    aps: &[String],
) -> Result<Nba, SecondOrderError> {
    let s = compile_step(c, owner, outer_vars, None, env, aps, Bound::Lower)?;
    Ok(s.apply(current)?)
}

/// The iterates `Ĉ_0 = ∅`, `Ĉ_{m+1} = Ĉ_m ∪ step(Ĉ_m)`, computed on demand.
#[derive(Clone, Debug)]
pub struct Iteration {
    sys: FixSystem,
    iterates: Vec<Nba>,
    fixed_at: Option<usize>,
    budget: usize,
}

impl Iteration {
    pub fn new(sys: FixSystem, budget: usize) -> Self {
        let empty = Nba::empty(sys.arity(), sys.props());
        Iteration { sys, iterates: vec![empty], fixed_at: None, budget }
    }

    pub fn system(&self) -> &FixSystem {
        &self.sys
    }

    /// `Ĉ_m`.
    pub fn get(&mut self, m: usize) -> Result<&Nba, AutomataError> {
        if let Some(k) = self.fixed_at {
            if m >= k {
                return Ok(&self.iterates[k]);
            }
        }
        while self.iterates.len() <= m {
            let last = self.iterates.last().expect("Ĉ_0 is always present");
            let next = last.union(&self.sys.step(last)?)?.reduce();
            self.iterates.push(next);
        }
        Ok(&self.iterates[m])
    }

    /// Whether `Ĉ_m ⊆ Ĉ_{m-1}`, i.e. `Ĉ_{m-1}` is already the fixpoint.
    /// A blown complementation budget counts as "not yet".
    pub fn converged(&mut self, m: usize) -> Result<bool, AutomataError> {
        if m == 0 {
            return Ok(false);
        }
        if let Some(k) = self.fixed_at {
            return Ok(m > k);
        }
        self.get(m)?;
        let (prev, cur) = (&self.iterates[m - 1], &self.iterates[m]);
        let done = match cur.included_with_budget(prev, self.budget) {
            Ok(w) => w.is_none(),
            Err(AutomataError::BudgetExceeded { .. }) => false,
            Err(e) => return Err(e),
        };
        if done {
            self.fixed_at = Some(m - 1);
            self.iterates.truncate(m);
        }
        Ok(done)
    }

    /// Index of the fixpoint, if detected.
    pub fn fixed_at(&self) -> Option<usize> {
        self.fixed_at
    }

    /// Whether `u` is a prefix of some word of `Ĉ_depth`.
    pub fn prefix_member(&mut self, u: &[ZipLetter], depth: usize) -> Result<bool, AutomataError> {
        let a = self.get(depth)?;
        Ok(prefix_run(a, u))
    }

    /// Whether `w` belongs to `Ĉ_depth`.
    pub fn member(&mut self, w: &LassoWord, depth: usize) -> Result<bool, AutomataError> {
        self.get(depth)?.accepts(w)
    }
}

/// Nonempty run of a trimmed automaton on a finite word.
fn prefix_run(a: &Nba, u: &[ZipLetter]) -> bool {
    let mut cur: Vec<usize> = a.initial().to_vec();
    for l in u {
        let mut next: Vec<usize> = cur
            .iter()
            .flat_map(|&s| a.edges(s).iter().filter(|(g, _)| g.eval(l)).map(|&(_, t)| t))
            .collect();
        next.sort_unstable();
        next.dedup();
        if next.is_empty() {
            return false;
        }
        cur = next;
    }
    !cur.is_empty()
}

fn so_quant<'f>(f: &'f Formula, var: &str) -> Result<&'f SoQuant, SecondOrderError> {
    f.so_quants().into_iter().find(|s| s.var == var).ok_or_else(|| SecondOrderError::UnknownVar(var.to_string()))
}

/// `Ĉ_n` for set variable `var`, reading lower bounds of earlier sets.
pub fn under_approx(f: &Formula, var: &str, env: &Env, n: usize, budget: usize) -> Result<Nba, SecondOrderError> {
    let sys = FixSystem::new(f, so_quant(f, var)?, env, Bound::Lower)?;
    Ok(Iteration::new(sys, budget).get(n)?.clone())
}

/// Both inductivity conditions at once: `step(b) ⊆ b` covers the seed too.
/// Returns a witness of `step(b) \ b` on failure.
pub fn park_violation(sys: &FixSystem, b: &Nba, budget: usize) -> Result<Option<LassoWord>, AutomataError> {
    let s = sys.restrict(&sys.step(b)?)?;
    s.included_with_budget(b, budget)
}

/// An inductive overapproximation for `var`, learned with `budget` units
/// of effort; falls back to the universal automaton.
pub fn over_approx(f: &Formula, var: &str, env: &Env, budget: usize, state_budget: usize) -> Result<Nba, SecondOrderError> {
    let so = so_quant(f, var)?;
    let lower = FixSystem::new(f, so, env, Bound::Lower)?;
    let upper = FixSystem::new(f, so, env, Bound::Upper)?;
    let mut it = Iteration::new(lower, state_budget);
    let mut learner = match Learner::new(upper.arity(), upper.props()) {
        Some(l) => l,
        None => return Ok(Nba::universal(upper.arity(), upper.props())),
    };
    let found = learner.learn(&mut it, &upper, budget + 2, learner::rounds_for(budget), state_budget)?;
    Ok(found.unwrap_or_else(|| Nba::universal(upper.arity(), upper.props())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::DEFAULT_STATE_BUDGET;
    use crate::encodings::{gen_ck_chain, gen_mazurkiewicz, Mazurkiewicz};

    const A: u64 = 1;
    const B: u64 = 2;
    const C: u64 = 4;
    const D: u64 = 8;

    fn pair(p: &[u64], pc: &[u64], r: &[u64], rc: &[u64]) -> LassoWord {
        LassoWord::zip(&[LassoWord::single(p, pc), LassoWord::single(r, rc)])
    }

    #[test]
    fn zero_iterations_give_nothing() {
        let (i, _) = gen_ck_chain(2);
        let env = Env::new(i.system.to_nba());
        let a = under_approx(&i.formula, "X", &env, 0, DEFAULT_STATE_BUDGET).unwrap();
        assert!(a.is_empty().is_none());
    }

    #[test]
    fn knowledge_chain_reaches_expected_traces() {
        let (i, _) = gen_ck_chain(2);
        let env = Env::new(i.system.to_nba());
        let c3 = under_approx(&i.formula, "X", &env, 3, DEFAULT_STATE_BUDGET).unwrap();
        for r in [[A, A], [A, B], [A, C]] {
            assert!(c3.accepts(&pair(&[A, A], &[D], &r, &[D])).unwrap(), "{r:?}");
        }
        assert!(!c3.accepts(&pair(&[A, A], &[D], &[A], &[C])).unwrap());
        let c2 = under_approx(&i.formula, "X", &env, 2, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!c2.accepts(&pair(&[A, A], &[D], &[A, C], &[D])).unwrap());
    }

    #[test]
    fn seed_only_admits_the_outer_trace() {
        let (i, _) = gen_ck_chain(1);
        let env = Env::new(i.system.to_nba());
        let c1 = under_approx(&i.formula, "X", &env, 1, DEFAULT_STATE_BUDGET).unwrap();
        assert!(c1.accepts(&pair(&[A], &[D], &[A], &[D])).unwrap());
        assert!(!c1.accepts(&pair(&[A], &[D], &[A, B], &[D])).unwrap());
    }

    #[test]
    fn learned_swap_invariant_refines_on_feedback() {
        let i = gen_mazurkiewicz(Mazurkiewicz::SwapA);
        let env = Env::new(i.system.to_nba());
        let so = i.formula.so_quants()[0];
        let lower = FixSystem::new(&i.formula, so, &env, Bound::Lower).unwrap();
        let upper = FixSystem::new(&i.formula, so, &env, Bound::Upper).unwrap();
        let mut it = Iteration::new(lower, DEFAULT_STATE_BUDGET);
        let mut l = Learner::new(2, 1).unwrap();
        let bad = pair(&[A], &[0], &[A, A], &[0]);
        let good = pair(&[A], &[0], &[0, 0, A], &[0]);
        let mut b = l.learn(&mut it, &upper, 2, 8, DEFAULT_STATE_BUDGET).unwrap().unwrap();
        for _ in 0..8 {
            if !b.accepts(&bad).unwrap() {
                break;
            }
            assert_eq!(l.feed_counterexample(&mut it, &bad).unwrap(), Feed::Refined);
            b = l.learn(&mut it, &upper, 2, 8, DEFAULT_STATE_BUDGET).unwrap().unwrap();
        }
        assert!(park_violation(&upper, &b, DEFAULT_STATE_BUDGET).unwrap().is_none());
        assert!(!b.accepts(&bad).unwrap());
        assert!(b.accepts(&good).unwrap());
    }

    #[test]
    fn swap_closure_never_converges() {
        let i = gen_mazurkiewicz(Mazurkiewicz::SwapA);
        let sys = FixSystem::new(&i.formula, i.formula.so_quants()[0], &Env::new(i.system.to_nba()), Bound::Lower).unwrap();
        let mut it = Iteration::new(sys, DEFAULT_STATE_BUDGET);
        for m in 1..6 {
            assert!(!it.converged(m).unwrap());
        }
    }
}
