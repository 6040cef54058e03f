//! The refinement loop: approximate the set variables outside-in, then
//! eliminate trace quantifiers inside-out, trying both the formula and
//! its negation at each precision.

mod brute;

use std::fmt;
use std::time::Instant;

use thiserror::Error;

use crate::automata::{AutomataError, LassoWord, Nba, DEFAULT_STATE_BUDGET};
use crate::firstorder::{
    eliminate_prefix, leading_witness, prove_counterexample, Bound, Env, FirstOrderError, Mode, SoBinding, Stats,
};
use crate::formula::{Formula, SoRef};
use crate::secondorder::{park_violation, Feed, FixSystem, Iteration, Learner, SecondOrderError};
use crate::system::TransitionSystem;

pub use brute::{brute_force_check, BruteConfig};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("system propositions {system:?} differ from formula propositions {formula:?}")]
    ApMismatch { system: Vec<String>, formula: Vec<String> },
    #[error("not finitely checkable at this bound: {0}")]
    NotFinitelyCheckable(String),
    #[error(transparent)]
    FirstOrder(#[from] FirstOrderError),
    #[error(transparent)]
    SecondOrder(#[from] SecondOrderError),
    #[error(transparent)]
    Automata(#[from] AutomataError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    IterOnly,
    LearnOnly,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::IterOnly => "iter",
            Method::LearnOnly => "learn",
            Method::Both => "both",
        }
    }

    fn iterates(self) -> bool {
        self != Method::LearnOnly
    }

    fn learns(self) -> bool {
        self != Method::IterOnly
    }
}

#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub max_precision: usize,
    pub method: Method,
    pub state_budget: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { max_precision: 50, method: Method::Both, state_budget: DEFAULT_STATE_BUDGET }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Sat,
    Unsat,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Sat => "SAT",
            Outcome::Unsat => "UNSAT",
            Outcome::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunStats {
    pub rounds: usize,
    pub peak_states: usize,
    pub approx_ms: u128,
    pub chain_ms: u128,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub outcome: Outcome,
    pub precision: usize,
    /// Traces for the leading existential block of the deciding chain.
    pub witness: Option<Vec<(String, LassoWord)>>,
    pub stats: RunStats,
    pub diagnostic: Option<String>,
}

impl Verdict {
    fn unknown(precision: usize, stats: RunStats, diagnostic: Option<String>) -> Verdict {
        Verdict { outcome: Outcome::Unknown, precision, witness: None, stats, diagnostic }
    }
}

/// Bounds handed to the trace quantifiers for one set variable.
#[derive(Clone, Debug)]
pub struct SetBounds {
    pub var: String,
    pub lower: Nba,
    pub upper: Nba,
}

/// Approximation state of one set variable, kept across rounds.
struct SetState {
    iteration: Option<Iteration>,
    learner: Option<Learner>,
    learned: Option<Nba>,
}

fn is_budget(e: &EngineError) -> bool {
    matches!(
        e,
        EngineError::Automata(AutomataError::BudgetExceeded { .. })
            | EngineError::FirstOrder(FirstOrderError::Automata(AutomataError::BudgetExceeded { .. }))
            | EngineError::SecondOrder(SecondOrderError::Automata(AutomataError::BudgetExceeded { .. }))
            | EngineError::SecondOrder(SecondOrderError::FirstOrder(FirstOrderError::Automata(
                AutomataError::BudgetExceeded { .. }
            )))
    )
}

/// Decides `f` on `ts`, raising the precision until one chain succeeds.
pub fn verify(ts: &TransitionSystem, f: &Formula, cfg: &CheckConfig) -> Result<Verdict, EngineError> {
    if ts.aps() != f.aps.as_slice() {
        return Err(EngineError::ApMismatch { system: ts.aps().to_vec(), formula: f.aps.clone() });
    }
    let mut engine = Engine::new(ts, f, cfg);
    let mut last = 0;
    for n in 0..=cfg.max_precision {
        last = n;
        match engine.round(n) {
            Ok(Some(v)) => return Ok(v),
            Ok(None) => {}
            Err(e) if is_budget(&e) => {
                return Ok(Verdict::unknown(n, engine.stats.clone(), Some(e.to_string())));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Verdict::unknown(last, engine.stats.clone(), None))
}

/// The bounds every set variable receives in rounds `0..=cfg.max_precision`,
/// without running the trace-quantifier chains.
pub fn approximation_trace(ts: &TransitionSystem, f: &Formula, cfg: &CheckConfig) -> Result<Vec<Vec<SetBounds>>, EngineError> {
    let mut engine = Engine::new(ts, f, cfg);
    (0..=cfg.max_precision)
        .map(|n| {
            let env = engine.approximate(n)?;
            f.so_quants()
                .iter()
                .map(|so| {
                    let b = env.get(&SoRef::User(so.var.clone()))?;
                    Ok(SetBounds { var: so.var.clone(), lower: b.lower.clone(), upper: b.upper.clone() })
                })
                .collect()
        })
        .collect()
}

struct Engine<'a> {
    f: &'a Formula,
    cfg: &'a CheckConfig,
    base: Env,
    sets: Vec<SetState>,
    stats: RunStats,
}

impl<'a> Engine<'a> {
    fn new(ts: &TransitionSystem, f: &'a Formula, cfg: &'a CheckConfig) -> Self {
        let sets = f.so_quants().iter().map(|_| SetState { iteration: None, learner: None, learned: None }).collect();
        Engine { f, cfg, base: Env::new(ts.to_nba()), sets, stats: RunStats::default() }
    }

    /// Bindings for every set variable at precision `n`.
    fn approximate(&mut self, n: usize) -> Result<Env, EngineError> {
        let mut env = self.base.clone();
        let budget = self.cfg.state_budget;
        for (j, so) in self.f.so_quants().into_iter().enumerate() {
            let lower_sys = FixSystem::new(self.f, so, &env, Bound::Lower)?;
            let arity = lower_sys.arity();
            let props = lower_sys.props();
            let st = &mut self.sets[j];
            if st.iteration.is_none() || lower_sys.depends_on_sets() {
                st.iteration = Some(Iteration::new(lower_sys, budget));
            }
            let it = st.iteration.as_mut().expect("just set");
            let lower = it.get(n + 1)?.clone();
            let converged = self.cfg.method.iterates() && it.converged(n + 1)?;
            let mut upper = if converged { Some(lower.clone()) } else { None };
            if upper.is_none() && self.cfg.method.learns() {
                let upper_sys = FixSystem::new(self.f, so, &env, Bound::Upper)?;
                if let Some(b) = &st.learned {
                    if park_violation(&upper_sys, b, budget)?.is_some() {
                        st.learned = None;
                    }
                }
                if st.learned.is_none() {
                    if st.learner.is_none() {
                        st.learner = Learner::new(arity, props);
                    }
                    if let Some(l) = st.learner.as_mut() {
                        st.learned = l.learn(it, &upper_sys, n + 2, 4, budget)?;
                    }
                }
                upper = st.learned.clone();
            }
            let upper = upper.unwrap_or_else(|| Nba::universal(arity, props));
            let lower = if self.cfg.method.iterates() { lower } else { Nba::empty(arity, props) };
            self.stats.peak_states = self.stats.peak_states.max(lower.state_count()).max(upper.state_count());
            env.bind(SoRef::User(so.var.clone()), SoBinding { deps: arity - 1, lower, upper });
        }
        Ok(env)
    }

    fn round(&mut self, n: usize) -> Result<Option<Verdict>, EngineError> {
        self.stats.rounds = n + 1;
        let t0 = Instant::now();
        let env = self.approximate(n)?;
        self.stats.approx_ms += t0.elapsed().as_millis();
        let t1 = Instant::now();
        let budget = self.cfg.state_budget;
        let mut chain_stats = Stats::default();
        let mut decided = None;
        for (mode, outcome) in [(Mode::Prove, Outcome::Sat), (Mode::Refute, Outcome::Unsat)] {
            let a = eliminate_prefix(self.f, &env, mode, budget, &mut chain_stats)?;
            if a.is_empty().is_some() {
                let witness = leading_witness(self.f, &env, mode, budget).ok().flatten();
                decided = Some(Verdict { outcome, precision: n, witness, stats: RunStats::default(), diagnostic: None });
                break;
            }
            if mode == Mode::Prove && self.cfg.method.learns() {
                self.feed_learners(&env)?;
            }
        }
        self.stats.chain_ms += t1.elapsed().as_millis();
        self.stats.peak_states = self.stats.peak_states.max(chain_stats.peak_states);
        Ok(decided.map(|mut v| {
            v.stats = self.stats.clone();
            v
        }))
    }

    /// Hands traces that broke the `Prove` chain back to the learners whose
    /// invariants admitted them.
    fn feed_learners(&mut self, env: &Env) -> Result<(), EngineError> {
        if self.sets.iter().all(|s| s.learned.is_none()) {
            return Ok(());
        }
        let Some(w) = prove_counterexample(self.f, env, self.cfg.state_budget).ok().flatten() else {
            return Ok(());
        };
        let fo = self.f.fo_quants();
        for (j, so) in self.f.so_quants().into_iter().enumerate() {
            let deps = self.f.bound_before(&so.var).unwrap_or(0);
            if deps > w.len() {
                continue;
            }
            for (k, q) in fo.iter().enumerate().take(w.len()) {
                if q.domain != SoRef::User(so.var.clone()) || k < deps {
                    continue;
                }
                let mut parts: Vec<LassoWord> = w[..deps].iter().map(|(_, t)| t.clone()).collect();
                parts.push(w[k].1.clone());
                let word = LassoWord::zip(&parts);
                let st = &mut self.sets[j];
                if let (Some(l), Some(it)) = (st.learner.as_mut(), st.iteration.as_mut()) {
                    if st.learned.is_some() && l.feed_counterexample(it, &word)? == Feed::Refined {
                        st.learned = None;
                    }
                }
            }
        }
        Ok(())
    }
}
