//! Elimination of first-order trace quantifiers against automata for their
//! domains, innermost first.

use std::collections::HashMap;

use thiserror::Error;

use crate::automata::{AutomataError, LassoWord, Nba};
use crate::formula::{Formula, Ltl, Quant, SoRef};
use crate::ltl2nba::{ltl_to_nba, LtlError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FirstOrderError {
    #[error(transparent)]
    Automata(#[from] AutomataError),
    #[error(transparent)]
    Ltl(#[from] LtlError),
    #[error("no binding for `{0}`")]
    MissingBinding(String),
    #[error("binding for `{var}` has arity {got}, expected {want}")]
    BindingArity { var: String, got: usize, want: usize },
}

/// Lower and upper automata for one second-order variable. The first
/// `deps` tracks carry the first-order variables it depends on; the last
/// track is the member trace.
#[derive(Clone, Debug)]
pub struct SoBinding {
    pub deps: usize,
    pub lower: Nba,
    pub upper: Nba,
}

impl SoBinding {
    pub fn exact(deps: usize, nba: Nba) -> Self {
        SoBinding { deps, lower: nba.clone(), upper: nba }
    }

    pub fn bound(&self, b: Bound) -> &Nba {
        match b {
            Bound::Lower => &self.lower,
            Bound::Upper => &self.upper,
        }
    }
}

/// Which side of a binding to read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

/// Approximations for every second-order variable in scope.
#[derive(Clone, Debug)]
pub struct Env {
    props: usize,
    bindings: HashMap<SoRef, SoBinding>,
}

impl Env {
    /// Binds the system and all-traces sets.
    pub fn new(system: Nba) -> Self {
        let props = system.props();
        let mut bindings = HashMap::new();
        bindings.insert(SoRef::System, SoBinding::exact(0, system));
        bindings.insert(SoRef::AllTraces, SoBinding::exact(0, Nba::universal(1, props)));
        Env { props, bindings }
    }

    pub fn props(&self) -> usize {
        self.props
    }

    pub fn bind(&mut self, var: SoRef, b: SoBinding) {
        self.bindings.insert(var, b);
    }

    pub fn get(&self, var: &SoRef) -> Result<&SoBinding, FirstOrderError> {
        self.bindings.get(var).ok_or_else(|| FirstOrderError::MissingBinding(var.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Existentials use lower bounds, universals upper bounds.
    Prove,
    /// Same on the negated formula.
    Refute,
}

/// Running maximum of intermediate automaton sizes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Stats {
    pub peak_states: usize,
}

impl Stats {
    pub fn observe(&mut self, a: &Nba) {
        self.peak_states = self.peak_states.max(a.state_count());
    }
}

pub(crate) fn is_trivially_universal(c: &Nba) -> bool {
    c.state_count() == 1 && c.is_accepting(0) && c.edges(0).len() == 1 && c.edges(0)[0].0.is_true()
}

/// Places `c` (over `deps + 1` tracks) inside an automaton over `arity`
/// tracks: dependency tracks stay, the member track goes to `slot`.
pub fn place(c: &Nba, arity: usize, slot: usize) -> Result<Nba, AutomataError> {
    let deps = c.arity() - 1;
    let mut map: Vec<usize> = (0..deps).collect();
    map.push(slot);
    c.embed(arity, &map)
}

/// Traces `t` with `zip(t1..t_{i-1}, t)` in `next` and `zip(t1..tT, t)` in `c`,
/// projected onto the first `i - 1` tracks.
pub fn e_product(next: &Nba, c: &Nba) -> Result<Nba, AutomataError> {
    let i = next.arity();
    if i == 0 || c.arity() == 0 || c.arity() > i {
        return Err(AutomataError::ArityMismatch { left: i, right: c.arity() });
    }
    let joined = if is_trivially_universal(c) { next.clone() } else { next.intersect(&c.lift(i)?)? };
    Ok(joined.project_exists(i - 1)?.reduce())
}

/// Universal counterpart of [`e_product`] by duality.
pub fn u_product(next: &Nba, c: &Nba, budget: usize) -> Result<Nba, AutomataError> {
    let inner = e_product(&next.complement_with_budget(budget)?, c)?;
    Ok(inner.complement_with_budget(budget)?.reduce())
}

/// One quantifier as seen by the chain.
#[derive(Clone, Debug)]
struct Step {
    quant: Quant,
    bound: Bound,
    var: String,
    domain: SoRef,
}

fn bound_for(q: Quant) -> Bound {
    match q {
        Quant::Exists => Bound::Lower,
        Quant::Forall => Bound::Upper,
    }
}

/// Quantifiers and body as evaluated in `mode`. With `negate_only`, the
/// formula is negated but bounds stay those of the `Prove` chain.
fn oriented(f: &Formula, mode: Mode, negate_only: bool) -> (Vec<Step>, Ltl) {
    let negate = mode == Mode::Refute || negate_only;
    let steps = f
        .fo_quants()
        .into_iter()
        .map(|q| {
            let quant = if negate { q.quant.dual() } else { q.quant };
            let bound = if negate_only { bound_for(q.quant) } else { bound_for(quant) };
            Step { quant, bound, var: q.var.clone(), domain: q.domain.clone() }
        })
        .collect();
    let body = if negate { Ltl::not(f.body.clone()) } else { f.body.clone() };
    (steps, body)
}

fn domain_automaton<'e>(env: &'e Env, s: &Step, slot: usize) -> Result<&'e Nba, FirstOrderError> {
    let b = env.get(&s.domain)?;
    if b.deps > slot {
        return Err(FirstOrderError::BindingArity { var: s.domain.to_string(), got: b.deps, want: slot });
    }
    Ok(b.bound(s.bound))
}

/// Automaton over `stop` tracks for the formula with quantifiers
/// `stop..` eliminated, in positive form.
fn chain(
    steps: &[Step],
    body: &Ltl,
    aps: &[String],
    env: &Env,
    stop: usize,
    budget: usize,
    stats: &mut Stats,
) -> Result<Nba, FirstOrderError> {
    let tracks: Vec<String> = steps.iter().map(|s| s.var.clone()).collect();
    let n = steps.len();
    // `negated` means the automaton holds the complement of the current formula
    let innermost_forall = n > stop && steps[n - 1].quant == Quant::Forall;
    let (mut a, mut negated) = if innermost_forall {
        (ltl_to_nba(&Ltl::not(body.clone()), &tracks, aps)?, true)
    } else {
        (ltl_to_nba(body, &tracks, aps)?, false)
    };
    stats.observe(&a);
    for i in (stop..n).rev() {
        let s = &steps[i];
        let want_negated = s.quant == Quant::Forall;
        if negated != want_negated {
            a = a.complement_with_budget(budget)?.reduce();
            negated = want_negated;
            stats.observe(&a);
        }
        let c = domain_automaton(env, s, i)?;
        a = e_product(&a, c)?;
        stats.observe(&a);
    }
    if negated {
        a = a.complement_with_budget(budget)?.reduce();
        stats.observe(&a);
    }
    Ok(a)
}

/// Eliminates every first-order quantifier. The result has arity zero and
/// is nonempty iff the chain establishes the formula (in `Prove` mode) or
/// its negation (in `Refute` mode).
pub fn eliminate_prefix(f: &Formula, env: &Env, mode: Mode, budget: usize, stats: &mut Stats) -> Result<Nba, FirstOrderError> {
    let (steps, body) = oriented(f, mode, false);
    chain(&steps, &body, &f.aps, env, 0, budget, stats)
}

/// Concrete traces for the leading existential block of the chain, if the
/// chain is nonempty. Traces are named by their quantified variables.
pub fn leading_witness(
    f: &Formula,
    env: &Env,
    mode: Mode,
    budget: usize,
) -> Result<Option<Vec<(String, LassoWord)>>, FirstOrderError> {
    let (steps, body) = oriented(f, mode, false);
    witness_of(f, &steps, &body, env, budget)
}

/// Why a `Prove` chain came out empty: traces for the leading universal
/// block that falsify the rest, drawn from the same bounds.
pub fn prove_counterexample(f: &Formula, env: &Env, budget: usize) -> Result<Option<Vec<(String, LassoWord)>>, FirstOrderError> {
    let (steps, body) = oriented(f, Mode::Prove, true);
    witness_of(f, &steps, &body, env, budget)
}

fn witness_of(
    f: &Formula,
    steps: &[Step],
    body: &Ltl,
    env: &Env,
    budget: usize,
) -> Result<Option<Vec<(String, LassoWord)>>, FirstOrderError> {
    let e = steps.iter().take_while(|s| s.quant == Quant::Exists).count();
    if e == 0 {
        return Ok(None);
    }
    let mut stats = Stats::default();
    let mut a = chain(steps, body, &f.aps, env, e, budget, &mut stats)?;
    for (i, s) in steps.iter().enumerate().take(e) {
        let c = domain_automaton(env, s, i)?;
        if !is_trivially_universal(c) {
            a = a.intersect(&place(c, e, i)?)?;
        }
    }
    Ok(a.is_empty().map(|w| steps[..e].iter().enumerate().map(|(i, s)| (s.var.clone(), w.track(i))).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::system::parse_system;

    fn one_state() -> Nba {
        parse_system("aps: a\ninit: 0\nstates:\n0 {a} -> 0\n").unwrap().to_nba()
    }

    #[test]
    fn e_product_with_universal_is_projection() {
        let next = ltl_to_nba(&crate::formula::parse_ltl("G (a@p <-> a@q)").unwrap(), &["p".into(), "q".into()], &["a".into()]).unwrap();
        let r = e_product(&next, &Nba::universal(1, 1)).unwrap();
        assert!(Nba::universal(1, 1).language_included(&r).unwrap().is_none());
        assert!(e_product(&next, &Nba::empty(1, 1)).unwrap().is_empty().is_none());
    }

    #[test]
    fn e_product_resolves_on_system() {
        let next = ltl_to_nba(&crate::formula::parse_ltl("G (a@p <-> a@q)").unwrap(), &["p".into(), "q".into()], &["a".into()]).unwrap();
        let r = e_product(&next, &one_state()).unwrap();
        assert!(r.accepts(&LassoWord::single(&[], &[1])).unwrap());
        assert!(!r.accepts(&LassoWord::single(&[1], &[0])).unwrap());
    }

    #[test]
    fn u_product_edges() {
        let next = Nba::universal(1, 1);
        let r = u_product(&next, &Nba::empty(1, 1), 1000).unwrap();
        assert!(r.is_empty().is_some());
        let r = u_product(&next, &one_state(), 1000).unwrap();
        assert!(r.is_empty().is_some());
    }

    #[test]
    fn closed_formulas_decide() {
        let env = Env::new(one_state());
        let aps = vec!["a".to_string()];
        let mut st = Stats::default();
        let f = parse_formula("forall p in S. G a@p", &aps).unwrap();
        assert!(eliminate_prefix(&f, &env, Mode::Prove, 1000, &mut st).unwrap().is_empty().is_some());
        assert!(eliminate_prefix(&f, &env, Mode::Refute, 1000, &mut st).unwrap().is_empty().is_none());
        let f = parse_formula("exists p in A. forall q in S. F (a@p <-> !a@q)", &aps).unwrap();
        assert!(eliminate_prefix(&f, &env, Mode::Prove, 1000, &mut st).unwrap().is_empty().is_some());
        let w = leading_witness(&f, &env, Mode::Prove, 1000).unwrap().unwrap();
        assert_eq!(w[0].0, "p");
        assert!(!w[0].1.same_word(&LassoWord::single(&[], &[1])));
        let f = parse_formula("true", &aps).unwrap();
        assert!(eliminate_prefix(&f, &env, Mode::Prove, 1000, &mut st).unwrap().is_empty().is_some());
    }
}
