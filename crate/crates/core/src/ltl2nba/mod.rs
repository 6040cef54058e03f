//! Translation of quantifier-free bodies into automata over zipped traces,
//! plus a direct evaluator on lasso words.

mod tableau;

use thiserror::Error;

use crate::automata::LassoWord;
use crate::formula::Ltl;
use crate::guard::Var;

pub use tableau::ltl_to_nba;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LtlError {
    #[error("trace variable `{0}` has no track")]
    UnknownTraceVar(String),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("membership atom `{0}` reached the translator")]
    Unnormalized(String),
}

/// Resolves `prop@var` to a guard variable.
pub(crate) fn resolve(prop: &str, var: &str, track_order: &[String], aps: &[String]) -> Result<Var, LtlError> {
    let t = track_order.iter().position(|v| v == var).ok_or_else(|| LtlError::UnknownTraceVar(var.to_string()))?;
    let p = aps.iter().position(|a| a == prop).ok_or_else(|| LtlError::UnknownProp(prop.to_string()))?;
    Ok(Var::new(p, t))
}

/// Evaluates `body` on a lasso word whose track `i` is the trace bound to
/// `track_order[i]`. Exact: fixpoints are computed on the finite lasso graph.
pub fn eval_ltl_on_lasso(body: &Ltl, w: &LassoWord, track_order: &[String], aps: &[String]) -> Result<bool, LtlError> {
    Ok(eval_positions(body, w, track_order, aps)?[0])
}

fn eval_positions(e: &Ltl, w: &LassoWord, tracks: &[String], aps: &[String]) -> Result<Vec<bool>, LtlError> {
    let n = w.span();
    let rec = |x: &Ltl| eval_positions(x, w, tracks, aps);
    let next = |v: &[bool]| -> Vec<bool> { (0..n).map(|i| v[w.next_pos(i)]).collect() };
    // least (init false) or greatest (init true) solution of
    // x[i] = now[i] || (keep[i] && x[next i])
    let solve = |now: &[bool], keep: &[bool], init: bool| -> Vec<bool> {
        let mut x = vec![init; n];
        loop {
            let mut changed = false;
            for i in (0..n).rev() {
                let v = now[i] || (keep[i] && x[w.next_pos(i)]);
                if v != x[i] {
                    x[i] = v;
                    changed = true;
                }
            }
            if !changed {
                return x;
            }
        }
    };
    Ok(match e {
        Ltl::Const(b) => vec![*b; n],
        Ltl::Atom { prop, var } => {
            let v = resolve(prop, var, tracks, aps)?;
            (0..n).map(|i| (w.letter(i)[v.track()] >> v.prop()) & 1 == 1).collect()
        }
        Ltl::Member { var, set } => return Err(LtlError::Unnormalized(format!("{var} in {set}"))),
        Ltl::Not(a) => rec(a)?.into_iter().map(|x| !x).collect(),
        Ltl::And(a, b) => rec(a)?.into_iter().zip(rec(b)?).map(|(x, y)| x && y).collect(),
        Ltl::Or(a, b) => rec(a)?.into_iter().zip(rec(b)?).map(|(x, y)| x || y).collect(),
        Ltl::Implies(a, b) => rec(a)?.into_iter().zip(rec(b)?).map(|(x, y)| !x || y).collect(),
        Ltl::Iff(a, b) => rec(a)?.into_iter().zip(rec(b)?).map(|(x, y)| x == y).collect(),
        Ltl::Next(a) => next(&rec(a)?),
        Ltl::Eventually(a) => solve(&rec(a)?, &vec![true; n], false),
        Ltl::Globally(a) => {
            let v = rec(a)?;
            let not: Vec<bool> = v.iter().map(|x| !x).collect();
            solve(&not, &vec![true; n], false).into_iter().map(|x| !x).collect()
        }
        Ltl::Until(a, b) => solve(&rec(b)?, &rec(a)?, false),
        Ltl::WeakUntil(a, b) => solve(&rec(b)?, &rec(a)?, true),
    })
}
