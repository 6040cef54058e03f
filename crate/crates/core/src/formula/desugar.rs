//! Elimination of membership atoms and seed constraints.

use std::collections::HashSet;

use super::ast::{Constraint, FixConstraint, FoQuant, Formula, Ltl, PrefixItem, Quant, SoRef};
use super::FormulaError;

/// Names already used anywhere in the formula.
fn used_names(f: &Formula) -> HashSet<String> {
    let mut used = HashSet::new();
    for p in &f.prefix {
        match p {
            PrefixItem::Fo(q) => {
                used.insert(q.var.clone());
            }
            PrefixItem::So(s) => {
                used.insert(s.var.clone());
                for c in &s.constraints {
                    match c {
                        Constraint::Seed { trace } => {
                            used.insert(trace.clone());
                        }
                        Constraint::Rule(r) => {
                            used.extend(r.dotted.iter().map(|q| q.var.clone()));
                            used.extend(r.step.trace_vars());
                        }
                    }
                }
            }
        }
    }
    used.extend(f.body.trace_vars());
    used
}

struct Fresh {
    used: HashSet<String>,
    next: usize,
}

impl Fresh {
    fn name(&mut self) -> String {
        loop {
            let n = format!("_m{}", self.next);
            self.next += 1;
            if self.used.insert(n.clone()) {
                return n;
            }
        }
    }
}

#[derive(Clone, Copy)]
struct Ctx {
    positive: bool,
    temporal: bool,
    iff: bool,
}

fn walk(e: &Ltl, ctx: Ctx, aps: &[String], fresh: &mut Fresh, out: &mut Vec<FoQuant>) -> Result<Ltl, FormulaError> {
    let flip = Ctx { positive: !ctx.positive, ..ctx };
    let temporal = Ctx { temporal: true, ..ctx };
    let mut go = |e: &Ltl, c: Ctx| walk(e, c, aps, fresh, out).map(Box::new);
    Ok(match e {
        Ltl::Member { var, set } => {
            if ctx.temporal {
                return Err(FormulaError::MembershipUnderTemporal { var: var.clone(), set: set.to_string() });
            }
            if ctx.iff {
                return Err(FormulaError::MembershipInIff { var: var.clone(), set: set.to_string() });
            }
            let v = fresh.name();
            let quant = if ctx.positive { Quant::Exists } else { Quant::Forall };
            out.push(FoQuant { quant, var: v.clone(), domain: set.clone() });
            Ltl::globally(Ltl::eq(&v, var, aps))
        }
        Ltl::Const(_) | Ltl::Atom { .. } => e.clone(),
        Ltl::Not(a) => Ltl::Not(go(a, flip)?),
        Ltl::And(a, b) => Ltl::And(go(a, ctx)?, go(b, ctx)?),
        Ltl::Or(a, b) => Ltl::Or(go(a, ctx)?, go(b, ctx)?),
        Ltl::Implies(a, b) => Ltl::Implies(go(a, flip)?, go(b, ctx)?),
        Ltl::Iff(a, b) => {
            let c = Ctx { iff: true, ..ctx };
            Ltl::Iff(go(a, c)?, go(b, c)?)
        }
        Ltl::Next(a) => Ltl::Next(go(a, temporal)?),
        Ltl::Eventually(a) => Ltl::Eventually(go(a, temporal)?),
        Ltl::Globally(a) => Ltl::Globally(go(a, temporal)?),
        Ltl::Until(a, b) => Ltl::Until(go(a, temporal)?, go(b, temporal)?),
        Ltl::WeakUntil(a, b) => Ltl::WeakUntil(go(a, temporal)?, go(b, temporal)?),
    })
}

/// Rewrites membership atoms in the body into fresh trailing quantifiers and
/// seed constraints into premise-style constraints over all traces.
pub fn desugar_membership(f: &Formula) -> Result<Formula, FormulaError> {
    let mut fresh = Fresh { used: used_names(f), next: 0 };
    let mut prefix = Vec::with_capacity(f.prefix.len());
    for p in &f.prefix {
        match p {
            PrefixItem::Fo(_) => prefix.push(p.clone()),
            PrefixItem::So(s) => {
                let mut s = s.clone();
                for c in &mut s.constraints {
                    match c {
                        Constraint::Seed { trace } => {
                            let d = fresh.name();
                            *c = Constraint::Rule(FixConstraint {
                                dotted: vec![FoQuant { quant: Quant::Forall, var: d.clone(), domain: SoRef::AllTraces }],
                                step: Ltl::globally(Ltl::eq(&d, trace, &f.aps)),
                                target: 1,
                            });
                        }
                        Constraint::Rule(r) => {
                            if r.step.has_member() {
                                return Err(FormulaError::MembershipInStep { owner: s.var.clone() });
                            }
                        }
                    }
                }
                prefix.push(PrefixItem::So(s));
            }
        }
    }
    let mut extra = Vec::new();
    let ctx = Ctx { positive: true, temporal: false, iff: false };
    let body = walk(&f.body, ctx, &f.aps, &mut fresh, &mut extra)?;
    prefix.extend(extra.into_iter().map(PrefixItem::Fo));
    Ok(Formula { aps: f.aps.clone(), prefix, body })
}
