//! Fragment check: least fixpoints only, constraints of premise/conclusion
//! shape, no membership atoms left.

use super::ast::{Constraint, Formula, Ltl, PrefixItem, Quant, SoRef};

/// Empty iff the formula lies in the supported fragment.
pub fn validate_fragment(f: &Formula) -> Vec<String> {
    let mut diags = Vec::new();
    let mut so_seen: Vec<String> = Vec::new();
    let mut fo_seen: Vec<String> = Vec::new();
    let known = |d: &SoRef, so_seen: &[String], owner: Option<&str>| match d {
        SoRef::System | SoRef::AllTraces => true,
        SoRef::User(n) => so_seen.contains(n) || owner == Some(n.as_str()),
    };
    for p in &f.prefix {
        match p {
            PrefixItem::Fo(q) => {
                if !known(&q.domain, &so_seen, None) {
                    diags.push(format!("`{}` ranges over `{}` before it is quantified", q.var, q.domain));
                }
                fo_seen.push(q.var.clone());
            }
            PrefixItem::So(s) => {
                if s.mode == super::ast::FixMode::Greatest {
                    diags.push(format!("fix {}: unsupported: ⋏ (greatest fixpoint)", s.var));
                }
                if s.constraints.is_empty() {
                    diags.push(format!("fix {}: no constraints", s.var));
                }
                for (i, c) in s.constraints.iter().enumerate() {
                    let at = format!("fix {} constraint {}", s.var, i + 1);
                    let r = match c {
                        Constraint::Seed { .. } => {
                            diags.push(format!("{at}: seed constraint not desugared"));
                            continue;
                        }
                        Constraint::Rule(r) => r,
                    };
                    if r.dotted.iter().any(|q| q.quant == Quant::Exists) {
                        diags.push(format!("{at}: step formula contains an existential quantifier"));
                    }
                    if r.target == 0 || r.target > r.dotted.len() {
                        diags.push(format!("{at}: target index {} out of range", r.target));
                    }
                    for q in &r.dotted {
                        if !known(&q.domain, &so_seen, Some(&s.var)) {
                            diags.push(format!("{at}: premise domain `{}` is not quantified", q.domain));
                        }
                    }
                    if r.step.has_member() {
                        diags.push(format!("{at}: membership atom inside the step formula"));
                    }
                    for v in r.step.trace_vars() {
                        if !fo_seen.contains(&v) && !r.dotted.iter().any(|q| q.var == v) {
                            diags.push(format!("{at}: trace variable `{v}` is not in scope"));
                        }
                    }
                }
                so_seen.push(s.var.clone());
            }
        }
    }
    if f.body.has_member() {
        diags.push("body contains a membership atom".to_string());
    }
    for v in f.body.trace_vars() {
        if !fo_seen.contains(&v) {
            diags.push(format!("body: trace variable `{v}` is not quantified"));
        }
    }
    let mut props_ok = true;
    let mut check_props = |e: &Ltl, diags: &mut Vec<String>| {
        for p in e.props() {
            if !f.aps.contains(&p) && props_ok {
                diags.push(format!("unknown proposition `{p}`"));
                props_ok = false;
            }
        }
    };
    check_props(&f.body, &mut diags);
    for s in f.so_quants() {
        for c in &s.constraints {
            if let Constraint::Rule(r) = c {
                check_props(&r.step, &mut diags);
            }
        }
    }
    diags
}
