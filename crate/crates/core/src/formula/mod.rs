//! Formulas: syntax tree, parser, desugaring and fragment validation.

mod ast;
mod desugar;
mod parser;
mod validate;

use thiserror::Error;

pub use ast::{Constraint, FixConstraint, FixMode, FoQuant, Formula, Ltl, PrefixItem, Quant, SoQuant, SoRef};
pub use desugar::desugar_membership;
pub use parser::parse_ltl;
pub use validate::validate_fragment;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unbound trace variable `{0}`")]
    UnboundTraceVar(String),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("second-order variable used before quantification: `{0}`")]
    SoBeforeQuantification(String),
    #[error("variable `{0}` is quantified twice")]
    DuplicateVar(String),
    #[error("unsupported: ⋏ (greatest fixpoint for `{0}`)")]
    Greatest(String),
    #[error("`{var} in {set}`: membership may only be used outside the scope of any temporal operator")]
    MembershipUnderTemporal { var: String, set: String },
    #[error("`{var} in {set}`: membership inside `<->` has no fixed polarity")]
    MembershipInIff { var: String, set: String },
    #[error("membership atom inside a step formula of `{owner}`")]
    MembershipInStep { owner: String },
    #[error("formula outside the least-fixpoint fragment: {}", .0.join("; "))]
    Fragment(Vec<String>),
}

/// Parses without scope checks, desugaring or validation.
pub fn parse_formula_unchecked(text: &str, aps: &[String]) -> Result<Formula, FormulaError> {
    parser::parse_raw(text, aps)
}

/// Parses, scope-checks, desugars and validates a formula.
pub fn parse_formula(text: &str, aps: &[String]) -> Result<Formula, FormulaError> {
    let raw = parser::parse_raw(text, aps)?;
    check_scopes(&raw)?;
    if let Some(s) = raw.so_quants().into_iter().find(|s| s.mode == FixMode::Greatest) {
        return Err(FormulaError::Greatest(s.var.clone()));
    }
    let f = desugar_membership(&raw)?;
    let diags = validate_fragment(&f);
    if !diags.is_empty() {
        return Err(FormulaError::Fragment(diags));
    }
    Ok(f)
}

fn check_props(e: &Ltl, aps: &[String]) -> Result<(), FormulaError> {
    match e.props().into_iter().find(|p| !aps.contains(p)) {
        Some(p) => Err(FormulaError::UnknownProp(p)),
        None => Ok(()),
    }
}

fn check_domain(d: &SoRef, so_seen: &[String], owner: Option<&str>) -> Result<(), FormulaError> {
    match d {
        SoRef::User(n) if !so_seen.contains(n) && owner != Some(n.as_str()) => {
            Err(FormulaError::SoBeforeQuantification(n.clone()))
        }
        _ => Ok(()),
    }
}

fn check_members(e: &Ltl, so_seen: &[String]) -> Result<(), FormulaError> {
    let mut bad = None;
    e.visit(&mut |x| {
        if let Ltl::Member { set: SoRef::User(n), .. } = x {
            if !so_seen.contains(n) && bad.is_none() {
                bad = Some(n.clone());
            }
        }
    });
    bad.map_or(Ok(()), |n| Err(FormulaError::SoBeforeQuantification(n)))
}

/// Second-order scoping, first-order binding and proposition checks.
fn check_scopes(f: &Formula) -> Result<(), FormulaError> {
    let mut so_seen: Vec<String> = Vec::new();
    let mut fo_seen: Vec<String> = Vec::new();
    for p in &f.prefix {
        match p {
            PrefixItem::Fo(q) => {
                check_domain(&q.domain, &so_seen, None)?;
                if fo_seen.contains(&q.var) || so_seen.contains(&q.var) {
                    return Err(FormulaError::DuplicateVar(q.var.clone()));
                }
                fo_seen.push(q.var.clone());
            }
            PrefixItem::So(s) => {
                if so_seen.contains(&s.var) || fo_seen.contains(&s.var) {
                    return Err(FormulaError::DuplicateVar(s.var.clone()));
                }
                for c in &s.constraints {
                    match c {
                        Constraint::Seed { trace } => {
                            if !fo_seen.contains(trace) {
                                return Err(FormulaError::UnboundTraceVar(trace.clone()));
                            }
                        }
                        Constraint::Rule(r) => {
                            let mut local: Vec<&str> = Vec::new();
                            for q in &r.dotted {
                                check_domain(&q.domain, &so_seen, Some(&s.var))?;
                                if fo_seen.contains(&q.var) || local.contains(&q.var.as_str()) {
                                    return Err(FormulaError::DuplicateVar(q.var.clone()));
                                }
                                local.push(&q.var);
                            }
                            check_members(&r.step, &so_seen)?;
                            if let Some(v) = r
                                .step
                                .trace_vars()
                                .into_iter()
                                .find(|v| !fo_seen.contains(v) && !local.contains(&v.as_str()))
                            {
                                return Err(FormulaError::UnboundTraceVar(v));
                            }
                            check_props(&r.step, &f.aps)?;
                        }
                    }
                }
                so_seen.push(s.var.clone());
            }
        }
    }
    check_members(&f.body, &so_seen)?;
    if let Some(v) = f.body.trace_vars().into_iter().find(|v| !fo_seen.contains(v)) {
        return Err(FormulaError::UnboundTraceVar(v));
    }
    check_props(&f.body, &f.aps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aps(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    const CK: &str = "forall p in S. fix X min { p in X; \
        forall q1 in X. forall q2 in S. G eq(q1,q2;a,d) | G eq(q1,q2;c,d) => q2 in X }. \
        forall r in X. X a@r";

    #[test]
    fn minimal_formula() {
        let f = parse_formula("forall p in S. G (a@p)", &aps(&["a"])).unwrap();
        assert_eq!(f.prefix.len(), 1);
        assert_eq!(f.body, Ltl::globally(Ltl::atom("a", "p")));
    }

    #[test]
    fn common_knowledge_shape() {
        let f = parse_formula(CK, &aps(&["a", "b", "c", "d"])).unwrap();
        assert_eq!(f.fo_quants().len(), 2);
        let so = f.so_quants();
        assert_eq!(so.len(), 1);
        assert_eq!(so[0].constraints.len(), 2);
        let seed = so[0].rules().next().unwrap();
        assert_eq!(seed.dotted[0].domain, SoRef::AllTraces);
        assert!(validate_fragment(&f).is_empty());
    }

    #[test]
    fn scoping_errors() {
        let e = parse_formula("exists p in X. a@p", &aps(&["a"])).unwrap_err();
        assert_eq!(e, FormulaError::SoBeforeQuantification("X".into()));
        assert!(e.to_string().contains("second-order variable used before quantification"));
        let e = parse_formula("forall p in S. a@q", &aps(&["a"])).unwrap_err();
        assert_eq!(e, FormulaError::UnboundTraceVar("q".into()));
        let e = parse_formula("forall p in S. b@p", &aps(&["a"])).unwrap_err();
        assert_eq!(e, FormulaError::UnknownProp("b".into()));
    }

    #[test]
    fn greatest_is_rejected() {
        let text = "forall p in S. fix X max { p in X }. forall q in X. a@q";
        let e = parse_formula(text, &aps(&["a"])).unwrap_err();
        assert!(e.to_string().contains("unsupported: ⋏"));
        let raw = parse_formula_unchecked(text, &aps(&["a"])).unwrap();
        let raw = desugar_membership(&raw).unwrap();
        assert_eq!(validate_fragment(&raw).len(), 1);
    }

    #[test]
    fn existential_premise_is_one_diagnostic() {
        let text = "forall p in S. fix X min { forall q in A. exists r in S. G eq(q,r;a) => q in X }. forall q in X. a@q";
        let raw = parse_formula_unchecked(text, &aps(&["a"])).unwrap();
        assert_eq!(validate_fragment(&raw).len(), 1);
    }

    #[test]
    fn body_membership_desugars() {
        let text = "forall p in S. fix X min { p in X }. p in X";
        let f = parse_formula(text, &aps(&["a"])).unwrap();
        let last = f.fo_quants().last().cloned().unwrap().clone();
        assert_eq!(last.quant, Quant::Exists);
        assert_eq!(last.domain, SoRef::User("X".into()));
        assert_eq!(f.body, Ltl::globally(Ltl::eq(&last.var, "p", &["a"])));
        let neg = parse_formula("forall p in S. fix X min { p in X }. !(p in X)", &aps(&["a"])).unwrap();
        assert_eq!(neg.fo_quants().last().unwrap().quant, Quant::Forall);
    }

    #[test]
    fn membership_under_temporal_rejected() {
        let e = parse_formula("forall p in S. fix X min { p in X }. G (p in X)", &aps(&["a"])).unwrap_err();
        assert!(matches!(e, FormulaError::MembershipUnderTemporal { .. }));
        let e = parse_formula("forall p in S. fix X min { p in X }. (p in X) <-> a@p", &aps(&["a"])).unwrap_err();
        assert!(matches!(e, FormulaError::MembershipInIff { .. }));
    }

    #[test]
    fn printing_round_trips() {
        let f = parse_formula(CK, &aps(&["a", "b", "c", "d"])).unwrap();
        let again = parse_formula(&f.to_string(), &aps(&["a", "b", "c", "d"])).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn comments_and_optional_dots() {
        let text = "# header\nforall p in S. # quantifier\n fix X min { forall q in X forall r in S G eq(q,r;a) => r in X ; p in X }. forall s in X. a@s";
        assert!(parse_formula(text, &aps(&["a"])).is_ok());
    }
}
