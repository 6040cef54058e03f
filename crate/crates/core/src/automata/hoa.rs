use std::fmt::Write;

use super::Nba;

/// HOA-like rendering: one `State:` block per state, edges labelled with
/// guards over `prop_track` literals.
pub(super) fn to_hoa(a: &Nba, prop_names: &[String]) -> String {
    let name = |v: crate::guard::Var| {
        let p = prop_names.get(v.prop()).cloned().unwrap_or_else(|| format!("p{}", v.prop()));
        format!("{p}_{}", v.track())
    };
    let mut s = String::new();
    let _ = writeln!(s, "HOA: v1");
    let _ = writeln!(s, "States: {}", a.state_count());
    for i in &a.initial {
        let _ = writeln!(s, "Start: {i}");
    }
    let _ = writeln!(s, "Tracks: {}", a.arity);
    let _ = writeln!(s, "Acceptance: 1 Inf(0)");
    let _ = writeln!(s, "acc-name: Buchi");
    let _ = writeln!(s, "--BODY--");
    for q in 0..a.state_count() {
        let mark = if a.accepting[q] { " {0}" } else { "" };
        let _ = writeln!(s, "State: {q}{mark}");
        for (g, t) in &a.edges[q] {
            let _ = writeln!(s, "  [{}] {t}", g.render(name));
        }
    }
    let _ = writeln!(s, "--END--");
    s
}
