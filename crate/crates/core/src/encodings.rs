//! Generators for the benchmark families. Every instance is produced as
//! text first and parsed back, so files and in-memory values agree.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use crate::formula::{parse_formula, Formula, Ltl};
use crate::system::{parse_system, TransitionSystem};

/// A system together with one formula over its propositions.
#[derive(Clone, Debug)]
pub struct Instance {
    pub name: String,
    pub system: TransitionSystem,
    pub formula_text: String,
    pub formula: Formula,
}

impl Instance {
    fn build(name: String, system_text: &str, formula_text: String) -> Instance {
        let system = parse_system(system_text).expect("generated system parses");
        let formula = parse_formula(&formula_text, system.aps())
            .unwrap_or_else(|e| panic!("generated formula `{name}` is invalid: {e}"));
        Instance { name, system, formula_text, formula }
    }

    /// Writes `<name>.sys` and `<name>.hf` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let sys = dir.join(format!("{}.sys", self.name));
        let hf = dir.join(format!("{}.hf", self.name));
        fs::write(&sys, self.system.to_text())?;
        fs::write(&hf, format!("{}\n", self.formula_text))?;
        Ok((sys, hf))
    }
}

fn join(parts: impl IntoIterator<Item = String>, sep: &str) -> String {
    parts.into_iter().collect::<Vec<_>>().join(sep)
}

fn next_n(n: usize, body: &str) -> String {
    format!("{}{body}", "X ".repeat(n))
}

fn eq(p: &str, q: &str, props: &[String]) -> String {
    format!("eq({p},{q};{})", props.join(","))
}

fn system_text(aps: &[String], init: &[usize], states: &[(Vec<&str>, Vec<usize>)]) -> String {
    let mut s = format!("aps: {}\ninit: {}\nstates:\n", aps.join(" "), join(init.iter().map(usize::to_string), " "));
    for (i, (label, succ)) in states.iter().enumerate() {
        let _ = writeln!(s, "{i} {{{}}} -> {}", label.join(" "), join(succ.iter().map(usize::to_string), " "));
    }
    s
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Muddy children with `n` children observed for `m` rounds.
///
/// States are `(world, round)` for every nonempty set of muddy children;
/// `m<i>` marks child `i` muddy and `f<i>` that it has stepped forward.
/// With `k` muddy children, muddy ones step forward in round `k`, clean
/// ones in round `k + 1`.
pub fn gen_muddy_children(n: usize, m: usize) -> Instance {
    assert!(n >= 2 && m >= 1 && n <= 8);
    let mut aps: Vec<String> = (1..=n).map(|i| format!("m{i}")).collect();
    aps.extend((1..=n).map(|i| format!("f{i}")));
    let rounds = n + 2;
    let mut states: Vec<(Vec<&str>, Vec<usize>)> = Vec::new();
    let mut init = Vec::new();
    for world in 1u32..(1 << n) {
        let k = world.count_ones() as usize;
        let base = states.len();
        init.push(base);
        for r in 0..rounds {
            let mut label: Vec<&str> = Vec::new();
            for i in 0..n {
                if world >> i & 1 == 1 {
                    label.push(&aps[i]);
                }
            }
            for i in 0..n {
                let muddy = world >> i & 1 == 1;
                if r >= 1 && ((muddy && r >= k) || (!muddy && r > k)) {
                    label.push(&aps[n + i]);
                }
            }
            states.push((label, vec![base + (r + 1).min(rounds - 1)]));
        }
    }
    let sys = system_text(&aps, &init, &states);
    let observe = join(
        (0..n).map(|i| {
            let seen: Vec<String> = aps.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a.clone()).collect();
            let e = eq("q1", "q2", &seen);
            format!("({})", join((0..m).map(|t| next_n(t, &e)), " & "))
        }),
        " | ",
    );
    let agree = join((1..=n).map(|i| format!("(m{i}@r1 <-> m{i}@r2)")), " & ");
    let f = format!(
        "forall p in S. fix X min {{ p in X; forall q1 in X. forall q2 in S. {observe} => q2 in X }}. \
         forall r1 in X. forall r2 in X. {agree}"
    );
    Instance::build(format!("muddy_{n}_{m}"), &sys, f)
}

/// The four-state system where `a` repeats, then `b` or `c` leads into `d`.
pub fn ck_system() -> TransitionSystem {
    parse_system(&ck_system_text()).expect("fixed system")
}

fn ck_system_text() -> String {
    let aps = names(&["a", "b", "c", "d"]);
    system_text(&aps, &[0], &[(vec!["a"], vec![0, 1, 2, 3]), (vec!["b"], vec![2, 3]), (vec!["d"], vec![2]), (vec!["c"], vec![3, 2])])
}

/// Common knowledge among two agents observing `{a,d}` and `{c,d}`,
/// started from `a^n d^ω`. Returns the instances for "`a` holds
/// initially" and "`a` holds in the second step".
pub fn gen_ck_chain(n: usize) -> (Instance, Instance) {
    assert!(n >= 1);
    let sys = ck_system_text();
    let aps = names(&["a", "b", "c", "d"]);
    let pre = format!("{} & {}", join((0..n).map(|i| format!("({})", next_n(i, "a@p"))), " & "), next_n(n, "G d@p"));
    let obs = format!("G {} | G {}", eq("q1", "q2", &names(&["a", "d"])), eq("q1", "q2", &names(&["c", "d"])));
    let prefix = format!(
        "forall p in S. fix X min {{ forall q in A. {pre} & G {} => q in X; \
         forall q1 in X. forall q2 in S. {obs} => q2 in X }}. forall r in X.",
        eq("q", "p", &aps)
    );
    let first = Instance::build(format!("ck_a_{n}"), &sys, format!("{prefix} a@r"));
    let second = Instance::build(format!("ck_next_a_{n}"), &sys, format!("{prefix} X a@r"));
    (first, second)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdProgram {
    /// `l := 0; if h then o := 1 else o := o + 1`
    TSyn,
    /// `o := 0; if h then o := 1 else { r := o + 1; o := r }`
    TAsyn,
    /// `o := 0; if h then o := 1 else { skip; o := 1 }; o := 0`
    Q1,
}

impl OdProgram {
    pub fn name(self) -> &'static str {
        match self {
            OdProgram::TSyn => "tsyn",
            OdProgram::TAsyn => "tasyn",
            OdProgram::Q1 => "q1",
        }
    }

    /// One state per location and branch; `h` is the secret, `o` the output.
    fn system_text(self) -> String {
        let aps = names(&["h", "o"]);
        // per branch: the output after each location; the last one loops
        let (high, low): (&[bool], &[bool]) = match self {
            OdProgram::TSyn => (&[false, false, true], &[false, false, true]),
            OdProgram::TAsyn => (&[false, false, true], &[false, false, false, true]),
            OdProgram::Q1 => (&[false, false, true, false], &[false, false, false, true, false]),
        };
        let mut states: Vec<(Vec<&str>, Vec<usize>)> = Vec::new();
        let mut init = Vec::new();
        for (secret, outs) in [(true, high), (false, low)] {
            let base = states.len();
            init.push(base);
            for (i, &o) in outs.iter().enumerate() {
                let mut label = Vec::new();
                if secret {
                    label.push("h");
                }
                if o {
                    label.push("o");
                }
                let next = if i + 1 < outs.len() { base + i + 1 } else { base + i };
                states.push((label, vec![next]));
            }
        }
        system_text(&aps, &init, &states)
    }
}

/// `to` is `from` with at most one letter repeated.
pub fn stutter_step(from: &str, to: &str, aps: &[String]) -> String {
    let same = eq(from, to, aps);
    let shift = join(aps.iter().map(|a| format!("({a}@{from} <-> X {a}@{to})")), " & ");
    format!("{same} W ({same} & G ({shift}))")
}

/// Synchronous and stutter-tolerant observational determinism on `o`.
pub fn gen_async_od(p: OdProgram) -> (Instance, Instance) {
    let sys = p.system_text();
    let aps = names(&["h", "o"]);
    let sync = "forall p1 in S. forall p2 in S. G (o@p1 <-> o@p2)".to_string();
    let closure = |x: &str, p: &str| {
        format!("fix {x} min {{ {p} in {x}; forall q in {x}. forall q2 in A. {} => q2 in {x} }}", stutter_step("q", "q2", &aps))
    };
    let asyn = format!(
        "forall p1 in S. forall p2 in S. {}. {}. exists r1 in X1. exists r2 in X2. G (o@r1 <-> o@r2)",
        closure("X1", "p1"),
        closure("X2", "p2")
    );
    (
        Instance::build(format!("od_{}", p.name()), &sys, sync),
        Instance::build(format!("od_asyn_{}", p.name()), &sys, asyn),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mazurkiewicz {
    /// `a` occurs at most once in every reachable trace.
    SwapA,
    /// Same, closing under two swaps per step.
    SwapATwice,
    /// Some reachable trace has `a` at position `n`.
    SwapAN(usize),
    /// Every reachable trace has `a` within the first `n` positions (false).
    SwapAViolation(usize),
}

/// `to` is `from` with one adjacent `{a}{}` or `{}{a}` pair swapped, or equal.
pub fn swap_step(from: &str, to: &str) -> String {
    let same = format!("eq({from},{to};a)");
    let pair = |x: bool| {
        let lit = |v: &str, pos: bool| if pos { format!("a@{v}") } else { format!("!a@{v}") };
        format!(
            "({} & {} & X ({} & {}) & X X G {same})",
            lit(from, x),
            lit(to, !x),
            lit(from, !x),
            lit(to, x)
        )
    };
    format!("{same} W ({} | {})", pair(true), pair(false))
}

fn mazurkiewicz_system() -> String {
    system_text(&names(&["a"]), &[0], &[(vec!["a"], vec![1]), (vec![], vec![1])])
}

pub fn gen_mazurkiewicz(v: Mazurkiewicz) -> Instance {
    let sys = mazurkiewicz_system();
    let once = "forall r in X. G (a@r -> X G !a@r)".to_string();
    let single = format!("forall q1 in X. forall q2 in A. {} => q2 in X", swap_step("q1", "q2"));
    let (name, rule, body) = match v {
        Mazurkiewicz::SwapA => ("swap_a".to_string(), single, once),
        Mazurkiewicz::SwapATwice => (
            "swap_a_twice".to_string(),
            format!(
                "forall q1 in X. forall q2 in A. forall q3 in A. ({}) & ({}) => q3 in X",
                swap_step("q1", "q2"),
                swap_step("q2", "q3")
            ),
            once,
        ),
        Mazurkiewicz::SwapAN(n) => (format!("swap_a_{n}"), single, format!("exists r in X. {}", next_n(n, "a@r"))),
        Mazurkiewicz::SwapAViolation(n) => (
            format!("swap_a_violation_{n}"),
            single,
            format!("forall r in X. {}", join((0..n).map(|i| format!("({})", next_n(i, "a@r"))), " | ")),
        ),
    };
    let f = format!("forall p in S. fix X min {{ p in X; {rule} }}. {body}");
    Instance::build(name, &sys, f)
}

/// The system producing every trace over `aps`.
pub fn all_traces_system(aps: &[String]) -> TransitionSystem {
    let k = aps.len();
    assert!(k <= 10);
    let n = 1usize << k;
    let labels: Vec<Vec<&str>> = (0..n).map(|s| (0..k).filter(|&p| s >> p & 1 == 1).map(|p| aps[p].as_str()).collect()).collect();
    let states: Vec<(Vec<&str>, Vec<usize>)> = labels.into_iter().map(|l| (l, (0..n).collect())).collect();
    parse_system(&system_text(aps, &(0..n).collect::<Vec<_>>(), &states)).expect("generated system parses")
}

/// Regular model checking: the least set containing the `init` traces
/// (over `x`) and closed under `step` (from `x` to `y`) avoids `bad` (over `x`).
pub fn gen_regular_mc(aps: &[String], init: &Ltl, step: &Ltl, bad: &Ltl) -> Instance {
    let sys = all_traces_system(aps).to_text();
    let ren = |e: &Ltl, map: &[(&str, &str)]| {
        e.rename(&|v: &str| map.iter().find(|(a, _)| *a == v).map_or(v.to_string(), |(_, b)| b.to_string()))
    };
    let f = format!(
        "fix X min {{ forall q in A. {} => q in X; forall q1 in X. forall q2 in A. {} => q2 in X }}. forall r in X. !{}",
        ren(init, &[("x", "q")]),
        ren(step, &[("x", "q1"), ("y", "q2")]),
        ren(bad, &[("x", "r")])
    );
    Instance::build("regular_mc".to_string(), &sys, f)
}
