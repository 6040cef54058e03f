//! Finite transition systems and their trace automata.

use std::fmt::Write;

use thiserror::Error;

use crate::automata::Nba;
use crate::guard::Guard;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("state {state} has successor {succ}, but there are only {count} states")]
    DanglingSuccessor { state: usize, succ: usize, count: usize },
    #[error("state {0} has no successors")]
    NoSuccessors(usize),
    #[error("no initial state")]
    NoInitial,
    #[error("state {0} is missing or declared twice")]
    BadStateIndex(usize),
    #[error("initial state {0} does not exist")]
    BadInitial(usize),
    #[error("state {state} is labelled with undeclared proposition `{prop}`")]
    UnknownProp { state: usize, prop: String },
    #[error("too many propositions ({0}, limit 64)")]
    TooManyProps(usize),
}

/// A Kripke structure with a total transition relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionSystem {
    aps: Vec<String>,
    initial: Vec<usize>,
    /// Bitmask of true propositions per state.
    labels: Vec<u64>,
    succ: Vec<Vec<usize>>,
}

impl TransitionSystem {
    /// Validates and builds a system.
    pub fn new(
        aps: Vec<String>,
        initial: Vec<usize>,
        labels: Vec<u64>,
        succ: Vec<Vec<usize>>,
    ) -> Result<Self, SystemError> {
        if aps.len() > 64 {
            return Err(SystemError::TooManyProps(aps.len()));
        }
        let n = labels.len();
        assert_eq!(n, succ.len(), "labels and successor lists differ in length");
        if initial.is_empty() {
            return Err(SystemError::NoInitial);
        }
        if let Some(&i) = initial.iter().find(|&&i| i >= n) {
            return Err(SystemError::BadInitial(i));
        }
        for (s, out) in succ.iter().enumerate() {
            if out.is_empty() {
                return Err(SystemError::NoSuccessors(s));
            }
            if let Some(&t) = out.iter().find(|&&t| t >= n) {
                return Err(SystemError::DanglingSuccessor { state: s, succ: t, count: n });
            }
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(TransitionSystem { aps, initial, labels, succ })
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, s: usize) -> u64 {
        self.labels[s]
    }

    pub fn successors(&self, s: usize) -> &[usize] {
        &self.succ[s]
    }

    /// Automaton accepting exactly the traces of the system; one automaton
    /// state per system state, all accepting.
    pub fn to_nba(&self) -> Nba {
        let props = self.aps.len();
        let edges = (0..self.state_count())
            .map(|s| {
                let g = Guard::minterm(&[self.labels[s]], 1, props);
                self.succ[s].iter().map(|&t| (g.clone(), t)).collect()
            })
            .collect();
        Nba::from_parts(1, props, self.initial.clone(), vec![true; self.state_count()], edges)
    }

    /// Serializes in the text format accepted by [`parse_system`].
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "aps: {}", self.aps.join(" "));
        let init: Vec<String> = self.initial.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "init: {}", init.join(" "));
        let _ = writeln!(s, "states:");
        for q in 0..self.state_count() {
            let label: Vec<&str> = (0..self.aps.len())
                .filter(|&p| (self.labels[q] >> p) & 1 == 1)
                .map(|p| self.aps[p].as_str())
                .collect();
            let succ: Vec<String> = self.succ[q].iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{q} {{{}}} -> {}", label.join(" "), succ.join(" "));
        }
        s
    }
}

/// The automaton over one track accepting every trace.
pub fn universal_nba(props: usize) -> Nba {
    Nba::universal(1, props)
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("")
}

/// Parses the system text format:
///
/// ```text
/// aps: a b
/// init: 0
/// states:
/// 0 {a} -> 0 1
/// 1 {} -> 1
/// ```
pub fn parse_system(text: &str) -> Result<TransitionSystem, SystemError> {
    let syntax = |line: usize, msg: &str| SystemError::Syntax { line, msg: msg.to_string() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, strip_comment(l).trim())).filter(|(_, l)| !l.is_empty());
    let (ln, l) = lines.next().ok_or_else(|| syntax(1, "missing `aps:` line"))?;
    let aps: Vec<String> = l
        .strip_prefix("aps:")
        .ok_or_else(|| syntax(ln, "expected `aps:`"))?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let (ln, l) = lines.next().ok_or_else(|| syntax(ln + 1, "missing `init:` line"))?;
    let initial = l
        .strip_prefix("init:")
        .ok_or_else(|| syntax(ln, "expected `init:`"))?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|_| syntax(ln, &format!("bad state index `{t}`"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (ln, l) = lines.next().ok_or_else(|| syntax(ln + 1, "missing `states:` line"))?;
    if l != "states:" {
        return Err(syntax(ln, "expected `states:`"));
    }
    let mut rows: Vec<Option<(u64, Vec<usize>)>> = Vec::new();
    for (ln, l) in lines {
        let (head, tail) = l.split_once("->").ok_or_else(|| syntax(ln, "expected `->`"))?;
        let open = head.find('{').ok_or_else(|| syntax(ln, "expected `{`"))?;
        let close = head.find('}').ok_or_else(|| syntax(ln, "expected `}`"))?;
        let idx: usize = head[..open].trim().parse().map_err(|_| syntax(ln, "bad state index"))?;
        if !head[close + 1..].trim().is_empty() {
            return Err(syntax(ln, "unexpected text after label"));
        }
        let mut label = 0u64;
        for p in head[open + 1..close].split(|c: char| c.is_whitespace() || c == ',').filter(|p| !p.is_empty()) {
            match aps.iter().position(|a| a == p) {
                Some(i) => label |= 1 << i,
                None => return Err(SystemError::UnknownProp { state: idx, prop: p.to_string() }),
            }
        }
        let succ = tail
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| syntax(ln, &format!("bad successor `{t}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        if rows.len() <= idx {
            rows.resize(idx + 1, None);
        }
        if rows[idx].is_some() {
            return Err(SystemError::BadStateIndex(idx));
        }
        rows[idx] = Some((label, succ));
    }
    let mut labels = Vec::with_capacity(rows.len());
    let mut succ = Vec::with_capacity(rows.len());
    for (i, r) in rows.into_iter().enumerate() {
        let (l, s) = r.ok_or(SystemError::BadStateIndex(i))?;
        labels.push(l);
        succ.push(s);
    }
    TransitionSystem::new(aps, initial, labels, succ)
}
