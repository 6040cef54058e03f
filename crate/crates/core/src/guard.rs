//! Symbolic edge guards.
//!
//! A [`Guard`] is a reduced ordered BDD over literals `(prop, track)` of a
//! zipped letter. Each guard owns its node table, stored in post-order from
//! the root, so structurally equal guards compare equal and hash equally.
//! Variables are ordered prop-major (`prop * MAX_TRACKS + track`), which keeps
//! cross-track equalities linear in size and makes every order-preserving
//! track remapping a plain relabeling.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

/// Upper bound on the number of tracks an automaton may have.
pub const MAX_TRACKS: u32 = 64;

const FALSE: u32 = 0;
const TRUE: u32 = 1;

/// A BDD variable: one proposition on one track.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(prop: usize, track: usize) -> Self {
        assert!((track as u32) < MAX_TRACKS, "track index {track} out of range");
        Var(prop as u32 * MAX_TRACKS + track as u32)
    }

    pub fn prop(self) -> usize {
        (self.0 / MAX_TRACKS) as usize
    }

    pub fn track(self) -> usize {
        (self.0 % MAX_TRACKS) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: Var,
    lo: u32,
    hi: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Guard {
    nodes: Arc<[Node]>,
    root: u32,
}

/// One position of a zipped word: a bitmask of true propositions per track.
pub type ZipLetter = Vec<u64>;

struct Builder {
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
}

impl Builder {
    fn new() -> Self {
        Builder { nodes: Vec::new(), unique: HashMap::new() }
    }

    fn mk(&mut self, var: Var, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32 + 2;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    fn node(&self, id: u32) -> Node {
        self.nodes[(id - 2) as usize]
    }

    fn var_of(&self, id: u32) -> Option<Var> {
        if id < 2 {
            None
        } else {
            Some(self.node(id).var)
        }
    }

    /// Copies a guard into this builder, returning its root id here.
    fn import(&mut self, g: &Guard) -> u32 {
        self.import_mapped(g, |v| v)
    }

    fn import_mapped(&mut self, g: &Guard, map: impl Fn(Var) -> Var) -> u32 {
        if g.root < 2 {
            return g.root;
        }
        let mut ids = Vec::with_capacity(g.nodes.len());
        let tr = |ids: &Vec<u32>, x: u32| if x < 2 { x } else { ids[(x - 2) as usize] };
        for n in g.nodes.iter() {
            let lo = tr(&ids, n.lo);
            let hi = tr(&ids, n.hi);
            let id = self.mk(map(n.var), lo, hi);
            ids.push(id);
        }
        tr(&ids, g.root)
    }

    fn export(&self, root: u32) -> Guard {
        if root < 2 {
            return Guard { nodes: Arc::from(Vec::new()), root };
        }
        let mut out: Vec<Node> = Vec::new();
        let mut remap: HashMap<u32, u32> = HashMap::new();
        // iterative post-order
        let mut stack: Vec<(u32, bool)> = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if id < 2 || remap.contains_key(&id) {
                continue;
            }
            let n = self.node(id);
            if expanded {
                let m = |x: u32, remap: &HashMap<u32, u32>| if x < 2 { x } else { remap[&x] };
                let lo = m(n.lo, &remap);
                let hi = m(n.hi, &remap);
                out.push(Node { var: n.var, lo, hi });
                remap.insert(id, out.len() as u32 + 1);
            } else {
                stack.push((id, true));
                stack.push((n.hi, false));
                stack.push((n.lo, false));
            }
        }
        let root = remap[&root];
        Guard { nodes: Arc::from(out), root }
    }

    fn apply(&mut self, op: Op, a: u32, b: u32, memo: &mut HashMap<(u32, u32), u32>) -> u32 {
        match op {
            Op::And => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE {
                    return b;
                }
                if b == TRUE || a == b {
                    return a;
                }
            }
            Op::Or => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE || a == b {
                    return a;
                }
            }
        }
        let key = if a < b { (a, b) } else { (b, a) };
        if let Some(&r) = memo.get(&key) {
            return r;
        }
        let va = self.var_of(a);
        let vb = self.var_of(b);
        let v = match (va, vb) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => unreachable!(),
        };
        let (alo, ahi) = self.cofactors(a, v);
        let (blo, bhi) = self.cofactors(b, v);
        let lo = self.apply(op, alo, blo, memo);
        let hi = self.apply(op, ahi, bhi, memo);
        let r = self.mk(v, lo, hi);
        memo.insert(key, r);
        r
    }

    fn cofactors(&self, id: u32, v: Var) -> (u32, u32) {
        if id < 2 {
            return (id, id);
        }
        let n = self.node(id);
        if n.var == v {
            (n.lo, n.hi)
        } else {
            (id, id)
        }
    }

    fn negate(&mut self, a: u32, memo: &mut HashMap<u32, u32>) -> u32 {
        if a < 2 {
            return 1 - a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.node(a);
        let lo = self.negate(n.lo, memo);
        let hi = self.negate(n.hi, memo);
        let r = self.mk(n.var, lo, hi);
        memo.insert(a, r);
        r
    }

    fn exists(&mut self, a: u32, drop: &dyn Fn(Var) -> bool, memo: &mut HashMap<u32, u32>) -> u32 {
        if a < 2 {
            return a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.node(a);
        let lo = self.exists(n.lo, drop, memo);
        let hi = self.exists(n.hi, drop, memo);
        let r = if drop(n.var) {
            let mut m = HashMap::new();
            self.apply(Op::Or, lo, hi, &mut m)
        } else {
            self.mk(n.var, lo, hi)
        };
        memo.insert(a, r);
        r
    }
}

#[derive(Clone, Copy)]
enum Op {
    And,
    Or,
}

impl Guard {
    pub fn tt() -> Self {
        Guard { nodes: Arc::from(Vec::new()), root: TRUE }
    }

    pub fn ff() -> Self {
        Guard { nodes: Arc::from(Vec::new()), root: FALSE }
    }

    pub fn lit(var: Var, positive: bool) -> Self {
        let (lo, hi) = if positive { (FALSE, TRUE) } else { (TRUE, FALSE) };
        Guard { nodes: Arc::from(vec![Node { var, lo, hi }]), root: 2 }
    }

    pub fn is_false(&self) -> bool {
        self.root == FALSE
    }

    pub fn is_true(&self) -> bool {
        self.root == TRUE
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn binary(&self, other: &Guard, op: Op) -> Guard {
        match op {
            Op::And => {
                if self.is_false() || other.is_true() {
                    return self.clone();
                }
                if other.is_false() || self.is_true() {
                    return other.clone();
                }
            }
            Op::Or => {
                if self.is_true() || other.is_false() {
                    return self.clone();
                }
                if other.is_true() || self.is_false() {
                    return other.clone();
                }
            }
        }
        if self == other {
            return self.clone();
        }
        let mut b = Builder::new();
        let x = b.import(self);
        let y = b.import(other);
        let mut memo = HashMap::new();
        let r = b.apply(op, x, y, &mut memo);
        b.export(r)
    }

    pub fn and(&self, other: &Guard) -> Guard {
        self.binary(other, Op::And)
    }

    pub fn or(&self, other: &Guard) -> Guard {
        self.binary(other, Op::Or)
    }

    pub fn not(&self) -> Guard {
        if self.root < 2 {
            return Guard { nodes: self.nodes.clone(), root: 1 - self.root };
        }
        let mut b = Builder::new();
        let x = b.import(self);
        let mut memo = HashMap::new();
        let r = b.negate(x, &mut memo);
        b.export(r)
    }

    pub fn implies(&self, other: &Guard) -> bool {
        self.and(&other.not()).is_false()
    }

    pub fn intersects(&self, other: &Guard) -> bool {
        !self.and(other).is_false()
    }

    /// Existentially quantifies every variable for which `drop` holds.
    pub fn exists(&self, drop: impl Fn(Var) -> bool) -> Guard {
        if self.root < 2 || !self.nodes.iter().any(|n| drop(n.var)) {
            return self.clone();
        }
        let mut b = Builder::new();
        let x = b.import(self);
        let mut memo = HashMap::new();
        let r = b.exists(x, &drop, &mut memo);
        b.export(r)
    }

    /// Relabels tracks. `map` must be strictly increasing on the tracks that
    /// occur in the guard.
    pub fn remap_tracks(&self, map: impl Fn(usize) -> usize) -> Guard {
        if self.root < 2 {
            return self.clone();
        }
        let nodes: Vec<Node> = self
            .nodes
            .iter()
            .map(|n| Node { var: Var::new(n.var.prop(), map(n.var.track())), lo: n.lo, hi: n.hi })
            .collect();
        debug_assert!({
            let mut b = Builder::new();
            let g = Guard { nodes: Arc::from(nodes.clone()), root: self.root };
            let r = b.import(&g);
            b.export(r) == g
        });
        Guard { nodes: Arc::from(nodes), root: self.root }
    }

    /// Largest track index mentioned, if any.
    pub fn max_track(&self) -> Option<usize> {
        self.nodes.iter().map(|n| n.var.track()).max()
    }

    pub fn eval(&self, letter: &[u64]) -> bool {
        let mut id = self.root;
        while id >= 2 {
            let n = self.nodes[(id - 2) as usize];
            let bit = letter.get(n.var.track()).map(|w| (w >> n.var.prop()) & 1 == 1).unwrap_or(false);
            id = if bit { n.hi } else { n.lo };
        }
        id == TRUE
    }

    /// A satisfying letter over `arity` tracks, preferring `false` for every
    /// variable. Deterministic.
    pub fn pick(&self, arity: usize) -> Option<ZipLetter> {
        if self.is_false() {
            return None;
        }
        let mut letter = vec![0u64; arity];
        let mut id = self.root;
        while id >= 2 {
            let n = self.nodes[(id - 2) as usize];
            if n.lo != FALSE {
                id = n.lo;
            } else {
                letter[n.var.track()] |= 1 << n.var.prop();
                id = n.hi;
            }
        }
        Some(letter)
    }

    /// The guard satisfied by exactly `letter` over `arity` tracks and
    /// `props` propositions per track.
    pub fn minterm(letter: &[u64], arity: usize, props: usize) -> Guard {
        let mut b = Builder::new();
        let mut vars: Vec<(Var, bool)> = Vec::new();
        for t in 0..arity {
            for p in 0..props {
                vars.push((Var::new(p, t), (letter[t] >> p) & 1 == 1));
            }
        }
        vars.sort();
        let mut id = TRUE;
        for &(v, val) in vars.iter().rev() {
            id = if val { b.mk(v, FALSE, id) } else { b.mk(v, id, FALSE) };
        }
        b.export(id)
    }

    /// Splits the letter space into blocks on which every input guard is
    /// either fully true or fully false. Returns each block with the indices
    /// of the inputs that hold on it. Empty blocks are dropped.
    pub fn partition(guards: &[Guard]) -> Vec<(Guard, Vec<usize>)> {
        let mut blocks: Vec<(Guard, Vec<usize>)> = vec![(Guard::tt(), Vec::new())];
        for (i, g) in guards.iter().enumerate() {
            if g.is_false() {
                continue;
            }
            let ng = g.not();
            let mut next = Vec::with_capacity(blocks.len() * 2);
            for (blk, members) in blocks {
                let inside = blk.and(g);
                if inside.is_false() {
                    next.push((blk, members));
                    continue;
                }
                let outside = blk.and(&ng);
                let mut with = members.clone();
                with.push(i);
                next.push((inside, with));
                if !outside.is_false() {
                    next.push((outside, members));
                }
            }
            blocks = next;
        }
        blocks
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, name: &dyn Fn(Var) -> String) -> fmt::Result {
        // Sum-of-cubes rendering along BDD paths.
        if self.is_true() {
            return write!(f, "t");
        }
        if self.is_false() {
            return write!(f, "f");
        }
        let mut cubes: Vec<String> = Vec::new();
        let mut path: Vec<String> = Vec::new();
        self.paths(self.root, &mut path, &mut cubes, name);
        let many = cubes.len() > 1;
        let parts: Vec<String> = cubes
            .into_iter()
            .map(|c| if many && c.contains('&') { format!("({c})") } else { c })
            .collect();
        write!(f, "{}", parts.join(" | "))
    }

    fn paths(&self, id: u32, path: &mut Vec<String>, out: &mut Vec<String>, name: &dyn Fn(Var) -> String) {
        if id == FALSE {
            return;
        }
        if id == TRUE {
            out.push(if path.is_empty() { "t".to_string() } else { path.join(" & ") });
            return;
        }
        let n = self.nodes[(id - 2) as usize];
        path.push(format!("!{}", name(n.var)));
        self.paths(n.lo, path, out, name);
        path.pop();
        path.push(name(n.var));
        self.paths(n.hi, path, out, name);
        path.pop();
    }

    /// Renders the guard as a sum of cubes with literals named by `name`.
    pub fn render(&self, name: impl Fn(Var) -> String) -> String {
        struct W<'a>(&'a Guard, &'a dyn Fn(Var) -> String);
        impl fmt::Display for W<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        W(self, &name).to_string()
    }
}

impl fmt::Debug for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &|v: Var| format!("p{}_{}", v.prop(), v.track()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: usize, t: usize) -> Guard {
        Guard::lit(Var::new(p, t), true)
    }

    #[test]
    fn canonical_equality() {
        let a = v(0, 0).and(&v(1, 1));
        let b = v(1, 1).and(&v(0, 0));
        assert_eq!(a, b);
        let c = a.or(&a.not());
        assert!(c.is_true());
        assert!(a.and(&a.not()).is_false());
    }

    #[test]
    fn exists_drops_track() {
        let g = v(0, 0).and(&v(0, 1).not());
        let e = g.exists(|x| x.track() == 1);
        assert_eq!(e, v(0, 0));
    }

    #[test]
    fn eval_and_pick() {
        let g = v(0, 0).and(&v(2, 1).not()).or(&v(1, 0));
        let l = g.pick(2).unwrap();
        assert!(g.eval(&l));
        assert!(g.eval(&[0b010, 0]));
        assert!(!g.eval(&[0b000, 0]));
        assert!(Guard::ff().pick(1).is_none());
    }

    #[test]
    fn remap_preserves_semantics() {
        let g = v(0, 0).and(&v(0, 1)).or(&v(1, 1).not());
        let r = g.remap_tracks(|t| if t == 0 { 0 } else { 3 });
        for bits in 0..16u64 {
            let l0 = vec![bits & 3, (bits >> 2) & 3];
            let l1 = vec![bits & 3, 0, 0, (bits >> 2) & 3];
            assert_eq!(g.eval(&l0), r.eval(&l1));
        }
    }

    #[test]
    fn partition_is_exhaustive_and_disjoint() {
        let gs = vec![v(0, 0), v(1, 0).or(&v(0, 0).not()), Guard::ff()];
        let parts = Guard::partition(&gs);
        let mut union = Guard::ff();
        for (i, (b, members)) in parts.iter().enumerate() {
            assert!(!b.is_false());
            for (j, (c, _)) in parts.iter().enumerate() {
                if i != j {
                    assert!(!b.intersects(c));
                }
            }
            for (k, g) in gs.iter().enumerate() {
                if members.contains(&k) {
                    assert!(b.implies(g));
                } else {
                    assert!(!b.intersects(g));
                }
            }
            union = union.or(b);
        }
        assert!(union.is_true());
    }

    #[test]
    fn minterm_matches_only_its_letter() {
        let m = Guard::minterm(&[0b01, 0b10], 2, 2);
        for a in 0..4u64 {
            for b in 0..4u64 {
                assert_eq!(m.eval(&[a, b]), a == 1 && b == 2);
            }
        }
    }
}
