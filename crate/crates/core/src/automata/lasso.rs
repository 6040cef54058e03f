use std::fmt;

use crate::guard::ZipLetter;

/// An ultimately periodic word `prefix · cycle^ω` over a zipped alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    arity: usize,
    prefix: Vec<ZipLetter>,
    cycle: Vec<ZipLetter>,
}

impl LassoWord {
    /// Panics if `cycle` is empty or a letter has the wrong number of tracks.
    pub fn new(arity: usize, prefix: Vec<ZipLetter>, cycle: Vec<ZipLetter>) -> Self {
        assert!(!cycle.is_empty(), "lasso cycle must be nonempty");
        assert!(prefix.iter().chain(cycle.iter()).all(|l| l.len() == arity), "letter arity mismatch");
        LassoWord { arity, prefix, cycle }
    }

    /// A single-track word from per-position proposition masks.
    pub fn single(prefix: &[u64], cycle: &[u64]) -> Self {
        LassoWord::new(1, prefix.iter().map(|&m| vec![m]).collect(), cycle.iter().map(|&m| vec![m]).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn prefix(&self) -> &[ZipLetter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[ZipLetter] {
        &self.cycle
    }

    /// Total number of distinct positions (`|prefix| + |cycle|`).
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn letter(&self, i: usize) -> &ZipLetter {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in the finite lasso graph.
    pub fn next_pos(&self, i: usize) -> usize {
        if i + 1 < self.span() {
            i + 1
        } else {
            self.prefix.len()
        }
    }

    /// The word restricted to a single track.
    pub fn track(&self, t: usize) -> LassoWord {
        let pick = |l: &ZipLetter| vec![l[t]];
        LassoWord {
            arity: 1,
            prefix: self.prefix.iter().map(pick).collect(),
            cycle: self.cycle.iter().map(pick).collect(),
        }
        .canonical()
    }

    /// Keeps the listed tracks, in the given order.
    pub fn select(&self, tracks: &[usize]) -> LassoWord {
        let pick = |l: &ZipLetter| tracks.iter().map(|&t| l[t]).collect::<Vec<_>>();
        LassoWord {
            arity: tracks.len(),
            prefix: self.prefix.iter().map(pick).collect(),
            cycle: self.cycle.iter().map(pick).collect(),
        }
    }

    /// Zips words of possibly different shapes into one multi-track word.
    pub fn zip(words: &[LassoWord]) -> LassoWord {
        let arity: usize = words.iter().map(|w| w.arity).sum();
        let p = words.iter().map(|w| w.prefix.len()).max().unwrap_or(0);
        let c = words.iter().map(|w| w.cycle.len()).fold(1usize, lcm);
        let at = |i: usize| -> ZipLetter { words.iter().flat_map(|w| w.letter(i).iter().copied()).collect() };
        LassoWord { arity, prefix: (0..p).map(at).collect(), cycle: (p..p + c).map(at).collect() }
    }

    /// Minimal representation: primitive cycle, shortest prefix.
    pub fn canonical(&self) -> LassoWord {
        let mut cycle = self.cycle.clone();
        let n = cycle.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| cycle[i] == cycle[i % d]) {
                cycle.truncate(d);
                break;
            }
        }
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last == cycle[cycle.len() - 1] {
                prefix.pop();
                cycle.rotate_right(1);
            } else {
                break;
            }
        }
        LassoWord { arity: self.arity, prefix, cycle }
    }

    /// Whether both words denote the same infinite word.
    pub fn same_word(&self, other: &LassoWord) -> bool {
        self.arity == other.arity && self.canonical() == other.canonical()
    }

    /// The finite word of the first `len` positions.
    pub fn take(&self, len: usize) -> Vec<ZipLetter> {
        (0..len).map(|i| self.letter(i).clone()).collect()
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl fmt::Debug for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ls: &[ZipLetter]| {
            ls.iter()
                .map(|l| {
                    let tracks: Vec<String> = l.iter().map(|m| format!("{m:b}")).collect();
                    format!("[{}]", tracks.join(","))
                })
                .collect::<Vec<_>>()
                .join("")
        };
        write!(f, "{}({})^w", show(&self.prefix), show(&self.cycle))
    }
}
