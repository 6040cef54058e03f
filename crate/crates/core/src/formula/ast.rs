use std::fmt;

/// Reference to a second-order variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SoRef {
    /// The traces of the system under inspection.
    System,
    /// All traces over the proposition set.
    AllTraces,
    User(String),
}

impl SoRef {
    pub fn from_name(name: &str) -> SoRef {
        match name {
            "S" => SoRef::System,
            "A" => SoRef::AllTraces,
            _ => SoRef::User(name.to_string()),
        }
    }
}

impl fmt::Display for SoRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SoRef::System => write!(f, "S"),
            SoRef::AllTraces => write!(f, "A"),
            SoRef::User(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

/// Quantifier-free temporal body over trace-indexed atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltl {
    Const(bool),
    /// `prop@var`
    Atom { prop: String, var: String },
    /// `var in set`; only present before desugaring.
    Member { var: String, set: SoRef },
    Not(Box<Ltl>),
    And(Box<Ltl>, Box<Ltl>),
    Or(Box<Ltl>, Box<Ltl>),
    Implies(Box<Ltl>, Box<Ltl>),
    Iff(Box<Ltl>, Box<Ltl>),
    Next(Box<Ltl>),
    Eventually(Box<Ltl>),
    Globally(Box<Ltl>),
    Until(Box<Ltl>, Box<Ltl>),
    WeakUntil(Box<Ltl>, Box<Ltl>),
}

impl Ltl {
    pub fn atom(prop: &str, var: &str) -> Ltl {
        Ltl::Atom { prop: prop.to_string(), var: var.to_string() }
    }

    pub fn not(a: Ltl) -> Ltl {
        Ltl::Not(Box::new(a))
    }

    pub fn and(a: Ltl, b: Ltl) -> Ltl {
        Ltl::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Iff(Box::new(a), Box::new(b))
    }

    pub fn next(a: Ltl) -> Ltl {
        Ltl::Next(Box::new(a))
    }

    pub fn eventually(a: Ltl) -> Ltl {
        Ltl::Eventually(Box::new(a))
    }

    pub fn globally(a: Ltl) -> Ltl {
        Ltl::Globally(Box::new(a))
    }

    pub fn until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::Until(Box::new(a), Box::new(b))
    }

    pub fn weak_until(a: Ltl, b: Ltl) -> Ltl {
        Ltl::WeakUntil(Box::new(a), Box::new(b))
    }

    /// `X^n a`
    pub fn next_n(n: usize, a: Ltl) -> Ltl {
        (0..n).fold(a, |acc, _| Ltl::next(acc))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn all(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts.into_iter().reduce(Ltl::and).unwrap_or(Ltl::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn any(parts: impl IntoIterator<Item = Ltl>) -> Ltl {
        parts.into_iter().reduce(Ltl::or).unwrap_or(Ltl::Const(false))
    }

    /// Agreement of two traces on `props` at the current position.
    pub fn eq(p: &str, q: &str, props: &[impl AsRef<str>]) -> Ltl {
        Ltl::all(props.iter().map(|a| Ltl::iff(Ltl::atom(a.as_ref(), p), Ltl::atom(a.as_ref(), q))))
    }

    /// Every trace variable mentioned in an atom or membership.
    pub fn trace_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |e| match e {
            Ltl::Atom { var, .. } | Ltl::Member { var, .. } => {
                if !out.contains(var) {
                    out.push(var.clone());
                }
            }
            _ => {}
        });
        out
    }

    /// Every proposition mentioned in an atom.
    pub fn props(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Ltl::Atom { prop, .. } = e {
                if !out.contains(prop) {
                    out.push(prop.clone());
                }
            }
        });
        out
    }

    pub fn has_member(&self) -> bool {
        let mut found = false;
        self.visit(&mut |e| found |= matches!(e, Ltl::Member { .. }));
        found
    }

    /// Pre-order traversal.
    pub fn visit(&self, f: &mut dyn FnMut(&Ltl)) {
        f(self);
        match self {
            Ltl::Const(_) | Ltl::Atom { .. } | Ltl::Member { .. } => {}
            Ltl::Not(a) | Ltl::Next(a) | Ltl::Eventually(a) | Ltl::Globally(a) => a.visit(f),
            Ltl::And(a, b)
            | Ltl::Or(a, b)
            | Ltl::Implies(a, b)
            | Ltl::Iff(a, b)
            | Ltl::Until(a, b)
            | Ltl::WeakUntil(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    /// Renames trace variables.
    pub fn rename(&self, map: &dyn Fn(&str) -> String) -> Ltl {
        let r = |e: &Ltl| Box::new(e.rename(map));
        match self {
            Ltl::Const(b) => Ltl::Const(*b),
            Ltl::Atom { prop, var } => Ltl::Atom { prop: prop.clone(), var: map(var) },
            Ltl::Member { var, set } => Ltl::Member { var: map(var), set: set.clone() },
            Ltl::Not(a) => Ltl::Not(r(a)),
            Ltl::Next(a) => Ltl::Next(r(a)),
            Ltl::Eventually(a) => Ltl::Eventually(r(a)),
            Ltl::Globally(a) => Ltl::Globally(r(a)),
            Ltl::And(a, b) => Ltl::And(r(a), r(b)),
            Ltl::Or(a, b) => Ltl::Or(r(a), r(b)),
            Ltl::Implies(a, b) => Ltl::Implies(r(a), r(b)),
            Ltl::Iff(a, b) => Ltl::Iff(r(a), r(b)),
            Ltl::Until(a, b) => Ltl::Until(r(a), r(b)),
            Ltl::WeakUntil(a, b) => Ltl::WeakUntil(r(a), r(b)),
        }
    }
}

impl fmt::Display for Ltl {
    /// Fully parenthesized, so printing and reparsing is exact.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ltl::Const(true) => write!(f, "true"),
            Ltl::Const(false) => write!(f, "false"),
            Ltl::Atom { prop, var } => write!(f, "{prop}@{var}"),
            Ltl::Member { var, set } => write!(f, "({var} in {set})"),
            Ltl::Not(a) => write!(f, "!{a}"),
            Ltl::Next(a) => write!(f, "X {a}"),
            Ltl::Eventually(a) => write!(f, "F {a}"),
            Ltl::Globally(a) => write!(f, "G {a}"),
            Ltl::And(a, b) => write!(f, "({a} & {b})"),
            Ltl::Or(a, b) => write!(f, "({a} | {b})"),
            Ltl::Implies(a, b) => write!(f, "({a} -> {b})"),
            Ltl::Iff(a, b) => write!(f, "({a} <-> {b})"),
            Ltl::Until(a, b) => write!(f, "({a} U {b})"),
            Ltl::WeakUntil(a, b) => write!(f, "({a} W {b})"),
        }
    }
}

/// `Q var in domain`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FoQuant {
    pub quant: Quant,
    pub var: String,
    pub domain: SoRef,
}

impl fmt::Display for FoQuant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quant {
            Quant::Exists => "exists",
            Quant::Forall => "forall",
        };
        write!(f, "{q} {} in {}", self.var, self.domain)
    }
}

/// `forall d1 in D1. ... forall dn in Dn. step => d_target in owner`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixConstraint {
    /// Premise quantifiers; only universal ones are in the fragment.
    pub dotted: Vec<FoQuant>,
    pub step: Ltl,
    /// 1-based index into `dotted`.
    pub target: usize,
}

/// A constraint as written. Seeds are removed by desugaring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Constraint {
    Rule(FixConstraint),
    /// `trace in owner`
    Seed { trace: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FixMode {
    Least,
    Greatest,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SoQuant {
    pub var: String,
    pub mode: FixMode,
    pub constraints: Vec<Constraint>,
}

impl SoQuant {
    /// The desugared constraints; panics on a remaining seed.
    pub fn rules(&self) -> impl Iterator<Item = &FixConstraint> {
        self.constraints.iter().map(|c| match c {
            Constraint::Rule(r) => r,
            Constraint::Seed { .. } => panic!("seed constraint survived desugaring"),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrefixItem {
    Fo(FoQuant),
    So(SoQuant),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    pub aps: Vec<String>,
    pub prefix: Vec<PrefixItem>,
    pub body: Ltl,
}

impl Formula {
    /// First-order quantifiers in order.
    pub fn fo_quants(&self) -> Vec<&FoQuant> {
        self.prefix
            .iter()
            .filter_map(|p| match p {
                PrefixItem::Fo(q) => Some(q),
                PrefixItem::So(_) => None,
            })
            .collect()
    }

    /// Second-order quantifiers in order.
    pub fn so_quants(&self) -> Vec<&SoQuant> {
        self.prefix
            .iter()
            .filter_map(|p| match p {
                PrefixItem::So(s) => Some(s),
                PrefixItem::Fo(_) => None,
            })
            .collect()
    }

    /// Number of first-order variables quantified before second-order
    /// variable `name`.
    pub fn bound_before(&self, name: &str) -> Option<usize> {
        let mut count = 0;
        for p in &self.prefix {
            match p {
                PrefixItem::Fo(_) => count += 1,
                PrefixItem::So(s) if s.var == name => return Some(count),
                PrefixItem::So(_) => {}
            }
        }
        None
    }
}

fn write_constraint(f: &mut fmt::Formatter<'_>, c: &Constraint, owner: &str) -> fmt::Result {
    match c {
        Constraint::Seed { trace } => write!(f, "{trace} in {owner}"),
        Constraint::Rule(r) => {
            for q in &r.dotted {
                write!(f, "{q}. ")?;
            }
            let target = r.dotted.get(r.target.wrapping_sub(1)).map_or("?", |q| q.var.as_str());
            write!(f, "{} => {target} in {owner}", r.step)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.prefix {
            match p {
                PrefixItem::Fo(q) => write!(f, "{q}. ")?,
                PrefixItem::So(s) => {
                    let mode = match s.mode {
                        FixMode::Least => "min",
                        FixMode::Greatest => "max",
                    };
                    write!(f, "fix {} {mode} {{ ", s.var)?;
                    for (i, c) in s.constraints.iter().enumerate() {
                        if i > 0 {
                            write!(f, "; ")?;
                        }
                        write_constraint(f, c, &s.var)?;
                    }
                    write!(f, " }}. ")?;
                }
            }
        }
        write!(f, "{}", self.body)
    }
}
