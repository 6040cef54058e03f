//! Tokenizer and recursive-descent parser for the concrete formula syntax.

use super::ast::{Constraint, FixConstraint, FixMode, FoQuant, Formula, Ltl, PrefixItem, Quant, SoQuant, SoRef};
use super::FormulaError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Dot,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    At,
    Bang,
    Amp,
    Pipe,
    Arrow,
    DArrow,
    FatArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Dot => "`.`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, FormulaError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| FormulaError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::DArrow, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if rest.starts_with("=>") {
            (Tok::FatArrow, 2)
        } else {
            let t = match c {
                '.' => Tok::Dot,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '@' => Tok::At,
                '!' => Tok::Bang,
                '&' => Tok::Amp,
                '|' => Tok::Pipe,
                _ => return Err(err(line, col, format!("unexpected character `{c}`"))),
            };
            (t, 1)
        };
        i += len;
        col += len;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> FormulaError {
        let p = self.toks[self.at].1;
        FormulaError::Syntax { line: p.line, col: p.col, msg: msg.into() }
    }

    fn expect(&mut self, t: Tok) -> Result<(), FormulaError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn word_at(&self, k: usize, w: &str) -> bool {
        matches!(self.peek_at(k), Tok::Ident(s) if s == w)
    }

    fn expect_word(&mut self, w: &str) -> Result<(), FormulaError> {
        if self.is_word(w) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected `{w}`, found {}", self.peek().describe())))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(self.error(format!("expected identifier, found {}", t.describe()))),
        }
    }

    fn at_prefix_item(&self) -> bool {
        (self.is_word("forall") || self.is_word("exists")) && self.word_at(2, "in")
            || self.is_word("fix") && matches!(self.peek_at(1), Tok::Ident(_))
    }

    fn formula(&mut self, aps: &[String]) -> Result<Formula, FormulaError> {
        let mut prefix = Vec::new();
        while self.at_prefix_item() {
            prefix.push(self.prefix_item()?);
            self.expect(Tok::Dot)?;
        }
        let body = self.expr()?;
        if *self.peek() != Tok::Eof {
            return Err(self.error(format!("unexpected {}", self.peek().describe())));
        }
        Ok(Formula { aps: aps.to_vec(), prefix, body })
    }

    fn fo(&mut self) -> Result<FoQuant, FormulaError> {
        let quant = if self.is_word("forall") { Quant::Forall } else { Quant::Exists };
        self.bump();
        let var = self.ident()?;
        self.expect_word("in")?;
        let domain = SoRef::from_name(&self.ident()?);
        Ok(FoQuant { quant, var, domain })
    }

    fn prefix_item(&mut self) -> Result<PrefixItem, FormulaError> {
        if !self.is_word("fix") {
            return Ok(PrefixItem::Fo(self.fo()?));
        }
        self.bump();
        let var = self.ident()?;
        if var == "S" || var == "A" {
            return Err(self.error(format!("`{var}` is a reserved set name")));
        }
        let mode = if self.is_word("min") {
            FixMode::Least
        } else if self.is_word("max") {
            FixMode::Greatest
        } else {
            return Err(self.error(format!("expected `min` or `max`, found {}", self.peek().describe())));
        };
        self.bump();
        self.expect(Tok::LBrace)?;
        let mut constraints = vec![self.constraint(&var)?];
        while *self.peek() == Tok::Semi {
            self.bump();
            constraints.push(self.constraint(&var)?);
        }
        self.expect(Tok::RBrace)?;
        Ok(PrefixItem::So(SoQuant { var, mode, constraints }))
    }

    fn constraint(&mut self, owner: &str) -> Result<Constraint, FormulaError> {
        let mut dotted = Vec::new();
        while (self.is_word("forall") || self.is_word("exists")) && self.word_at(2, "in") {
            dotted.push(self.fo()?);
            if *self.peek() == Tok::Dot {
                self.bump();
            }
        }
        let seed_shape = matches!(self.peek(), Tok::Ident(_))
            && self.word_at(1, "in")
            && matches!(self.peek_at(2), Tok::Ident(_))
            && matches!(self.peek_at(3), Tok::Semi | Tok::RBrace);
        if dotted.is_empty() && seed_shape {
            let trace = self.ident()?;
            self.bump();
            let set = self.ident()?;
            if set != owner {
                return Err(self.error(format!("seed must target `{owner}`, found `{set}`")));
            }
            return Ok(Constraint::Seed { trace });
        }
        let step = self.expr()?;
        self.expect(Tok::FatArrow)?;
        let tv = self.ident()?;
        self.expect_word("in")?;
        let set = self.ident()?;
        if set != owner {
            return Err(self.error(format!("constraint of `{owner}` concludes membership in `{set}`")));
        }
        let target = match dotted.iter().position(|q: &FoQuant| q.var == tv) {
            Some(i) => i + 1,
            None => return Err(self.error(format!("conclusion variable `{tv}` is not a premise variable"))),
        };
        Ok(Constraint::Rule(FixConstraint { dotted, step, target }))
    }

    fn expr(&mut self) -> Result<Ltl, FormulaError> {
        let lhs = self.implication()?;
        if *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.expr()?;
            return Ok(Ltl::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Ltl, FormulaError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Ltl::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Ltl, FormulaError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            lhs = Ltl::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Ltl, FormulaError> {
        let mut lhs = self.binary_temporal()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Ltl::and(lhs, self.binary_temporal()?);
        }
        Ok(lhs)
    }

    fn binary_temporal(&mut self) -> Result<Ltl, FormulaError> {
        let lhs = self.unary()?;
        if self.is_word("U") {
            self.bump();
            return Ok(Ltl::until(lhs, self.binary_temporal()?));
        }
        if self.is_word("W") {
            self.bump();
            return Ok(Ltl::weak_until(lhs, self.binary_temporal()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ltl, FormulaError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Ltl::not(self.unary()?));
        }
        let operator = !matches!(self.peek_at(1), Tok::At) && !self.word_at(1, "in");
        if operator {
            for (w, mk) in [("X", Ltl::next as fn(Ltl) -> Ltl), ("G", Ltl::globally), ("F", Ltl::eventually)] {
                if self.is_word(w) {
                    self.bump();
                    return Ok(mk(self.unary()?));
                }
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Ltl, FormulaError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(w) if w == "true" => {
                self.bump();
                Ok(Ltl::Const(true))
            }
            Tok::Ident(w) if w == "false" => {
                self.bump();
                Ok(Ltl::Const(false))
            }
            Tok::Ident(w) if w == "eq" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let p = self.ident()?;
                self.expect(Tok::Comma)?;
                let q = self.ident()?;
                self.expect(Tok::Semi)?;
                let mut props = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    props.push(self.ident()?);
                    if *self.peek() == Tok::Comma {
                        self.bump();
                    }
                }
                self.expect(Tok::RParen)?;
                Ok(Ltl::eq(&p, &q, &props))
            }
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() == Tok::At {
                    self.bump();
                    let var = self.ident()?;
                    return Ok(Ltl::Atom { prop: name, var });
                }
                if self.is_word("in") {
                    self.bump();
                    let set = SoRef::from_name(&self.ident()?);
                    return Ok(Ltl::Member { var: name, set });
                }
                Err(self.error(format!("expected `@` or `in` after `{name}`")))
            }
            t => Err(self.error(format!("expected a formula, found {}", t.describe()))),
        }
    }
}

/// Parses the concrete syntax without desugaring or scope checks.
pub fn parse_raw(text: &str, aps: &[String]) -> Result<Formula, FormulaError> {
    let toks = lex(text)?;
    Parser { toks, at: 0 }.formula(aps)
}

/// Parses a standalone temporal body.
pub fn parse_ltl(text: &str) -> Result<Ltl, FormulaError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(format!("unexpected {}", p.peek().describe())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse_ltl("a@p | b@p & c@p -> d@p <-> e@p").unwrap();
        assert_eq!(e.to_string(), "(((a@p | (b@p & c@p)) -> d@p) <-> e@p)");
        let e = parse_ltl("a@p -> b@p -> c@p").unwrap();
        assert_eq!(e.to_string(), "(a@p -> (b@p -> c@p))");
        let e = parse_ltl("!X a@p U G b@p & c@p").unwrap();
        assert_eq!(e.to_string(), "((!X a@p U G b@p) & c@p)");
    }

    #[test]
    fn keywords_only_standalone() {
        let e = parse_ltl("X X@p").unwrap();
        assert_eq!(e, Ltl::next(Ltl::atom("X", "p")));
        let e = parse_ltl("Xa@p").unwrap();
        assert_eq!(e, Ltl::atom("Xa", "p"));
    }

    #[test]
    fn eq_macro_expands() {
        let e = parse_ltl("eq(p, q; a, b)").unwrap();
        assert_eq!(e.to_string(), "((a@p <-> a@q) & (b@p <-> b@q))");
        assert_eq!(parse_ltl("eq(p,q;)").unwrap(), Ltl::Const(true));
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_ltl("a@p &\n  ) ").unwrap_err();
        assert!(matches!(e, FormulaError::Syntax { line: 2, col: 3, .. }), "{e}");
    }
}
