//! Lattice expressions over named generators, their canonical form in the
//! free bounded distributive lattice, and the query mini-language:
//!
//! ```text
//! query := expr [ '<=' expr ]
//! expr  := term { 'v' term }
//! term  := atom { '&' atom }
//! atom  := 'T' | 'F' | name | '(' expr ')'
//! ```
//!
//! `&` binds tighter than `v`; both are left associative.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatExpr {
    Top,
    Bottom,
    Gen(String),
    Meet(Box<LatExpr>, Box<LatExpr>),
    Join(Box<LatExpr>, Box<LatExpr>),
}

impl LatExpr {
    pub fn gen(name: impl Into<String>) -> Self {
        LatExpr::Gen(name.into())
    }

    pub fn meet(self, other: LatExpr) -> Self {
        LatExpr::Meet(Box::new(self), Box::new(other))
    }

    pub fn join(self, other: LatExpr) -> Self {
        LatExpr::Join(Box::new(self), Box::new(other))
    }

    pub fn meet_all(xs: impl IntoIterator<Item = LatExpr>) -> Self {
        xs.into_iter().reduce(LatExpr::meet).unwrap_or(LatExpr::Top)
    }

    pub fn join_all(xs: impl IntoIterator<Item = LatExpr>) -> Self {
        xs.into_iter().reduce(LatExpr::join).unwrap_or(LatExpr::Bottom)
    }

    /// Generators mentioned, sorted.
    pub fn generators(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut BTreeSet<String>) {
        match self {
            LatExpr::Top | LatExpr::Bottom => {}
            LatExpr::Gen(g) => {
                out.insert(g.clone());
            }
            LatExpr::Meet(a, b) | LatExpr::Join(a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
        }
    }

    /// Evaluate in any bounded lattice given by its operations.
    pub fn eval<T: Clone>(
        &self,
        top: &T,
        bottom: &T,
        gen: &mut impl FnMut(&str) -> Result<T>,
        meet: &impl Fn(T, T) -> T,
        join: &impl Fn(T, T) -> T,
    ) -> Result<T> {
        Ok(match self {
            LatExpr::Top => top.clone(),
            LatExpr::Bottom => bottom.clone(),
            LatExpr::Gen(g) => gen(g)?,
            LatExpr::Meet(a, b) => {
                let x = a.eval(top, bottom, gen, meet, join)?;
                let y = b.eval(top, bottom, gen, meet, join)?;
                meet(x, y)
            }
            LatExpr::Join(a, b) => {
                let x = a.eval(top, bottom, gen, meet, join)?;
                let y = b.eval(top, bottom, gen, meet, join)?;
                join(x, y)
            }
        })
    }

    /// Truth value under an assignment of generators to `{0, 1}`.
    pub fn holds(&self, assignment: &impl Fn(&str) -> Result<bool>) -> Result<bool> {
        self.eval(&true, &false, &mut |g| assignment(g), &|a, b| a && b, &|a, b| a || b)
    }
}

impl fmt::Display for LatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatExpr::Top => write!(f, "T"),
            LatExpr::Bottom => write!(f, "F"),
            LatExpr::Gen(g) => write!(f, "{g}"),
            LatExpr::Meet(a, b) => {
                let wrap = |e: &LatExpr| matches!(e, LatExpr::Join(..));
                fmt_side(f, a, wrap(a))?;
                write!(f, " & ")?;
                fmt_side(f, b, wrap(b) || matches!(**b, LatExpr::Meet(..)))
            }
            LatExpr::Join(a, b) => {
                write!(f, "{a} v ")?;
                fmt_side(f, b, matches!(**b, LatExpr::Join(..)))
            }
        }
    }
}

fn fmt_side(f: &mut fmt::Formatter<'_>, e: &LatExpr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Canonical form in the free bounded distributive lattice: an antichain of
/// meet-sets, read as a join of meets. `⊥` is the empty antichain and `⊤` the
/// antichain `{∅}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm(BTreeSet<BTreeSet<String>>);

impl NormalForm {
    pub fn top() -> Self {
        NormalForm([BTreeSet::new()].into_iter().collect())
    }

    pub fn bottom() -> Self {
        NormalForm(BTreeSet::new())
    }

    pub fn gen(g: &str) -> Self {
        NormalForm([[g.to_string()].into_iter().collect()].into_iter().collect())
    }

    /// Drop every meet-set that contains another one.
    pub fn from_terms(terms: impl IntoIterator<Item = BTreeSet<String>>) -> Self {
        let terms: BTreeSet<BTreeSet<String>> = terms.into_iter().collect();
        let minimal = terms.iter().filter(|t| !terms.iter().any(|s| s != *t && s.is_subset(t))).cloned().collect();
        NormalForm(minimal)
    }

    pub fn terms(&self) -> &BTreeSet<BTreeSet<String>> {
        &self.0
    }

    pub fn join(&self, other: &NormalForm) -> NormalForm {
        NormalForm::from_terms(self.0.iter().chain(&other.0).cloned())
    }

    pub fn meet(&self, other: &NormalForm) -> NormalForm {
        NormalForm::from_terms(self.0.iter().flat_map(|a| other.0.iter().map(move |b| a.union(b).cloned().collect())))
    }

    /// Order in the free lattice: every meet-set of `self` contains one of `other`.
    pub fn leq(&self, other: &NormalForm) -> bool {
        self.0.iter().all(|a| other.0.iter().any(|b| b.is_subset(a)))
    }

    pub fn to_expr(&self) -> LatExpr {
        LatExpr::join_all(self.0.iter().map(|t| LatExpr::meet_all(t.iter().map(LatExpr::gen))))
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Canonical form of `e`; generators must come from `declared`.
pub fn normalize(e: &LatExpr, declared: &BTreeSet<String>) -> Result<NormalForm> {
    e.eval(
        &NormalForm::top(),
        &NormalForm::bottom(),
        &mut |g| {
            if declared.contains(g) {
                Ok(NormalForm::gen(g))
            } else {
                Err(Error::UnknownGenerator(g.to_string()))
            }
        },
        &|a, b| a.meet(&b),
        &|a, b| a.join(&b),
    )
}

/// A parsed query line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Query {
    Expr(LatExpr),
    Leq(LatExpr, LatExpr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Top,
    Bottom,
    Name(String),
    And,
    Or,
    LParen,
    RParen,
    Leq,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '&' => {
                out.push((pos, Tok::And));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            '<' => {
                if chars.get(i + 1).map(|c| c.1) != Some('=') {
                    return Err(Error::Parse { offset: pos, message: "expected `<=`".into() });
                }
                out.push((pos, Tok::Leq));
                i += 2;
            }
            c if c.is_alphanumeric() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '.') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().map(|c| c.1).collect();
                let tok = match word.as_str() {
                    "T" => Tok::Top,
                    "F" => Tok::Bottom,
                    "v" => Tok::Or,
                    _ => Tok::Name(word),
                };
                out.push((pos, tok));
            }
            other => return Err(Error::Parse { offset: pos, message: format!("unexpected character `{other}`") }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<LatExpr> {
        let mut lhs = self.term()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            lhs = lhs.join(self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<LatExpr> {
        let mut lhs = self.atom()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            lhs = lhs.meet(self.atom()?);
        }
        Ok(lhs)
    }

    fn atom(&mut self) -> Result<LatExpr> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.error("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Top => Ok(LatExpr::Top),
            Tok::Bottom => Ok(LatExpr::Bottom),
            Tok::Name(n) => Ok(LatExpr::Gen(n)),
            Tok::LParen => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.error("expected `T`, `F`, a generator or `(`")
            }
        }
    }
}

/// Parse an expression (no `<=`).
pub fn parse_expr(src: &str) -> Result<LatExpr> {
    match parse_query(src)? {
        Query::Expr(e) => Ok(e),
        Query::Leq(..) => Err(Error::Parse { offset: src.find("<=").unwrap_or(0), message: "`<=` not allowed here".into() }),
    }
}

/// Parse a query; `<=` may appear once, at top level only.
pub fn parse_query(src: &str) -> Result<Query> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
    let lhs = p.expr()?;
    let q = if p.peek() == Some(&Tok::Leq) {
        p.pos += 1;
        Query::Leq(lhs, p.expr()?)
    } else {
        Query::Expr(lhs)
    };
    if p.pos != p.toks.len() {
        return p.error("trailing input");
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn nf(src: &str) -> NormalForm {
        normalize(&parse_expr(src).unwrap(), &gens(&["g1", "g2", "g3"])).unwrap()
    }

    fn terms(ts: &[&[&str]]) -> NormalForm {
        NormalForm::from_terms(ts.iter().map(|t| gens(t)))
    }

    #[test]
    fn absorption() {
        assert_eq!(nf("(g1 & g2) v g1"), terms(&[&["g1"]]));
    }

    #[test]
    fn distributive_normal_form() {
        assert_eq!(nf("(g1 v g2) & (g1 v g3)"), terms(&[&["g1"], &["g2", "g3"]]));
    }

    #[test]
    fn unit_law() {
        assert_eq!(nf("T & g1"), terms(&[&["g1"]]));
        assert_eq!(nf("F"), NormalForm::bottom());
        assert_eq!(nf("T"), NormalForm::top());
        assert_eq!(nf("F v g2"), terms(&[&["g2"]]));
    }

    #[test]
    fn unknown_generator() {
        let e = parse_expr("g1 & h").unwrap();
        assert_eq!(normalize(&e, &gens(&["g1"])), Err(Error::UnknownGenerator("h".into())));
    }

    #[test]
    fn precedence_and_query() {
        let q = parse_query("(g1 & g2) v g1 <= g1").unwrap();
        let Query::Leq(l, r) = q else { panic!("expected <=") };
        assert_eq!(r, LatExpr::gen("g1"));
        assert_eq!(l, LatExpr::gen("g1").meet(LatExpr::gen("g2")).join(LatExpr::gen("g1")));
        assert_eq!(parse_expr("a v b & c").unwrap(), LatExpr::gen("a").join(LatExpr::gen("b").meet(LatExpr::gen("c"))));
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_query("g1 &"), Err(Error::Parse { .. })));
        assert!(matches!(parse_query("(g1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_query("g1 <= g2 <= g3"), Err(Error::Parse { .. })));
        assert!(matches!(parse_query("g1 < g2"), Err(Error::Parse { .. })));
        assert!(matches!(parse_expr("(g1 <= g2)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        for src in ["(g1 v g2) & g3", "g1 v g2 & g3", "T", "F", "g1 & (g2 & g3)"] {
            let e = parse_expr(src).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{src}");
        }
    }
}
