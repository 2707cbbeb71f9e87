//! Expressions over functional digraphs.
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*'? factor)*
//! factor := INT | 'C' INT | '[' ints ']' | '(' expr ')'
//! ```
//!
//! An integer `k` stands for `kC1`, so `2C3` is `2C1 · C3 = C3 + C3`.
//! Products bind tighter than sums; juxtaposition is a product.

use std::collections::BTreeMap;
use std::fmt;

use fungraph::algebra::{cycle, product, scalar, sum};
use fungraph::FunctionalDigraph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    /// `k`, i.e. `kC1`.
    Int(usize),
    /// `C<k>`.
    Cycle(usize),
    /// `[s0,...,sn-1]`.
    Literal(Vec<usize>),
    Sum(Box<Expr>, Box<Expr>),
    Product(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { text: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.text.len() {
        return Err(p.error(format!("unexpected '{}'", p.text[p.pos] as char)));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { position: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(got) if got == c => {
                self.pos += 1;
                Ok(())
            }
            Some(got) => Err(self.error(format!("expected '{}', found '{}'", c as char, got as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while self.peek() == Some(b'+') {
            self.pos += 1;
            lhs = Expr::Sum(Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => self.pos += 1,
                Some(c) if starts_factor(c) => {}
                _ => break,
            }
            lhs = Expr::Product(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.int()?)),
            Some(b'C') => {
                self.pos += 1;
                if !self.text.get(self.pos).is_some_and(u8::is_ascii_digit) {
                    return Err(self.error("expected a cycle length after 'C'"));
                }
                Ok(Expr::Cycle(self.int()?))
            }
            Some(b'[') => {
                self.pos += 1;
                let mut succ = Vec::new();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Expr::Literal(succ));
                }
                loop {
                    if !self.peek().is_some_and(|c| c.is_ascii_digit()) {
                        return Err(self.error("expected a vertex number"));
                    }
                    succ.push(self.int()?);
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Expr::Literal(succ));
                        }
                        _ => return Err(self.error("expected ',' or ']'")),
                    }
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn int(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| ParseError { position: start, message: "number too large".into() })
    }
}

fn starts_factor(c: u8) -> bool {
    c.is_ascii_digit() || matches!(c, b'C' | b'[' | b'(')
}

impl Expr {
    pub fn eval(&self) -> fungraph::Result<FunctionalDigraph> {
        Ok(match self {
            Expr::Int(k) => scalar(*k, &cycle(1)?),
            Expr::Cycle(k) => cycle(*k)?,
            Expr::Literal(succ) => FunctionalDigraph::from_successors(succ.clone())?,
            Expr::Sum(a, b) => sum(&a.eval()?, &b.eval()?),
            Expr::Product(a, b) => product(&a.eval()?, &b.eval()?),
        })
    }

    /// A compact expression for `x`: components grouped by isomorphism class,
    /// cycles written `C<k>`, anything else as a literal.
    pub fn from_digraph(x: &FunctionalDigraph) -> Expr {
        let mut groups: BTreeMap<_, (usize, FunctionalDigraph)> = BTreeMap::new();
        for c in x.components() {
            let entry = groups
                .entry(c.digraph.canonical_form())
                .or_insert_with(|| (0, c.digraph.canonical_representative()));
            entry.0 += 1;
        }
        let mut terms = groups.into_values().map(|(count, rep)| {
            let base = if rep.len() == rep.cyclic_part().size() {
                Expr::Cycle(rep.len())
            } else {
                Expr::Literal(rep.successors().to_vec())
            };
            if count == 1 {
                base
            } else {
                Expr::Product(Box::new(Expr::Int(count)), Box::new(base))
            }
        });
        let Some(first) = terms.next() else {
            return Expr::Int(0);
        };
        terms.fold(first, |acc, t| Expr::Sum(Box::new(acc), Box::new(t)))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(k) => write!(f, "{k}"),
            Expr::Cycle(k) => write!(f, "C{k}"),
            Expr::Literal(succ) => {
                let parts: Vec<String> = succ.iter().map(usize::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
            Expr::Sum(a, b) => write!(f, "{a}+{b}"),
            Expr::Product(a, b) => {
                let wrap = |e: &Expr| match e {
                    Expr::Sum(..) => format!("({e})"),
                    _ => e.to_string(),
                };
                match (a.as_ref(), b.as_ref()) {
                    (Expr::Int(k), Expr::Cycle(_) | Expr::Literal(_)) => write!(f, "{k}{b}"),
                    _ => write!(f, "{}*{}", wrap(a), wrap(b)),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str) -> FunctionalDigraph {
        parse(text).unwrap().eval().unwrap()
    }

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse("2C1").unwrap(), parse("2*C1").unwrap());
        assert!(eval("C2*C2").is_isomorphic(&eval("2C2")));
        assert!(eval("C4*C6").is_isomorphic(&eval("2C12")));
        assert_eq!(eval("1+2*C3").len(), 7);
        assert_eq!(eval("(1+2)C3").len(), 9);
        assert_eq!(eval("C2 C3").len(), 6);
        assert_eq!(eval("[0, 0] + [ ]"), eval("[0,0]"));
        assert!(eval("0").is_empty());
        assert!(eval("3").is_isomorphic(&eval("C1+C1+C1")));
    }

    #[test]
    fn errors_report_positions() {
        let cases = [("C", 1), ("2+", 2), ("[0,", 3), ("(C2", 3), ("C2)", 2), ("x", 0), ("[0;1]", 2), ("", 0)];
        for (text, pos) in cases {
            let err = parse(text).unwrap_err();
            assert_eq!(err.position, pos, "{text}: {err}");
        }
    }

    #[test]
    fn evaluation_errors() {
        assert!(parse("C0").unwrap().eval().is_err());
        assert!(parse("[1]").unwrap().eval().is_err());
    }

    #[test]
    fn printing() {
        assert_eq!(parse("2C3 + [0,0]*(C1+C2)").unwrap().to_string(), "2C3+[0,0]*(C1+C2)");
        let x = eval("2C2+[0,0]+C5");
        let e = Expr::from_digraph(&x);
        assert_eq!(e.to_string(), "C5+2C2+[0,0]");
        assert!(e.eval().unwrap().is_isomorphic(&x));
        assert_eq!(Expr::from_digraph(&FunctionalDigraph::empty()).to_string(), "0");
    }
}
