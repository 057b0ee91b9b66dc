//! Text syntax for [`GroupExpr`].
//!
//! ```text
//! expr    := term (("⊕" | "+") term)*
//! term    := primary ("^" (uint | "(N)"))*
//! primary := "0" | "?" | "Z" ["/" uint] | "Q" | "R" | "prod(Z)"
//!          | "lex(" expr (";" expr)* ")"
//!          | "fg(" [uint ("," uint)*] ";" uint ")"
//!          | "opaque(" string (";" key "=" bool)* ")"      key ∈ free, tf, div
//!          | "(" expr ")"
//! ```
//!
//! Rendering with `Display` and parsing back gives the same expression.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use super::expr::{GroupAtom, GroupExpr, Mult, Opaque};
use crate::abelian::FgGroup;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at offset {offset}: {message}")]
pub struct ExprParseError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

pub fn parse_expr(input: &str) -> Result<GroupExpr, ExprParseError> {
    let mut p = Parser { chars: input.chars().collect(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

impl std::str::FromStr for GroupExpr {
    type Err = ExprParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> ExprParseError {
        ExprParseError { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let w: Vec<char> = word.chars().collect();
        if self.chars[self.pos..].starts_with(&w) {
            self.pos += w.len();
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<BigInt, ExprParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn expr(&mut self) -> Result<GroupExpr, ExprParseError> {
        let mut parts = vec![self.term()?];
        while self.eat('⊕') || self.eat('+') {
            parts.push(self.term()?);
        }
        Ok(GroupExpr::sum(parts))
    }

    fn term(&mut self) -> Result<GroupExpr, ExprParseError> {
        let mut base = self.primary()?;
        while self.eat('^') {
            let m = if self.eat('(') {
                if !self.eat('N') {
                    return Err(self.error("expected 'N' in '^(N)'"));
                }
                self.expect(')')?;
                Mult::Countable
            } else {
                let n = self.uint()?;
                Mult::Finite(n.try_into().map_err(|_| self.error("exponent too large"))?)
            };
            base = GroupExpr::power(base, m);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<GroupExpr, ExprParseError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('0') => {
                self.pos += 1;
                Ok(GroupExpr::trivial())
            }
            Some('?') => {
                self.pos += 1;
                Ok(GroupExpr::Unknown)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some('Q') => {
                self.pos += 1;
                Ok(GroupExpr::q())
            }
            Some('R') => {
                self.pos += 1;
                Ok(GroupExpr::r())
            }
            Some('Z') => {
                self.pos += 1;
                if self.eat('/') {
                    let n = self.uint()?;
                    if n.is_zero() {
                        return Err(self.error("Z/0 is written Z"));
                    }
                    Ok(GroupExpr::cyclic(n))
                } else {
                    Ok(GroupExpr::z())
                }
            }
            _ if self.keyword("lex(") => {
                let mut parts = vec![self.expr()?];
                while self.eat(';') {
                    parts.push(self.expr()?);
                }
                self.expect(')')?;
                Ok(GroupExpr::lex(parts))
            }
            _ if self.keyword("prod(") => {
                if !self.eat('Z') {
                    return Err(self.error("only prod(Z) is supported"));
                }
                self.expect(')')?;
                Ok(GroupExpr::Atom(GroupAtom::ProductZ))
            }
            _ if self.keyword("fg(") => {
                let mut torsion = Vec::new();
                if self.peek() != Some(';') {
                    torsion.push(self.uint()?);
                    while self.eat(',') {
                        torsion.push(self.uint()?);
                    }
                }
                self.expect(';')?;
                let rank: usize = self.uint()?.try_into().map_err(|_| self.error("rank too large"))?;
                self.expect(')')?;
                if torsion.iter().any(|t: &BigInt| t.is_zero()) {
                    return Err(self.error("torsion orders must be positive"));
                }
                let torsion: Vec<BigInt> = torsion.into_iter().filter(|t| !t.is_one()).collect();
                Ok(GroupExpr::fg(FgGroup::from_invariants(&torsion, rank)))
            }
            _ if self.keyword("opaque(") => self.opaque(),
            Some(c) => Err(self.error(format!("unexpected character '{c}'"))),
        }
    }

    fn opaque(&mut self) -> Result<GroupExpr, ExprParseError> {
        self.expect('"')?;
        let mut label = String::new();
        loop {
            match self.chars.get(self.pos).copied() {
                None => return Err(self.error("unterminated label")),
                Some('"') => {
                    self.pos += 1;
                    break;
                }
                Some('\\') => {
                    let c = self.chars.get(self.pos + 1).copied().ok_or_else(|| self.error("dangling escape"))?;
                    label.push(c);
                    self.pos += 2;
                }
                Some(c) => {
                    label.push(c);
                    self.pos += 1;
                }
            }
        }
        let mut o = Opaque::new(label);
        while self.eat(';') {
            let slot = if self.keyword("free") {
                &mut o.free
            } else if self.keyword("tf") {
                &mut o.torsion_free
            } else if self.keyword("div") {
                &mut o.divisible
            } else {
                return Err(self.error("expected one of free, tf, div"));
            };
            self.expect('=')?;
            *slot = Some(if self.keyword("true") {
                true
            } else if self.keyword("false") {
                false
            } else {
                return Err(self.error("expected true or false"));
            });
        }
        self.expect(')')?;
        Ok(GroupExpr::opaque(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip(s: &str) {
        let e = parse_expr(s).unwrap();
        assert_eq!(e.to_string(), s, "render of parse of {s}");
        assert_eq!(parse_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn canonical_strings_round_trip() {
        for s in [
            "Z ⊕ lex(Z;Q) ⊕ R",
            "0",
            "?",
            "Z/4",
            "fg(2,4;1)",
            "prod(Z)",
            "Z^3",
            "Z^(N) ⊕ Q",
            "(Z ⊕ Q)^2",
            "lex(Z;Z ⊕ Q;R)",
            "opaque(\"U(L)/U(k)\"; free=true)",
            "opaque(\"a \\\"b\\\"\"; free=false; tf=true; div=false)",
        ] {
            round_trip(s);
        }
    }

    #[test]
    fn plus_is_an_alias() {
        assert_eq!(parse_expr("Z + Q").unwrap().to_string(), "Z ⊕ Q");
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_expr("Z ⊕ W").unwrap_err();
        assert_eq!(e.offset, 4);
        assert!(parse_expr("lex(Z;").is_err());
        assert!(parse_expr("Z/0").is_err());
        assert!(parse_expr("Z Z").is_err());
    }
}
