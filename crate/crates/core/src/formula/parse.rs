//! ASCII concrete syntax.
//!
//! ```text
//! formula := impl
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "[" INT "]" unary | "<" INT ">" unary | primary
//! primary := "false" | "true" | IDENT "@" INT | "(" formula ")"
//! ```
//!
//! `->` is right associative, `|` and `&` fold to the left. Offsets in errors
//! are byte offsets into the input.

use std::fmt;

use super::{Channel, Formula, FormulaError};

pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.implication()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> FormulaError {
        FormulaError::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), FormulaError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn implication(&mut self) -> Result<Formula, FormulaError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            let rhs = self.implication()?;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.conjunction()?;
        while self.eat("|") {
            let g = self.conjunction()?;
            f = Formula::or(f, g);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula, FormulaError> {
        let mut f = self.unary()?;
        while self.eat("&") {
            let g = self.unary()?;
            f = Formula::and(f, g);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(b'!') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(b'[') => {
                self.pos += 1;
                let k = self.integer()?;
                self.expect("]")?;
                Ok(Formula::boxed(k, self.unary()?))
            }
            Some(b'<') => {
                self.pos += 1;
                let k = self.integer()?;
                self.expect(">")?;
                Ok(Formula::diamond(k, self.unary()?))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula, FormulaError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let f = self.implication()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                // ASCII by construction
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if self.eat("@") {
                    let k = self.integer()?;
                    return Ok(Formula::atom(word, k));
                }
                match word {
                    "false" => Ok(Formula::Bottom),
                    "true" => Ok(Formula::top()),
                    _ => Err(self.error("expected '@' after atom name")),
                }
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<Channel, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return Err(self.error("expected a channel index"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        text.parse::<Channel>()
            .map_err(|_| FormulaError::ChannelOutOfRange {
                offset: start,
                text: text.to_string(),
            })
    }
}

/// Display adapter produced by [`Formula::sugared`].
pub struct Sugared<'a>(pub &'a Formula);

impl fmt::Display for Sugared<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sugared(self.0, f)
    }
}

fn negated(f: &Formula) -> Option<&Formula> {
    match f {
        Formula::Implies(inner, rhs) if **rhs == Formula::Bottom => Some(inner),
        _ => None,
    }
}

fn write_sugared(f: &Formula, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    match f {
        Formula::Bottom => out.write_str("false"),
        Formula::Atom(a) => write!(out, "{a}"),
        Formula::Box(k, body) => {
            write!(out, "[{k}]")?;
            write_sugared(body, out)
        }
        Formula::Implies(lhs, rhs) => {
            if let Some(inner) = negated(f) {
                // <k>φ
                if let Formula::Box(k, body) = inner {
                    if let Some(phi) = negated(body) {
                        write!(out, "<{k}>")?;
                        return write_sugared(phi, out);
                    }
                }
                // φ & ψ
                if let Formula::Implies(phi, not_psi) = inner {
                    if let Some(psi) = negated(not_psi) {
                        out.write_str("(")?;
                        write_sugared(phi, out)?;
                        out.write_str(" & ")?;
                        write_sugared(psi, out)?;
                        return out.write_str(")");
                    }
                }
                if *inner == Formula::Bottom {
                    return out.write_str("true");
                }
                out.write_str("!")?;
                return write_sugared(inner, out);
            }
            // φ | ψ, unless the left side reads better as <k>χ
            let diamond = |g: &Formula| matches!(g, Formula::Box(_, body) if negated(body).is_some());
            if let Some(phi) = negated(lhs).filter(|phi| !diamond(phi)) {
                out.write_str("(")?;
                write_sugared(phi, out)?;
                out.write_str(" | ")?;
                write_sugared(rhs, out)?;
                return out.write_str(")");
            }
            out.write_str("(")?;
            write_sugared(lhs, out)?;
            out.write_str(" -> ")?;
            write_sugared(rhs, out)?;
            out.write_str(")")
        }
    }
}
