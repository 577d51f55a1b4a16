//! Recursive-descent parser for the surface expression grammar.
//!
//! Precedence, tightest first: unary minus, `* /`, `+ -`. Subtraction and
//! division are surface-only and build `Neg`/`Inv` nodes. An integer
//! directly followed by `/` and another integer lexes as one rational
//! literal; write `(a)/b` or `a * inv(b)` to force a division node between
//! literals. `^` is reserved and rejected with a hint.

use super::{builtin, derived, BuiltinName, Derived, ElExpr, ExprRef};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub message: String,
    pub offset: usize,
}

fn err<T>(message: impl Into<String>, offset: usize) -> Result<T, ParseError> {
    Err(ParseError {
        message: message.into(),
        offset,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            pos: 0,
        };
        let mut out = Vec::new();
        loop {
            lx.skip_ws();
            if lx.pos >= lx.src.len() {
                break;
            }
            let start = lx.pos;
            let c = lx.src[lx.pos];
            let tok = match c {
                b'+' => {
                    lx.pos += 1;
                    Tok::Plus
                }
                b'-' => {
                    lx.pos += 1;
                    Tok::Minus
                }
                b'*' => {
                    lx.pos += 1;
                    Tok::Star
                }
                b'/' => {
                    lx.pos += 1;
                    Tok::Slash
                }
                b'^' => {
                    lx.pos += 1;
                    Tok::Caret
                }
                b'(' => {
                    lx.pos += 1;
                    Tok::LParen
                }
                b')' => {
                    lx.pos += 1;
                    Tok::RParen
                }
                b',' => {
                    lx.pos += 1;
                    Tok::Comma
                }
                b'0'..=b'9' => {
                    while lx.pos < lx.src.len() && lx.src[lx.pos].is_ascii_digit() {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    Tok::Int(text.parse().unwrap())
                }
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    while lx.pos < lx.src.len()
                        && (lx.src[lx.pos].is_ascii_alphanumeric() || lx.src[lx.pos] == b'_')
                    {
                        lx.pos += 1;
                    }
                    let text = std::str::from_utf8(&lx.src[start..lx.pos]).unwrap();
                    Tok::Name(text.to_string())
                }
                other => {
                    return err(format!("unexpected character '{}'", other as char), start)
                }
            };
            out.push((tok, start));
        }
        Ok(out)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

/// Parse a complete expression.
pub fn parse(text: &str) -> Result<ExprRef, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let (_, off) = p.toks[p.pos];
        return err("unexpected trailing input", off);
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|&(_, o)| o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            err(format!("expected {}", what), self.offset())
        }
    }

    fn expr(&mut self) -> Result<ExprRef, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = ElExpr::add(acc, rhs);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = ElExpr::add(acc, ElExpr::neg(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExprRef, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = ElExpr::mul(acc, rhs);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.factor()?;
                    acc = ElExpr::mul(acc, ElExpr::inv(rhs));
                }
                Some(Tok::Caret) => {
                    return err(
                        "'^' is not an operator here; use pow(x, p/q) or root(x, n, k)",
                        self.offset(),
                    )
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<ExprRef, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.factor()?;
            return Ok(ElExpr::neg(inner));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<ExprRef, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => self.maybe_rational_literal(n, off),
            Some(Tok::Name(name)) => self.named(&name, off),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Some(Tok::Caret) => err(
                "'^' is not an operator here; use pow(x, p/q) or root(x, n, k)",
                off,
            ),
            Some(_) => err("expected an expression", off),
            None => err("unexpected end of input", off),
        }
    }

    /// An integer followed by `/ integer` lexes as one rational literal.
    fn maybe_rational_literal(&mut self, numer: BigInt, off: usize) -> Result<ExprRef, ParseError> {
        if self.peek() == Some(&Tok::Slash) {
            if let Some((Tok::Int(_), _)) = self.toks.get(self.pos + 1) {
                self.pos += 1; // slash
                let (denom, doff) = match self.bump() {
                    Some(Tok::Int(d)) => (d, self.toks[self.pos - 1].1),
                    _ => unreachable!(),
                };
                if denom.is_zero() {
                    return err("rational literal with zero denominator", doff);
                }
                return Ok(ElExpr::rational(BigRational::new(numer, denom)));
            }
        }
        let _ = off;
        Ok(ElExpr::rational(BigRational::from_integer(numer)))
    }

    fn named(&mut self, name: &str, off: usize) -> Result<ExprRef, ParseError> {
        if self.peek() != Some(&Tok::LParen) {
            return match BuiltinName::from_str(name) {
                Some(b) => Ok(builtin(b)),
                None => err(format!("unknown name '{}'", name), off),
            };
        }
        self.pos += 1; // '('
        match name {
            "exp" | "log" | "inv" | "sin" | "cos" | "tan" | "tanh" | "arccos" => {
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(match name {
                    "exp" => ElExpr::exp(arg),
                    "log" => ElExpr::log(arg),
                    "inv" => ElExpr::inv(arg),
                    "sin" => derived(Derived::Sin, arg).unwrap(),
                    "cos" => derived(Derived::Cos, arg).unwrap(),
                    "tan" => derived(Derived::Tan, arg).unwrap(),
                    "tanh" => derived(Derived::Tanh, arg).unwrap(),
                    "arccos" => derived(Derived::Arccos, arg).unwrap(),
                    _ => unreachable!(),
                })
            }
            "pow" => {
                let base = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let eoff = self.offset();
                let exponent = self.rational_argument(eoff)?;
                self.expect(Tok::RParen, "')'")?;
                derived(Derived::RationalPow(exponent), base)
                    .map_err(|e| ParseError { message: e.to_string(), offset: off })
            }
            "root" => {
                let base = self.expr()?;
                self.expect(Tok::Comma, "','")?;
                let n = self.small_uint("root degree")?;
                self.expect(Tok::Comma, "','")?;
                let k = self.small_uint("branch index")?;
                self.expect(Tok::RParen, "')'")?;
                derived(Derived::NthRootBranch { n, k }, base)
                    .map_err(|e| ParseError { message: e.to_string(), offset: off })
            }
            _ => err(format!("unknown function '{}'", name), off),
        }
    }

    /// A possibly negated rational literal, for the pow() exponent.
    fn rational_argument(&mut self, off: usize) -> Result<BigRational, ParseError> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.bump() {
            Some(Tok::Int(n)) => {
                let lit = self.maybe_rational_literal(n, off)?;
                let r = lit.as_rational().unwrap().clone();
                Ok(if negate { -r } else { r })
            }
            _ => err("expected a rational exponent", off),
        }
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Int(n)) => u32::try_from(n)
                .map_err(|_| ParseError {
                    message: format!("{} out of range", what),
                    offset: off,
                }),
            _ => err(format!("expected {}", what), off),
        }
    }
}
