//! Text grammar for fixtures.
//!
//! ```text
//! odd: zeta chi eta1
//! 3/2*z^-1*zeta - chi*eta1 + 4
//! ```
//! A term is `coef '*'? factor+` (or a bare coefficient); a factor is `ident ('^' int)?`.
//! Identifiers not declared odd are even and may carry negative exponents.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{AlgebraError, Result, Ring, SuperPoly, Var, Q};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn tokenize(text: &str, offset: usize) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = offset + i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            out.push((pos, Tok::Num(text[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((pos, Tok::Ident(text[start..i].to_string())));
        } else {
            let t = match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '^' => Tok::Caret,
                '/' => Tok::Slash,
                _ => return Err(AlgebraError::Parse { pos, msg: format!("unexpected character `{c}`") }),
            };
            out.push((pos, t));
            i += 1;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(AlgebraError::Parse { pos: self.pos(), msg: msg.to_string() })
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err("expected integer"),
        }
    }

    fn expr(&mut self) -> Result<SuperPoly> {
        let mut acc = SuperPoly::zero(self.ring);
        let mut first = true;
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => {
                    self.at += 1;
                    false
                }
                Some(Tok::Minus) => {
                    self.at += 1;
                    true
                }
                None if !first => break,
                _ if first => false,
                _ => return self.err("expected `+` or `-`"),
            };
            first = false;
            let t = self.term()?;
            acc = if neg { &acc - &t } else { &acc + &t };
            if self.peek().is_none() {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<SuperPoly> {
        let mut coef = Q::one();
        let mut seen = false;
        if let Some(Tok::Num(_)) = self.peek() {
            let n = self.int()?;
            let mut c = Q::from_integer(n);
            if let Some(Tok::Slash) = self.peek() {
                self.at += 1;
                let d = self.int()?;
                if d.is_zero() {
                    return self.err("zero denominator");
                }
                c /= Q::from_integer(d);
            }
            coef = c;
            seen = true;
        }
        let mut t = SuperPoly::constant(self.ring, coef);
        loop {
            let save = self.at;
            if let Some(Tok::Star) = self.peek() {
                self.at += 1;
            }
            match self.peek().cloned() {
                Some(Tok::Ident(name)) => {
                    let p = self.pos();
                    self.at += 1;
                    let mut e: i64 = 1;
                    if let Some(Tok::Caret) = self.peek() {
                        self.at += 1;
                        let neg = matches!(self.peek(), Some(Tok::Minus));
                        if neg {
                            self.at += 1;
                        }
                        let n: i64 = match i64::try_from(self.int()?) {
                            Ok(n) => n,
                            Err(_) => return self.err("exponent too large"),
                        };
                        e = if neg { -n } else { n };
                    }
                    let f = self.factor(&name, e, p)?;
                    t = &t * &f;
                    seen = true;
                }
                _ => {
                    self.at = save;
                    break;
                }
            }
        }
        if !seen {
            return self.err("expected a term");
        }
        Ok(t)
    }

    fn factor(&self, name: &str, e: i64, pos: usize) -> Result<SuperPoly> {
        let v = self
            .ring
            .var(name)
            .ok_or_else(|| AlgebraError::Parse { pos, msg: format!("unknown variable `{name}`") })?;
        match v {
            Var::Even(i) => {
                if e < 0 && !self.ring.is_laurent(i) {
                    return Err(AlgebraError::Parse { pos, msg: format!("`{name}` has no inverse") });
                }
                SuperPoly::gen(self.ring, v).pow(e)
            }
            Var::Odd(_) => match e {
                0 => Ok(SuperPoly::one(self.ring)),
                1 => Ok(SuperPoly::gen(self.ring, v)),
                e if e > 1 => Ok(SuperPoly::zero(self.ring)),
                _ => Err(AlgebraError::Parse { pos, msg: format!("negative power of odd `{name}`") }),
            },
        }
    }
}

impl SuperPoly {
    /// Parses an expression in a fixed ring.
    pub fn parse(ring: &Ring, text: &str) -> Result<SuperPoly> {
        parse_at(ring, text, 0)
    }
}

fn parse_at(ring: &Ring, text: &str, offset: usize) -> Result<SuperPoly> {
    let toks = tokenize(text, offset)?;
    if toks.is_empty() {
        return Err(AlgebraError::Parse { pos: offset, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, at: 0, end: offset + text.len(), ring };
    let out = p.expr()?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// A parsed fixture: a ring built from the header plus the expressions that follow.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub ring: Ring,
    pub polys: Vec<SuperPoly>,
}

/// Parses fixture text. Lines starting with `#` are comments; `odd:` lines declare
/// odd generators in order; every other non-blank line is one expression. Even
/// variables are collected in order of first appearance.
pub fn parse_fixture(text: &str) -> Result<Fixture> {
    let mut odd: Vec<String> = Vec::new();
    let mut exprs: Vec<(usize, &str)> = Vec::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(rest) = trimmed.strip_prefix("odd:") {
            odd.extend(rest.split_whitespace().map(str::to_string));
        } else if !trimmed.is_empty() && !trimmed.starts_with('#') {
            exprs.push((offset, line.trim_end_matches(['\n', '\r'])));
        }
        offset += line.len();
    }
    let mut even: Vec<String> = Vec::new();
    for (off, e) in &exprs {
        for (_, t) in tokenize(e, *off)? {
            if let Tok::Ident(name) = t {
                if !odd.contains(&name) && !even.contains(&name) {
                    even.push(name);
                }
            }
        }
    }
    let ring = Ring::from_names(even.into_iter().map(|n| (n, true)).collect(), odd)?;
    let polys = exprs.iter().map(|(off, e)| parse_at(&ring, e, *off)).collect::<Result<Vec<_>>>()?;
    Ok(Fixture { ring, polys })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str) -> String {
        let f = parse_fixture(text).unwrap();
        f.polys.last().unwrap().to_string()
    }

    #[test]
    fn fixture_examples() {
        assert_eq!(eval("odd: zeta\nzeta*zeta"), "0");
        assert_eq!(eval("odd: a b\nb*a"), "-a*b");
        assert_eq!(eval("z^-1 * z"), "1");
    }

    #[test]
    fn rationals_and_spacing() {
        let r = Ring::new(&[("z", true)], &["zeta"]).unwrap();
        let p = SuperPoly::parse(&r, "1/2 z^2 zeta - 3 + z").unwrap();
        assert_eq!(p.to_string(), "-3 + z + 1/2*z^2*zeta");
        assert_eq!(SuperPoly::parse(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_carry_position() {
        let r = Ring::new(&[("z", true)], &["zeta"]).unwrap();
        match SuperPoly::parse(&r, "z + q") {
            Err(AlgebraError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
        assert!(SuperPoly::parse(&r, "zeta^-1").is_err());
        assert!(SuperPoly::parse(&r, "z +").is_err());
        assert!(parse_fixture("odd: a\n a $").is_err());
    }
}
