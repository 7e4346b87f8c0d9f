//! Text input: weights and polynomial expressions in z_1..z_r over Q(κ).
//!
//! The expression grammar accepts everything the crate prints (both styles)
//! plus the usual CAS conventions:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/' | <juxtaposition>) power)*
//! unary   := ('-' | '+') unary | power
//! power   := primary ('^' integer)?
//! primary := integer | 'z' digits | 'z_' digits | 'k' | 'κ' | 'kappa' | '(' expr ')'
//! ```
//!
//! Division is only allowed by z-free, nonzero values.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeffring::{Coefficient, KappaRational, ZPolynomial};
use crate::error::{Error, Result};
use crate::rootsystem::Weight;

const MAX_INPUT: usize = 1 << 16;
const MAX_EXPONENT: u32 = 64;
const MAX_DEPTH: usize = 64;
const MAX_TERMS: usize = 20_000;
const MAX_KAPPA_DEGREE: usize = 256;
const MAX_COEFF_BITS: u64 = 1 << 16;
const MAX_LITERAL_DIGITS: usize = 1000;

/// Parses a weight: comma-separated labels (`2,0,0,0,0,0,0`) or, without a
/// comma, exactly `rank` single digits (`2000000`).
pub fn parse_weight(text: &str, rank: usize) -> Result<Weight> {
    let t = text.trim();
    if t.is_empty() {
        return Err(Error::parse(0, "empty weight"));
    }
    let labels: Vec<i32> = if t.contains(',') {
        let mut out = Vec::new();
        let mut offset = 0;
        for part in t.split(',') {
            let p = part.trim();
            let v = p
                .parse::<i32>()
                .map_err(|_| Error::parse(offset, format!("invalid label '{p}'")))?;
            if v.unsigned_abs() > 1_000_000 {
                return Err(Error::parse(offset, "label out of range"));
            }
            out.push(v);
            offset += part.len() + 1;
        }
        out
    } else if rank == 1 {
        let v = t
            .parse::<i32>()
            .map_err(|_| Error::parse(0, format!("invalid label '{t}'")))?;
        if v.unsigned_abs() > 1_000_000 {
            return Err(Error::parse(0, "label out of range"));
        }
        vec![v]
    } else {
        if let Some((i, c)) = t.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
            return Err(Error::parse(i, format!("unexpected '{c}' in weight")));
        }
        t.bytes().map(|b| (b - b'0') as i32).collect()
    };
    if labels.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            found: labels.len(),
        });
    }
    Ok(Weight::new(&labels))
}

/// Parses a polynomial in `z1..z{nvars}` with coefficients in Q(κ).
pub fn parse_expression(text: &str, nvars: usize) -> Result<ZPolynomial<KappaRational>> {
    if text.len() > MAX_INPUT {
        return Err(Error::parse(0, "input too long"));
    }
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        depth: 0,
        nvars,
        end: text.len(),
    };
    let value = p.expr()?;
    if let Some(t) = p.tokens.get(p.pos) {
        return Err(Error::parse(t.offset, "unexpected trailing input"));
    }
    Ok(value)
}

/// Parses a z-free expression as an element of Q(κ), e.g.
/// `7 (-1 + k)/(1 + 17 k)`.
pub fn parse_kappa_rational(text: &str) -> Result<KappaRational> {
    let p = parse_expression(text, 0)?;
    let value = p.terms().next().map(|(_, c)| c.clone()).unwrap_or_default();
    Ok(value)
}

/// Parses a rational number `p`, `p/q` or `-p/q`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if t.len() > MAX_LITERAL_DIGITS {
        return Err(Error::parse(0, "number too long"));
    }
    let q = BigRational::from_str(t).map_err(|e| Error::parse(0, format!("invalid rational '{t}': {e}")))?;
    Ok(q)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Kappa,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    offset: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < text.len() {
        let c = text[i..].chars().next().unwrap();
        let start = i;
        let simple = match c {
            '+' => Some(Tok::Plus),
            '-' | '−' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            'κ' => Some(Tok::Kappa),
            _ => None,
        };
        if let Some(tok) = simple {
            i += c.len_utf8();
            out.push(Token { tok, offset: start });
            continue;
        }
        if c.is_whitespace() {
            i += c.len_utf8();
            continue;
        }
        if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i - start > MAX_LITERAL_DIGITS {
                return Err(Error::parse(start, "integer literal too long"));
            }
            let n = BigInt::from_str(&text[start..i]).unwrap();
            out.push(Token {
                tok: Tok::Int(n),
                offset: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            let tok = match word {
                "k" | "kappa" => Tok::Kappa,
                _ => {
                    let idx = word
                        .strip_prefix("z_")
                        .or_else(|| word.strip_prefix('z'))
                        .filter(|d| !d.is_empty() && d.len() <= 4 && d.bytes().all(|b| b.is_ascii_digit()))
                        .ok_or_else(|| Error::parse(start, format!("unknown identifier '{word}'")))?;
                    Tok::Var(idx.parse().unwrap())
                }
            };
            out.push(Token { tok, offset: start });
            continue;
        }
        return Err(Error::parse(start, format!("unexpected character '{c}'")));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
    nvars: usize,
    end: usize,
}

type Poly = ZPolynomial<KappaRational>;

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.tok)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |t| t.offset)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(Error::parse(self.offset(), "expression nested too deeply"))
        } else {
            Ok(())
        }
    }

    fn limit(&self, p: Poly, at: usize) -> Result<Poly> {
        if p.len() > MAX_TERMS {
            return Err(Error::parse(at, "expression too large"));
        }
        for (_, c) in p.terms() {
            for poly in [c.num(), c.den()] {
                if poly.degree().unwrap_or(0) > MAX_KAPPA_DEGREE {
                    return Err(Error::parse(at, "κ-degree too large"));
                }
                if poly.coeffs().iter().any(|x| x.bits() > MAX_COEFF_BITS) {
                    return Err(Error::parse(at, "coefficient too large"));
                }
            }
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<Poly> {
        self.enter()?;
        let mut acc = self.term()?;
        while let Some(op) = self.peek().cloned() {
            let at = self.offset();
            let rhs = match op {
                Tok::Plus => {
                    self.pos += 1;
                    self.term()?
                }
                Tok::Minus => {
                    self.pos += 1;
                    self.term()?.neg()
                }
                _ => break,
            };
            acc = self.limit(acc.add(&rhs)?, at)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn starts_primary(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Int(_) | Tok::Var(_) | Tok::Kappa | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            let at = self.offset();
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    acc = self.limit(acc.mul(&rhs)?, at)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    let d = z_free(&rhs).ok_or_else(|| Error::parse(at, "division by a z-dependent expression"))?;
                    if d.is_zero() {
                        return Err(Error::parse(at, "division by zero"));
                    }
                    acc = self.limit(acc.scale(&d.inv()?), at)?;
                }
                _ if self.starts_primary() => {
                    let rhs = self.power()?;
                    acc = self.limit(acc.mul(&rhs)?, at)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                self.enter()?;
                let v = self.unary()?.neg();
                self.depth -= 1;
                Ok(v)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.enter()?;
                let v = self.unary()?;
                self.depth -= 1;
                Ok(v)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.primary()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let at = self.offset();
        self.pos += 1;
        let e = match self.peek() {
            Some(Tok::Int(n)) => u32::try_from(n)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::parse(self.offset(), format!("exponent must be at most {MAX_EXPONENT}")))?,
            _ => return Err(Error::parse(self.offset(), "expected a non-negative integer exponent")),
        };
        self.pos += 1;
        let mut acc = Poly::one(self.nvars);
        for _ in 0..e {
            acc = self.limit(acc.mul(&base)?, at)?;
        }
        Ok(acc)
    }

    fn primary(&mut self) -> Result<Poly> {
        let at = self.offset();
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::parse(at, "unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(Poly::constant(self.nvars, KappaRational::from_bigint(&n))),
            Tok::Kappa => Ok(Poly::constant(self.nvars, KappaRational::kappa())),
            Tok::Var(j) => {
                if j == 0 || j > self.nvars {
                    Err(Error::parse(at, format!("variable z{j} out of range 1..={}", self.nvars)))
                } else {
                    Ok(Poly::variable(self.nvars, j))
                }
            }
            Tok::LParen => {
                let v = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::parse(self.offset(), "expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            _ => Err(Error::parse(at, "expected a number, variable or '('")),
        }
    }
}

fn z_free(p: &Poly) -> Option<KappaRational> {
    match p.len() {
        0 => Some(KappaRational::zero_elem()),
        1 => {
            let (m, c) = p.terms().next().unwrap();
            m.is_one().then(|| c.clone())
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::{KappaPoly, Style};

    fn kr(num: &[i64], den: &[i64]) -> KappaRational {
        KappaRational::new(KappaPoly::from_i64s(num), KappaPoly::from_i64s(den)).unwrap()
    }

    #[test]
    fn weights_in_both_forms() {
        assert_eq!(parse_weight("2,0,0,0,0,0,0", 7).unwrap().labels(), &[2, 0, 0, 0, 0, 0, 0]);
        assert_eq!(parse_weight("0000002", 7).unwrap().labels(), &[0, 0, 0, 0, 0, 0, 2]);
        assert_eq!(parse_weight(" 1, -1 ", 2).unwrap().labels(), &[1, -1]);
        assert_eq!(parse_weight("12", 1).unwrap().labels(), &[12]);
        assert!(matches!(parse_weight("000002", 7), Err(Error::DimensionMismatch { .. })));
        assert!(parse_weight("1,x", 2).is_err());
        assert!(parse_weight("", 2).is_err());
    }

    #[test]
    fn kappa_rationals() {
        assert_eq!(parse_kappa_rational("7 (-1 + k)/(1 + 17 k)").unwrap(), kr(&[-7, 7], &[1, 17]));
        assert_eq!(parse_kappa_rational("(2)/(1 + κ)").unwrap(), kr(&[2], &[1, 1]));
        assert_eq!(parse_kappa_rational("28*(-1 + k)*k/(1 + 4*k)^2").unwrap(), kr(&[0, -28, 28], &[1, 8, 16]));
        assert!(parse_kappa_rational("1/(k - k)").is_err());
        assert!(parse_kappa_rational("z1").is_err());
    }

    #[test]
    fn expressions_round_trip_through_rendering() {
        let p = parse_expression("-28 + 4 z1 + k (28 + 68 z1)", 7).unwrap();
        let q = parse_expression(&p.render(Style::Explicit), 7).unwrap();
        assert_eq!(p, q);
        let q = parse_expression(&p.render(Style::Text), 7).unwrap();
        assert_eq!(p, q);
        let r = parse_expression("z2-6z7", 7).unwrap();
        assert_eq!(r.to_string(), "z2 - 6 z7");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_expression("z8", 7).is_err());
        assert!(parse_expression("z1/z2", 7).is_err());
        assert!(parse_expression("z1^65", 7).is_err());
        assert!(parse_expression("(z1", 7).is_err());
        assert!(parse_expression("z1 +", 7).is_err());
        assert!(parse_expression("foo", 7).is_err());
        assert!(parse_expression(&"(".repeat(1000), 7).is_err());
        assert!(parse_expression("(z1+z2+z3+z4+z5+z6+z7+1)^40", 7).is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("1/2").unwrap(), BigRational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
