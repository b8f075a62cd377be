//! Text forms for polynomials.
//!
//! The readable form lists terms from the highest power down, e.g.
//! `t^3+2*t+1`. Over a non-prime field coefficients are written in the
//! adjoined root `a`, parenthesised when they have several terms:
//! `(a+1)*t^2+a*t+2`. The parser accepts any sum of products of integers,
//! `a`, `t` and parenthesised field expressions, with `-` for negation.
//!
//! Over `F_2` there is also a compact hex form: the coefficient bitmask,
//! bit `i` holding the coefficient of `t^i` (`0x13` is `t^4+t+1`).

use std::fmt;

use num_bigint::BigUint;
use num_traits::Num;

use super::field::{FieldCtx, Fq};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Borrowing display adapter returned by [`FieldCtx::show`].
pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    field: &'a FieldCtx,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.fmt_poly(self.poly))
    }
}

impl FieldCtx {
    pub fn show<'a>(&'a self, poly: &'a Poly) -> PolyDisplay<'a> {
        PolyDisplay { poly, field: self }
    }

    pub fn fmt_poly(&self, poly: &Poly) -> String {
        if poly.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (k, &c) in poly.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match k {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{k}"),
            };
            let coef = self.fmt_elem(c);
            terms.push(if k == 0 {
                coef
            } else if c.is_one() {
                var
            } else if coef.contains('+') {
                format!("({coef})*{var}")
            } else {
                format!("{coef}*{var}")
            });
        }
        terms.join("+")
    }

    pub fn parse_poly(&self, s: &str) -> Result<Poly> {
        let s = s.trim();
        if s.starts_with("0x") || s.starts_with("0X") {
            return self.poly_from_hex(s);
        }
        let tokens = tokenize(s)?;
        let mut parser = Parser {
            tokens: &tokens,
            pos: 0,
            field: self,
        };
        let terms = parser.sum(false)?;
        if parser.pos != tokens.len() {
            return Err(Error::Parse(format!("unexpected trailing input in {s:?}")));
        }
        let max = terms.iter().map(|&(_, k)| k).max().unwrap_or(0);
        let mut coeffs = vec![Fq::ZERO; max + 1];
        for (c, k) in terms {
            coeffs[k] = self.add(coeffs[k], c);
        }
        Ok(Poly::from_coeffs(coeffs))
    }

    /// Bitmask form; only defined over `F_2`.
    pub fn poly_to_hex(&self, poly: &Poly) -> Result<String> {
        if self.q() != 2 {
            return Err(Error::invalid("hex form is only defined over F_2"));
        }
        Ok(format!("0x{}", poly.index(2).to_str_radix(16)))
    }

    pub fn poly_from_hex(&self, s: &str) -> Result<Poly> {
        if self.q() != 2 {
            return Err(Error::invalid("hex form is only defined over F_2"));
        }
        let digits = s
            .trim()
            .trim_start_matches("0x")
            .trim_start_matches("0X");
        let n = BigUint::from_str_radix(digits, 16)
            .map_err(|e| Error::Parse(format!("bad hex polynomial {s:?}: {e}")))?;
        let coeffs = (0..n.bits())
            .map(|i| if n.bit(i) { Fq::ONE } else { Fq::ZERO })
            .collect();
        Ok(Poly::from_coeffs(coeffs))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u64),
    A,
    T,
    Plus,
    Minus,
    Star,
    Caret,
    Open,
    Close,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&ch) = chars.peek() {
        match ch {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&d) = chars.peek() {
                    let Some(v) = d.to_digit(10) else { break };
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(v as u64))
                        .ok_or_else(|| Error::Parse(format!("integer overflow in {s:?}")))?;
                    chars.next();
                }
                out.push(Tok::Int(n));
            }
            _ => {
                chars.next();
                out.push(match ch {
                    'a' => Tok::A,
                    't' | 'x' | 'T' => Tok::T,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '(' => Tok::Open,
                    ')' => Tok::Close,
                    other => {
                        return Err(Error::Parse(format!(
                            "unexpected character {other:?} in {s:?}"
                        )))
                    }
                });
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Parse("empty polynomial".to_string()));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: &'a [Tok],
    pos: usize,
    field: &'a FieldCtx,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    /// Sum of terms; each term is a coefficient times a power of `t`.
    /// Inside parentheses (`inner`) powers of `t` are rejected.
    fn sum(&mut self, inner: bool) -> Result<Vec<(Fq, usize)>> {
        let mut terms = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, k) = self.term()?;
            if inner && k > 0 {
                return Err(Error::Parse("t inside a coefficient".to_string()));
            }
            terms.push((if negate { self.field.neg(c) } else { c }, k));
            match self.peek() {
                Some(Tok::Plus) => {
                    negate = false;
                    self.pos += 1;
                }
                Some(Tok::Minus) => {
                    negate = true;
                    self.pos += 1;
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn exponent(&mut self) -> Result<u64> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.bump() {
                Some(Tok::Int(n)) => Ok(n),
                _ => Err(Error::Parse("expected an exponent after '^'".to_string())),
            }
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(Fq, usize)> {
        let f = self.field;
        let mut coef = Fq::ONE;
        let mut power = 0usize;
        loop {
            match self.bump() {
                Some(Tok::Int(n)) => coef = f.mul(coef, f.from_int((n % f.characteristic() as u64) as i64)),
                Some(Tok::A) => {
                    if f.ext_degree() == 1 {
                        return Err(Error::Parse(
                            "'a' is only meaningful over a non-prime field".to_string(),
                        ));
                    }
                    let e = self.exponent()?;
                    // a has coordinates (0, 1, 0, ...): index p.
                    let a = Fq::from_raw(f.characteristic());
                    coef = f.mul(coef, f.pow(a, e));
                }
                Some(Tok::T) => {
                    let e = self.exponent()?;
                    power += usize::try_from(e)
                        .map_err(|_| Error::Parse("exponent too large".to_string()))?;
                }
                Some(Tok::Open) => {
                    let inner = self.sum(true)?;
                    if self.bump() != Some(Tok::Close) {
                        return Err(Error::Parse("unbalanced parenthesis".to_string()));
                    }
                    let v = inner.into_iter().fold(Fq::ZERO, |acc, (c, _)| f.add(acc, c));
                    coef = f.mul(coef, v);
                }
                _ => return Err(Error::Parse("expected a term".to_string())),
            }
            match self.peek() {
                Some(Tok::Star) => self.pos += 1,
                // implicit multiplication such as "2t" or "(a+1)t"
                Some(Tok::T) | Some(Tok::A) | Some(Tok::Open) => {}
                _ => break,
            }
        }
        Ok((coef, power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let p = f2.parse_poly("t^3+t+1").unwrap();
        assert_eq!(f2.fmt_poly(&p), "t^3+t+1");
        assert_eq!(f2.poly_to_hex(&p).unwrap(), "0xb");
        assert_eq!(f2.parse_poly("0x13").unwrap(), f2.parse_poly("t^4+t+1").unwrap());
        assert_eq!(f2.parse_poly("t + t").unwrap(), Poly::zero());

        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(f3.fmt_poly(&f3.parse_poly("t^2 - 1").unwrap()), "t^2+2");
        assert_eq!(f3.fmt_poly(&f3.parse_poly("-t").unwrap()), "2*t");
        assert_eq!(f3.fmt_poly(&f3.parse_poly("2t^2*t").unwrap()), "2*t^3");
        assert_eq!(f3.fmt_poly(&Poly::zero()), "0");
        assert!(f3.parse_poly("a*t").is_err());
        assert!(f3.parse_poly("t^").is_err());
        assert!(f3.parse_poly("").is_err());
        assert!(f3.parse_poly("t+?").is_err());
        assert!(f3.parse_poly("0x3").is_err());
    }

    #[test]
    fn extension_field_coefficients() {
        let f9 = FieldCtx::new(9).unwrap();
        let p = f9.parse_poly("(a+1)*t^2+a*t+2").unwrap();
        assert_eq!(f9.fmt_poly(&p), "(a+1)*t^2+a*t+2");
        // a^2 = -1 for the modulus x^2 + 1
        assert_eq!(f9.parse_poly("a^2").unwrap(), f9.parse_poly("2").unwrap());
        let c = f9.parse_poly("t+a+1").unwrap();
        assert_eq!(f9.fmt_poly(&c), "t+a+1");
    }

    proptest! {
        #[test]
        fn text_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5, 9, 25]),
                           raw in prop::collection::vec(0u32..25, 0..12)) {
            let f = FieldCtx::new(q).unwrap();
            let coeffs = raw.into_iter().map(|c| Fq::from_raw(c % f.q())).collect();
            let p = Poly::from_coeffs(coeffs);
            prop_assert_eq!(f.parse_poly(&f.fmt_poly(&p)).unwrap(), p.clone());
            if q == 2 {
                prop_assert_eq!(f.parse_poly(&f.poly_to_hex(&p).unwrap()).unwrap(), p);
            }
        }
    }
}
