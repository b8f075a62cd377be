//! Multivariate polynomials with rational coefficients and their exact
//! integrals over the simplex `R_k = {x in [0,1]^k : x_1 + ... + x_k <= 1}`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, BigRational::one());
        p
    }

    /// `1 - x_1 - ... - x_k`, the default sieve cutoff.
    pub fn one_minus_sum(nvars: usize) -> Self {
        (0..nvars).fold(Self::one(nvars), |acc, i| acc.sub(&Self::var(nvars, i)))
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, BigRational)>) -> Result<Self> {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::invalid(format!(
                    "monomial with {} exponents in {nvars} variables",
                    e.len()
                )));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.nvars);
        let mut total = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (xi, &ei) in x.iter().zip(e) {
                if ei > 0 {
                    term *= num_traits::pow(xi.clone(), ei as usize);
                }
            }
            total += term;
        }
        total
    }

    /// `∫_{R_k} F` via `∫ x^a = (prod a_i!) / (k + sum a_i)!`.
    pub fn integrate_simplex(&self) -> BigRational {
        let k = self.nvars as u32;
        self.terms
            .iter()
            .map(|(e, c)| c * simplex_monomial(k, e))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `∫_0^{1 - sum_{j != m} x_j} F dx_m` as a polynomial in the other
    /// variables.
    pub fn fiber_integral(&self, m: usize) -> Self {
        let rest = self.nvars - 1;
        let s = MultiPoly::one_minus_sum(rest);
        let mut powers = vec![MultiPoly::one(rest)];
        let mut out = Self::zero(rest);
        for (e, c) in &self.terms {
            let a = e[m] as usize + 1;
            while powers.len() <= a {
                let next = powers.last().unwrap().mul(&s);
                powers.push(next);
            }
            let mut other: Vec<u32> = e.clone();
            other.remove(m);
            let mono = MultiPoly::from_terms(rest, vec![(other, c / BigInt::from(a))])
                .expect("arity matches");
            out = out.add(&mono.mul(&powers[a]));
        }
        out
    }

    /// Parses expressions such as `1 - x1 - x2`, `3/2*x1^2*x2 + 1/6`.
    /// Variables are `x1 .. xk`.
    pub fn parse(nvars: usize, s: &str) -> Result<Self> {
        let err = |msg: String| Error::Parse(format!("{msg} in {s:?}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(err("empty expression".into()));
        }
        let mut out = Self::zero(nvars);
        let mut chunks = Vec::new();
        let mut current = String::new();
        for ch in cleaned.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && !current.ends_with('^') {
                chunks.push(std::mem::take(&mut current));
            }
            current.push(ch);
        }
        chunks.push(current);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            let mut coef = BigRational::one();
            let mut exps = vec![0u32; nvars];
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, e) = match var.split_once('^') {
                        Some((i, e)) => (i, e.parse::<u32>().map_err(|e| err(e.to_string()))?),
                        None => (var, 1),
                    };
                    let i: usize = idx.parse().map_err(|_| err(format!("bad variable x{idx}")))?;
                    if i == 0 || i > nvars {
                        return Err(err(format!("variable x{i} outside x1..x{nvars}")));
                    }
                    exps[i - 1] += e;
                } else {
                    coef *= parse_rational(factor).map_err(|_| err(format!("bad factor {factor:?}")))?;
                }
            }
            out.add_term(exps, if neg { -coef } else { coef });
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let mag = c.abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(j, &a)| {
                    if a == 1 {
                        format!("x{}", j + 1)
                    } else {
                        format!("x{}^{a}", j + 1)
                    }
                })
                .collect();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// Accepts integers, fractions `a/b` and finite decimals `0.24`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let v = BigRational::new(n, d);
        return Ok(if neg { -v } else { v });
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `∫_{R_k} x^a dx = (prod a_i!) / (k + sum a_i)!`.
pub fn simplex_monomial(k: u32, exps: &[u32]) -> BigRational {
    let num = exps.iter().fold(BigUint::one(), |acc, &a| acc * factorial(a));
    let den = factorial(k + exps.iter().sum::<u32>());
    BigRational::new(num.into(), den.into())
}

/// `I_k(F)` and `J_k^(m)(F)` for `m = 1..k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexIntegrals {
    pub i_k: BigRational,
    pub j_k: Vec<BigRational>,
}

impl SimplexIntegrals {
    pub fn j_sum(&self) -> BigRational {
        self.j_k.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    /// `sum_m J_k^(m) / I_k`, a lower bound for `M_k`.
    pub fn ratio(&self) -> Result<BigRational> {
        if self.i_k.is_zero() {
            return Err(Error::invalid("I_k(F) vanishes"));
        }
        Ok(self.j_sum() / &self.i_k)
    }
}

pub fn simplex_integrals(f: &MultiPoly) -> Result<SimplexIntegrals> {
    let k = f.nvars();
    if k == 0 {
        return Err(Error::invalid("F needs at least one variable"));
    }
    let i_k = f.mul(f).integrate_simplex();
    let j_k = (0..k)
        .map(|m| {
            let g = f.fiber_integral(m);
            g.mul(&g).integrate_simplex()
        })
        .collect();
    Ok(SimplexIntegrals { i_k, j_k })
}

/// `log k - 2 log log k - 2`.
pub fn mk_lower_bound(k: u64) -> Result<f64> {
    if k < 3 {
        return Err(Error::invalid("the bound needs k >= 3"));
    }
    let l = (k as f64).ln();
    Ok(l - 2.0 * l.ln() - 2.0)
}

/// Rational as a float, for display only.
pub fn approx(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}
