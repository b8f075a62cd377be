//! Dense univariate polynomials over `F_q`.
//!
//! A [`Poly`] is plain data; every operation that needs field arithmetic takes
//! the [`FieldCtx`] explicitly.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::field::{FieldCtx, Fq};
use crate::error::{Error, Result};

/// Polynomial with coefficients stored low-to-high, never with a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

/// Canonical order: by degree, then by coefficients from the top down
/// (element indices compared as integers). The zero polynomial is smallest.
/// For monic polynomials of a fixed degree this is the enumeration order of
/// [`Poly::monic_from_index`].
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn trim(v: &mut Vec<Fq>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Fq::ONE],
        }
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly {
            coeffs: vec![Fq::ZERO, Fq::ONE],
        }
    }

    pub fn constant(c: Fq) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * t^n`.
    pub fn monomial(c: Fq, n: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Fq::ZERO; n + 1];
        coeffs[n] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fq>) -> Self {
        trim(&mut coeffs);
        Poly { coeffs }
    }

    /// Polynomial whose coefficient indices are the base-`q` digits of `index`.
    pub fn from_index(mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(Fq::from_raw((index % q as u64) as u32));
            index /= q as u64;
        }
        Poly { coeffs }
    }

    /// The `index`-th monic polynomial of degree `deg` in canonical order,
    /// `0 <= index < q^deg`.
    pub fn monic_from_index(deg: usize, mut index: u64, q: u32) -> Self {
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(Fq::from_raw((index % q as u64) as u32));
            index /= q as u64;
        }
        coeffs.push(Fq::ONE);
        Poly { coeffs }
    }

    /// Inverse of [`Poly::from_index`]: coefficients read as base-`q` digits.
    pub fn index(&self, q: u32) -> BigUint {
        self.coeffs
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, c| acc * q + c.index())
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Fq> {
        self.coeffs
    }

    /// Coefficient of `t^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn degree_i64(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn leading(&self) -> Option<Fq> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Fq::ONE)
    }

    pub fn neg(&self, f: &FieldCtx) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn add(&self, other: &Poly, f: &FieldCtx) -> Poly {
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut coeffs = long.coeffs.clone();
        for (c, &s) in coeffs.iter_mut().zip(&short.coeffs) {
            *c = f.add(*c, s);
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &Poly, f: &FieldCtx) -> Poly {
        self.add(&other.neg(f), f)
    }

    pub fn scale(&self, c: Fq, f: &FieldCtx) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|&x| f.mul(x, c)).collect(),
        }
    }

    /// Multiplication by `t^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Fq::ZERO; n];
        coeffs.extend_from_slice(&self.coeffs);
        Poly { coeffs }
    }

    pub fn mul(&self, other: &Poly, f: &FieldCtx) -> Poly {
        Poly::from_coeffs(mul_slices(&self.coeffs, &other.coeffs, f))
    }

    pub fn square(&self, f: &FieldCtx) -> Poly {
        if f.characteristic() == 2 {
            // (sum a_i t^i)^2 = sum a_i^2 t^(2i)
            let mut coeffs = vec![Fq::ZERO; (2 * self.coeffs.len()).saturating_sub(1)];
            for (i, &c) in self.coeffs.iter().enumerate() {
                coeffs[2 * i] = f.mul(c, c);
            }
            return Poly { coeffs };
        }
        self.mul(self, f)
    }

    /// Monic associate and the leading coefficient: `self = lc * monic`.
    pub fn monic(&self, f: &FieldCtx) -> Result<(Fq, Poly)> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial)?;
        if lc.is_one() {
            return Ok((lc, self.clone()));
        }
        let inv = f.inv(lc).expect("nonzero leading coefficient");
        Ok((lc, self.scale(inv, f)))
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Poly, f: &FieldCtx) -> Result<(Poly, Poly)> {
        let lc = divisor.leading().ok_or(Error::DivisionByZero)?;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let inv = f.inv(lc).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut quot = vec![Fq::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let factor = f.mul(c, inv);
            quot[i - dd] = factor;
            for (j, &m) in divisor.coeffs.iter().enumerate() {
                r[i - dd + j] = f.sub(r[i - dd + j], f.mul(factor, m));
            }
        }
        r.truncate(dd);
        Ok((Poly::from_coeffs(quot), Poly::from_coeffs(r)))
    }

    pub fn rem(&self, divisor: &Poly, f: &FieldCtx) -> Result<Poly> {
        if divisor.is_monic() {
            let mut r = self.coeffs.clone();
            rem_monic_in_place(&mut r, &divisor.coeffs, f);
            return Ok(Poly { coeffs: r });
        }
        Ok(self.div_rem(divisor, f)?.1)
    }

    /// Quotient of an exact division.
    pub fn exact_div(&self, divisor: &Poly, f: &FieldCtx) -> Result<Poly> {
        let (q, r) = self.div_rem(divisor, f)?;
        if !r.is_zero() {
            return Err(Error::invalid("division is not exact"));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly, f: &FieldCtx) -> Result<bool> {
        Ok(other.rem(self, f)?.is_zero())
    }

    /// Formal derivative.
    pub fn derivative(&self, f: &FieldCtx) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int(i as i64), c))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Horner evaluation at a field element.
    pub fn eval(&self, x: Fq, f: &FieldCtx) -> Fq {
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn pow(&self, mut n: u64, f: &FieldCtx) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, f);
            }
            n >>= 1;
            if n > 0 {
                base = base.square(f);
            }
        }
        acc
    }

    /// `|f| = q^deg f`. Undefined for the zero polynomial.
    pub fn norm(&self, f: &FieldCtx) -> Result<BigUint> {
        let d = self.degree().ok_or(Error::ZeroPolynomial)?;
        Ok(BigUint::from(f.q()).pow(d as u32))
    }
}

fn mul_slices(a: &[Fq], b: &[Fq], f: &FieldCtx) -> Vec<Fq> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let n = a.len() + b.len() - 1;
    if f.ext_degree() == 1 && f.characteristic() > 2 {
        let p = f.characteristic() as u64;
        let mut acc = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let x = x.index() as u64;
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += x * y.index() as u64;
            }
            // Keep the accumulators far from overflow for large p.
            if p > 1 << 16 {
                for v in acc.iter_mut() {
                    *v %= p;
                }
            }
        }
        return acc
            .into_iter()
            .map(|v| Fq::from_raw((v % p) as u32))
            .collect();
    }
    let mut out = vec![Fq::ZERO; n];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    out
}

/// Reduces `r` modulo a monic `m` in place and trims.
pub(crate) fn rem_monic_in_place(r: &mut Vec<Fq>, m: &[Fq], f: &FieldCtx) {
    let dm = m.len() - 1;
    if r.len() > dm {
        for i in (dm..r.len()).rev() {
            let c = r[i];
            if c.is_zero() {
                continue;
            }
            let nc = f.neg(c);
            for j in 0..dm {
                let mj = m[j];
                if !mj.is_zero() {
                    r[i - dm + j] = f.add(r[i - dm + j], f.mul(nc, mj));
                }
            }
        }
        r.truncate(dm);
    }
    trim(r);
}

/// Arithmetic in `F_q[t]/(m)` for a fixed modulus.
#[derive(Clone, Debug)]
pub struct ModRing<'a> {
    modulus: Poly,
    field: &'a FieldCtx,
}

impl<'a> ModRing<'a> {
    pub fn new(modulus: &Poly, field: &'a FieldCtx) -> Result<Self> {
        let (_, modulus) = modulus.monic(field).map_err(|_| Error::DivisionByZero)?;
        Ok(ModRing { modulus, field })
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        let mut r = a.coeffs.clone();
        rem_monic_in_place(&mut r, &self.modulus.coeffs, self.field);
        Poly { coeffs: r }
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut r = mul_slices(&a.coeffs, &b.coeffs, self.field);
        rem_monic_in_place(&mut r, &self.modulus.coeffs, self.field);
        Poly { coeffs: r }
    }

    pub fn square(&self, a: &Poly) -> Poly {
        let mut r = a.square(self.field).coeffs;
        rem_monic_in_place(&mut r, &self.modulus.coeffs, self.field);
        Poly { coeffs: r }
    }

    /// `a^n mod m` by left-to-right square-and-multiply.
    pub fn pow(&self, a: &Poly, n: &BigUint) -> Poly {
        let base = self.reduce(a);
        let mut acc = self.reduce(&Poly::one());
        for i in (0..n.bits()).rev() {
            acc = self.square(&acc);
            if n.bit(i) {
                acc = self.mul(&acc, &base);
            }
        }
        acc
    }

    pub fn pow_u64(&self, a: &Poly, n: u64) -> Poly {
        self.pow(a, &BigUint::from(n))
    }
}

/// `a^n mod m`.
pub fn powmod(a: &Poly, n: &BigUint, m: &Poly, f: &FieldCtx) -> Result<Poly> {
    Ok(ModRing::new(m, f)?.pow(a, n))
}

/// Monic greatest common divisor.
pub fn gcd(a: &Poly, b: &Poly, f: &FieldCtx) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y, f)?;
        x = y;
        y = r;
    }
    Ok(x.monic(f)?.1)
}

/// Extended Euclid: returns `(g, u, v)` with `u*a + v*b = g`, `g` monic.
pub fn ext_gcd(a: &Poly, b: &Poly, f: &FieldCtx) -> Result<(Poly, Poly, Poly)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (Poly::one(), Poly::zero());
    let (mut t0, mut t1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1, f)?;
        let s = s0.sub(&q.mul(&s1, f), f);
        let t = t0.sub(&q.mul(&t1, f), f);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    let lc = r0.leading().expect("gcd of not-both-zero inputs is nonzero");
    let inv = f.inv(lc).expect("nonzero");
    Ok((r0.scale(inv, f), s0.scale(inv, f), t0.scale(inv, f)))
}

/// Monic least common multiple of two nonzero polynomials.
pub fn lcm(a: &Poly, b: &Poly, f: &FieldCtx) -> Result<Poly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = gcd(a, b, f)?;
    let l = a.exact_div(&g, f)?.mul(b, f);
    Ok(l.monic(f)?.1)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inverse_mod(a: &Poly, m: &Poly, f: &FieldCtx) -> Result<Option<Poly>> {
    if m.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let a = a.rem(m, f)?;
    if a.is_zero() {
        return Ok(m.is_unit().then(Poly::zero));
    }
    let (g, u, _) = ext_gcd(&a, m, f)?;
    if !g.is_one() {
        return Ok(None);
    }
    Ok(Some(u.rem(m, f)?))
}

/// Chinese remaindering for pairwise coprime moduli.
///
/// Returns the unique residue modulo the product, reduced (degree below the
/// degree of the product). Unit moduli impose no condition.
pub fn crt(pairs: &[(Poly, Poly)], f: &FieldCtx) -> Result<Poly> {
    let mut x = Poly::zero();
    let mut modulus = Poly::one();
    for (r, m) in pairs {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (_, m) = m.monic(f)?;
        if !gcd(&modulus, &m, f)?.is_one() {
            return Err(Error::NotCoprime);
        }
        let r = r.rem(&m, f)?;
        // x + modulus * k with k = (r - x) * modulus^{-1} mod m
        let inv = inverse_mod(&modulus, &m, f)?.expect("coprime moduli");
        let k = r.sub(&x, f).mul(&inv, f).rem(&m, f)?;
        x = x.add(&modulus.mul(&k, f), f);
        modulus = modulus.mul(&m, f);
        x = x.rem(&modulus, f)?;
    }
    Ok(x)
}

/// Chinese remaindering without the coprimality requirement.
///
/// Returns `Some((x, L))` where `L` is the monic lcm of the moduli and `x`
/// the reduced common solution, or `None` when the system is inconsistent.
pub fn crt_general(pairs: &[(Poly, Poly)], f: &FieldCtx) -> Result<Option<(Poly, Poly)>> {
    let mut x = Poly::zero();
    let mut modulus = Poly::one();
    for (r, m) in pairs {
        if m.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (_, m) = m.monic(f)?;
        let (g, u, _) = ext_gcd(&modulus, &m, f)?;
        let diff = r.sub(&x, f);
        let (k, rest) = diff.div_rem(&g, f)?;
        if !rest.is_zero() {
            return Ok(None);
        }
        // modulus * u ≡ g (mod m), so x + modulus * u * (diff / g) solves both.
        let m_over_g = m.exact_div(&g, f)?;
        let step = u.mul(&k, f).rem(&m_over_g, f)?;
        let new_mod = modulus.mul(&m_over_g, f);
        x = x.add(&modulus.mul(&step, f), f).rem(&new_mod, f)?;
        modulus = new_mod;
    }
    Ok(Some((x, modulus)))
}

/// Squarefree part test helper: true iff `f` has no repeated factor.
pub fn is_squarefree(a: &Poly, f: &FieldCtx) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.degree() == Some(0) {
        return Ok(true);
    }
    let d = a.derivative(f);
    if d.is_zero() {
        return Ok(false);
    }
    Ok(gcd(a, &d, f)?.is_one())
}

/// Iterator over all monic polynomials of the given degree in canonical order.
pub fn monic_of_degree(deg: usize, q: u32) -> impl Iterator<Item = Poly> {
    let count = (q as u64).pow(deg as u32);
    (0..count).map(move |i| Poly::monic_from_index(deg, i, q))
}

/// `BigUint` power helper for `q^n`.
pub fn big_pow(q: u32, n: usize) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..n {
        acc *= q;
    }
    acc
}
