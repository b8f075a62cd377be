//! The finite field `F_q`, `q = p^e`, as a table-driven context.
//!
//! Elements are stored as their *index*: the integer `sum c_i p^i` built from
//! the coordinates `c_i` with respect to the power basis `1, a, ..., a^(e-1)`,
//! where `a` is a root of the defining modulus. Index 0 is zero and index 1 is
//! one; for a prime field the index is the residue itself. Multiplication goes
//! through discrete-log tables built from a fixed generator.

use std::fmt;

use crate::error::{Error, Result};
use crate::factorizer::integer::trial_prime_factors;

/// Largest field size a [`FieldCtx`] will build tables for.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

/// An element of `F_q`, identified by its coordinate index.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
#[repr(transparent)]
pub struct Fq(u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.0 == 1
    }

    #[inline]
    pub(crate) fn from_raw(i: u32) -> Fq {
        Fq(i)
    }
}

/// Description of `F_q` together with its arithmetic tables.
///
/// Shareable across threads; nothing is mutated after construction.
#[derive(Clone)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    q: u32,
    modulus: Option<Vec<u32>>,
    generator: Fq,
    // exp has length 2(q-1) so a sum of two logs never needs reducing.
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .field("generator", &self.generator)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.modulus == other.modulus && self.generator == other.generator
    }
}

impl Eq for FieldCtx {}

fn prime_power_decomposition(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let primes = trial_prime_factors(q);
    if primes.len() != 1 {
        return None;
    }
    let p = primes[0];
    let mut e = 0;
    let mut n = q;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    Some((p, e))
}

// Dense F_p polynomial helpers used only while bootstrapping the tables.

fn fp_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    // m is monic
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r[r.len() - 1];
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                let sub = (lead as u64 * c as u64 % p as u64) as u32;
                r[shift + i] = (r[shift + i] + p - sub) % p;
            }
        }
        r.pop();
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    fp_rem(&prod, m, p)
}

fn digits(mut index: u64, p: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push((index % p as u64) as u32);
        index /= p as u64;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0u32, |acc, &c| acc * p + c)
}

fn fp_is_irreducible(f: &[u32], p: u32) -> bool {
    // Trial division by every monic polynomial of degree 1..=deg/2.
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            let mut g = digits(idx, p, d);
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible of degree `e` over `F_p`,
/// ordered by the index of its non-leading coefficients.
fn smallest_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for idx in 0..count {
        let mut f = digits(idx, p, e as usize);
        f.push(1);
        if f[0] != 0 && fp_is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldCtx {
    /// Builds `F_q`. `q` must be a prime power no larger than [`MAX_FIELD_SIZE`].
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power_decomposition(q)
            .ok_or_else(|| Error::invalid(format!("q = {q} is not a prime power")))?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::invalid(format!(
                "q = {q} exceeds the supported field size {MAX_FIELD_SIZE}"
            )));
        }
        let p = p as u32;
        let q = q as u32;
        let modulus = (e > 1).then(|| smallest_irreducible(p, e));

        let mul_raw = |a: u32, b: u32| -> u32 {
            match &modulus {
                None => ((a as u64 * b as u64) % p as u64) as u32,
                Some(m) => {
                    let da = digits(a as u64, p, e as usize);
                    let db = digits(b as u64, p, e as usize);
                    let r = fp_mulmod(&da, &db, m, p);
                    undigits(&r, p)
                }
            }
        };

        let order = q - 1;
        let order_primes = trial_prime_factors(order as u64);
        let pow_raw = |a: u32, mut n: u64| -> u32 {
            let mut base = a;
            let mut acc = 1u32;
            while n > 0 {
                if n & 1 == 1 {
                    acc = mul_raw(acc, base);
                }
                base = mul_raw(base, base);
                n >>= 1;
            }
            acc
        };
        let generator = (1..q)
            .find(|&c| {
                order_primes
                    .iter()
                    .all(|&r| pow_raw(c, order as u64 / r) != 1)
            })
            .expect("the multiplicative group of a finite field is cyclic");

        let mut exp = Vec::with_capacity(2 * order as usize);
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..order {
            exp.push(x);
            log[x as usize] = i;
            x = mul_raw(x, generator);
        }
        debug_assert_eq!(x, 1);
        exp.extend_from_within(..);

        let neg = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a as u64, p, e as usize)
                    .into_iter()
                    .map(|c| (p - c) % p)
                    .collect();
                undigits(&d, p)
            })
            .collect();

        let add_table = (p > 2 && e > 1 && q <= 1024).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a as u64, p, e as usize);
                for b in 0..q {
                    let db = digits(b as u64, p, e as usize);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p);
                }
            }
            t
        });

        Ok(FieldCtx {
            p,
            e,
            q,
            modulus,
            generator: Fq(generator),
            exp,
            log,
            neg,
            add_table,
        })
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn ext_degree(&self) -> u32 {
        self.e
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Order of `F_q^*`.
    #[inline]
    pub fn unit_order(&self) -> u32 {
        self.q - 1
    }

    /// Defining modulus over `F_p`, low-to-high coefficients; `None` for prime fields.
    pub fn modulus(&self) -> Option<&[u32]> {
        self.modulus.as_deref()
    }

    /// The fixed generator of `F_q^*`.
    #[inline]
    pub fn generator(&self) -> Fq {
        self.generator
    }

    /// Element with the given index.
    pub fn elem(&self, index: u32) -> Result<Fq> {
        if index < self.q {
            Ok(Fq(index))
        } else {
            Err(Error::invalid(format!(
                "element index {index} out of range for F_{}",
                self.q
            )))
        }
    }

    /// Image of an integer in the prime subfield.
    #[inline]
    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    /// Coordinates with respect to the power basis (length `e`, each in `[0, p)`).
    pub fn coords(&self, a: Fq) -> Vec<u32> {
        digits(a.0 as u64, self.p, self.e as usize)
    }

    pub fn from_coords(&self, coords: &[u32]) -> Result<Fq> {
        if coords.len() > self.e as usize || coords.iter().any(|&c| c >= self.p) {
            return Err(Error::invalid("coordinates out of range"));
        }
        Ok(Fq(undigits(coords, self.p)))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q).map(Fq)
    }

    #[inline]
    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.p == 2 {
            Fq(a.0 ^ b.0)
        } else if self.e == 1 {
            let s = a.0 + b.0;
            Fq(if s >= self.p { s - self.p } else { s })
        } else if let Some(t) = &self.add_table {
            Fq(t[(a.0 * self.q + b.0) as usize])
        } else {
            let (mut x, mut y) = (a.0, b.0);
            let mut out = 0;
            let mut place = 1;
            while x > 0 || y > 0 {
                out += ((x % self.p + y % self.p) % self.p) * place;
                x /= self.p;
                y /= self.p;
                place *= self.p;
            }
            Fq(out)
        }
    }

    #[inline]
    pub fn neg(&self, a: Fq) -> Fq {
        Fq(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.0 == 0 || b.0 == 0 {
            return Fq::ZERO;
        }
        Fq(self.exp[(self.log[a.0 as usize] + self.log[b.0 as usize]) as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Fq) -> Option<Fq> {
        if a.0 == 0 {
            return None;
        }
        let l = self.log[a.0 as usize];
        Some(Fq(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize]))
    }

    pub fn pow(&self, a: Fq, n: u64) -> Fq {
        if n == 0 {
            return Fq::ONE;
        }
        if a.0 == 0 {
            return Fq::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let ord = (self.q - 1) as u64;
        Fq(self.exp[((l * (n % ord)) % ord) as usize])
    }

    /// `g^k` for the fixed generator `g`.
    #[inline]
    pub fn gen_pow(&self, k: u64) -> Fq {
        Fq(self.exp[(k % (self.q - 1) as u64) as usize])
    }

    /// Discrete logarithm to the fixed generator; `None` for zero.
    #[inline]
    pub fn dlog(&self, a: Fq) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fq) -> Option<u32> {
        let l = self.dlog(a)?;
        let n = self.q - 1;
        Some(n / num_integer::gcd(l, n))
    }

    /// The unique `p`-th root (Frobenius is bijective on `F_q`).
    pub fn pth_root(&self, a: Fq) -> Fq {
        self.pow(a, (self.q / self.p) as u64)
    }

    /// Writes an element; prime-field elements as integers, others as a
    /// polynomial in the adjoined root `a`.
    pub fn fmt_elem(&self, x: Fq) -> String {
        if self.e == 1 {
            return x.0.to_string();
        }
        let c = self.coords(x);
        let mut terms = Vec::new();
        for (i, &ci) in c.iter().enumerate().rev() {
            if ci == 0 {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            terms.push(match (ci, i) {
                (_, 0) => ci.to_string(),
                (1, _) => var,
                _ => format!("{ci}*{var}"),
            });
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join("+")
        }
    }
}
