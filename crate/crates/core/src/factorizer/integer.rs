//! Factorization of machine-sized integers: trial division, deterministic
//! Miller-Rabin and Brent's variant of Pollard rho.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Prime factorization `n = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntFactorization {
    parts: Vec<(u64, u32)>,
}

impl IntFactorization {
    pub fn parts(&self) -> &[(u64, u32)] {
        &self.parts
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> usize {
        self.parts.len()
    }

    pub fn value(&self) -> BigUint {
        self.parts
            .iter()
            .fold(BigUint::one(), |acc, &(p, e)| acc * BigUint::from(p).pow(e))
    }

    /// Euler's totient of the factored integer.
    pub fn totient(&self) -> BigUint {
        self.parts.iter().fold(BigUint::one(), |acc, &(p, e)| {
            acc * BigUint::from(p).pow(e - 1) * (p - 1)
        })
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic for every `n < 2^64` with the first twelve prime bases.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime divisors by trial division. Intended for small inputs
/// (field sizes, degrees); use [`integer_factorize`] otherwise.
pub fn trial_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

const RHO_ITERATION_CAP: u64 = 1 << 26;

/// A nontrivial factor of an odd composite `n`, or `None` if the iteration cap
/// is hit for every constant tried.
fn brent_rho(n: u64) -> Option<u64> {
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let (mut x, mut ys);
        let m = 128u64;
        let mut g;
        let mut steps = 0u64;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = num_integer::gcd(q, n);
                k += m;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            steps += r;
            if g != 1 || steps > RHO_ITERATION_CAP {
                break;
            }
        }
        if g == n {
            // Backtrack one step at a time from the saved point.
            loop {
                ys = f(ys);
                g = num_integer::gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != 1 && g != n {
            return Some(g);
        }
    }
    None
}

fn split(n: u64, out: &mut Vec<u64>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if is_prime_u64(n) {
        out.push(n);
        return Ok(());
    }
    let d = brent_rho(n).ok_or_else(|| Error::BudgetExceeded {
        requested: format!("pollard rho on {n}"),
        cap: RHO_ITERATION_CAP,
    })?;
    split(d, out)?;
    split(n / d, out)
}

/// Complete factorization of `1 <= n < 2^64`.
pub fn integer_factorize(n: &BigUint) -> Result<IntFactorization> {
    if n.is_zero() {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut n = n
        .to_u64()
        .ok_or_else(|| Error::IntegerTooLarge(n.to_string()))?;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    split(n, &mut primes)?;
    primes.sort_unstable();
    let mut parts: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match parts.last_mut() {
            Some((last, e)) if *last == p => *e += 1,
            _ => parts.push((p, 1)),
        }
    }
    Ok(IntFactorization { parts })
}

pub fn integer_factorize_u64(n: u64) -> Result<IntFactorization> {
    integer_factorize(&BigUint::from(n))
}

/// Multiplicative order of `a` modulo a prime `r` not dividing `a`.
pub fn order_mod_prime(a: u64, r: u64) -> Result<u64> {
    if a % r == 0 {
        return Err(Error::invalid(format!("{r} divides {a}")));
    }
    let n = r - 1;
    let fac = integer_factorize_u64(n)?;
    let mut ord = n;
    for p in fac.primes() {
        while ord % p == 0 && pow_mod(a, ord / p, r) == 1 {
            ord /= p;
        }
    }
    Ok(ord)
}

/// Möbius function on positive integers, by trial division.
pub fn mobius_int(mut n: u64) -> i32 {
    let mut sign = 1;
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}
