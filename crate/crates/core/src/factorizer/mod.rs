//! Irreducibility, factorization in `F_q[t]` and of integers, the Euler
//! function and Möbius function of `F_q[t]`, and counts of irreducibles.

pub mod integer;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::ffcore::{big_pow, gcd, FieldCtx, Fq, ModRing, Poly};
pub use integer::{integer_factorize, integer_factorize_u64, is_prime_u64, order_mod_prime, IntFactorization};
use integer::{mobius_int, trial_prime_factors};

/// Seed for the random splitting step; recorded in every [`Factorization`].
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

/// Outcome of an irreducibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    /// Nonzero constant: neither irreducible nor reducible.
    Unit,
}

/// Rabin's test. Monicity is not required (checked separately by callers).
pub fn irreducibility(f: &Poly, ctx: &FieldCtx) -> Result<Irreducibility> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Irreducibility::Unit);
    }
    if n == 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if f.coeff(0).is_zero() {
        return Ok(Irreducibility::Reducible);
    }
    let ring = ModRing::new(f, ctx)?;
    let q = BigUint::from(ctx.q());
    let t = ring.reduce(&Poly::t());
    let checkpoints: Vec<usize> = trial_prime_factors(n as u64)
        .into_iter()
        .map(|r| n / r as usize)
        .collect();
    let mut x = t.clone();
    for i in 1..=n {
        x = ring.pow(&x, &q);
        if checkpoints.contains(&i) && !gcd(&x.sub(&t, ctx), ring.modulus(), ctx)?.is_one() {
            return Ok(Irreducibility::Reducible);
        }
    }
    Ok(if x == t {
        Irreducibility::Irreducible
    } else {
        Irreducibility::Reducible
    })
}

pub fn is_irreducible(f: &Poly, ctx: &FieldCtx) -> Result<bool> {
    Ok(irreducibility(f, ctx)? == Irreducibility::Irreducible)
}

/// Monic irreducible ("prime" in `F_q[t]`).
pub fn is_prime_poly(f: &Poly, ctx: &FieldCtx) -> Result<bool> {
    Ok(f.is_monic() && is_irreducible(f, ctx)?)
}

/// `f = unit * prod prime^exponent` with distinct monic irreducible primes in
/// canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub parts: Vec<(Poly, u32)>,
    /// Seed used by the equal-degree splitting.
    pub seed: u64,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &Poly> {
        self.parts.iter().map(|(p, _)| p)
    }

    pub fn reconstruct(&self, ctx: &FieldCtx) -> Poly {
        self.parts
            .iter()
            .fold(Poly::constant(self.unit), |acc, (p, e)| {
                acc.mul(&p.pow(*e as u64, ctx), ctx)
            })
    }

    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self, ctx: &FieldCtx) -> Poly {
        self.parts
            .iter()
            .fold(Poly::one(), |acc, (p, _)| acc.mul(p, ctx))
    }
}

pub fn factorize(f: &Poly, ctx: &FieldCtx) -> Result<Factorization> {
    factorize_with_seed(f, ctx, DEFAULT_SEED)
}

pub fn factorize_with_seed(f: &Poly, ctx: &FieldCtx, seed: u64) -> Result<Factorization> {
    let (unit, monic) = f.monic(ctx)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc: BTreeMap<Poly, u32> = BTreeMap::new();
    for (part, mult) in squarefree_decomposition(&monic, ctx)? {
        for (g, d) in distinct_degree(&part, ctx)? {
            let mut primes = Vec::new();
            equal_degree(&g, d, ctx, &mut rng, &mut primes)?;
            for p in primes {
                *acc.entry(p).or_insert(0) += mult;
            }
        }
    }
    Ok(Factorization {
        unit,
        parts: acc.into_iter().collect(),
        seed,
    })
}

/// Squarefree decomposition of a monic polynomial: pairs `(g_i, i)` with the
/// `g_i` squarefree, pairwise coprime and `f = prod g_i^i`.
pub fn squarefree_decomposition(f: &Poly, ctx: &FieldCtx) -> Result<Vec<(Poly, u32)>> {
    let mut out = Vec::new();
    if f.degree().ok_or(Error::ZeroPolynomial)? == 0 {
        return Ok(out);
    }
    let df = f.derivative(ctx);
    let mut c = gcd(f, &df, ctx)?;
    let mut w = f.exact_div(&c, ctx)?;
    let mut i = 1u32;
    while !w.is_one() {
        let y = gcd(&w, &c, ctx)?;
        let fac = w.exact_div(&y, ctx)?;
        if !fac.is_one() {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w, ctx)?;
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: take the root coefficient-wise.
        let p = ctx.characteristic() as usize;
        let deg = c.degree().expect("nonconstant");
        let root: Vec<Fq> = (0..=deg / p)
            .map(|k| ctx.pth_root(c.coeff(k * p)))
            .collect();
        for (g, m) in squarefree_decomposition(&Poly::from_coeffs(root), ctx)? {
            out.push((g, m * p as u32));
        }
    }
    Ok(out)
}

/// Splits a squarefree monic polynomial into products of equal-degree primes.
fn distinct_degree(f: &Poly, ctx: &FieldCtx) -> Result<Vec<(Poly, usize)>> {
    let mut out = Vec::new();
    let mut g = f.clone();
    let q = BigUint::from(ctx.q());
    let mut h = Poly::t().rem(&g, ctx)?;
    let mut i = 1;
    while g.degree().unwrap_or(0) >= 2 * i {
        let ring = ModRing::new(&g, ctx)?;
        h = ring.pow(&h, &q);
        let d = gcd(&g, &h.sub(&Poly::t(), ctx), ctx)?;
        if !d.is_one() {
            g = g.exact_div(&d, ctx)?;
            h = h.rem(&g, ctx)?;
            out.push((d, i));
        }
        i += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        let d = g.degree().unwrap();
        out.push((g, d));
    }
    Ok(out)
}

/// Cantor-Zassenhaus splitting of a product of primes of degree `d`.
fn equal_degree(
    f: &Poly,
    d: usize,
    ctx: &FieldCtx,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly>,
) -> Result<()> {
    let n = f.degree().expect("nonzero");
    if n == 0 {
        return Ok(());
    }
    if n == d {
        out.push(f.clone());
        return Ok(());
    }
    let ring = ModRing::new(f, ctx)?;
    let qd = big_pow(ctx.q(), d);
    loop {
        let a = Poly::from_coeffs(
            (0..n)
                .map(|_| Fq::from_raw(rng.random_range(0..ctx.q())))
                .collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if ctx.characteristic() == 2 {
            // absolute trace to F_2: a + a^2 + ... + a^(2^(k-1)), q^d = 2^k
            let k = (qd.bits() - 1) as usize;
            let mut term = ring.reduce(&a);
            let mut sum = term.clone();
            for _ in 1..k {
                term = ring.square(&term);
                sum = sum.add(&term, ctx);
            }
            sum
        } else {
            let e: BigUint = (&qd - 1u32) / 2u32;
            ring.pow(&a, &e).sub(&Poly::one(), ctx)
        };
        if b.is_zero() {
            continue;
        }
        let g = gcd(f, &b, ctx)?;
        let dg = g.degree().unwrap();
        if dg > 0 && dg < n {
            let rest = f.exact_div(&g, ctx)?;
            equal_degree(&g, d, ctx, rng, out)?;
            equal_degree(&rest, d, ctx, rng, out)?;
            return Ok(());
        }
    }
}

/// Möbius function of `F_q[t]`: zero unless squarefree, else `(-1)^(#primes)`.
pub fn mobius(f: &Poly, ctx: &FieldCtx) -> Result<i32> {
    let fac = factorize(f, ctx)?;
    Ok(mobius_of(&fac))
}

pub fn mobius_of(fac: &Factorization) -> i32 {
    if fac.is_squarefree() {
        if fac.parts.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// `Φ(f) = #(F_q[t]/f)^*`.
pub fn euler_phi(f: &Poly, ctx: &FieldCtx) -> Result<BigUint> {
    Ok(euler_phi_of(&factorize(f, ctx)?, ctx))
}

pub fn euler_phi_of(fac: &Factorization, ctx: &FieldCtx) -> BigUint {
    fac.parts.iter().fold(BigUint::one(), |acc, (p, a)| {
        let d = p.degree().expect("prime");
        let qd = big_pow(ctx.q(), d);
        acc * qd.pow(a - 1) * (qd - 1u32)
    })
}

/// Number of monic irreducibles of degree `n`: `(1/n) sum_{d|n} μ(d) q^(n/d)`.
pub fn count_irreducibles(n: usize, q: u32) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let mut total = BigInt::zero();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mu = mobius_int(d as u64);
        if mu != 0 {
            total += BigInt::from(mu) * BigInt::from(big_pow(q, n / d));
        }
    }
    let (quot, rem) = (total.clone() / n, total % n);
    debug_assert!(rem.is_zero() && !quot.is_negative());
    Ok(quot.to_biguint().expect("count is nonnegative"))
}

/// All monic irreducibles of degree `n`, in canonical order.
pub fn enumerate_irreducibles(n: usize, ctx: &FieldCtx, budget: Budget) -> Result<Vec<Poly>> {
    if n == 0 {
        return Err(Error::invalid("degree must be positive"));
    }
    let count = budget.check_power(ctx.q() as u64, n)?;
    let q = ctx.q();
    (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let f = Poly::monic_from_index(n, i, q);
            match is_irreducible(&f, ctx) {
                Ok(true) => Some(Ok(f)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect()
}

/// `q^n` as a `u64`, when it fits.
pub fn field_power(q: u32, n: usize) -> Option<u64> {
    big_pow(q, n).to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(f: &FieldCtx, s: &str) -> Poly {
        f.parse_poly(s).unwrap()
    }

    #[test]
    fn irreducibility_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let f3 = FieldCtx::new(3).unwrap();
        assert!(is_irreducible(&p(&f2, "t^2+t+1"), &f2).unwrap());
        assert!(!is_irreducible(&p(&f2, "t^2+1"), &f2).unwrap());
        assert!(is_irreducible(&p(&f3, "t^2+1"), &f3).unwrap());
        assert_eq!(
            irreducibility(&Poly::one(), &f3).unwrap(),
            Irreducibility::Unit
        );
        assert_eq!(irreducibility(&Poly::zero(), &f3), Err(Error::ZeroPolynomial));
        // non-monic irreducible is still irreducible but not prime
        let g = p(&f3, "2*t^2+2");
        assert!(is_irreducible(&g, &f3).unwrap());
        assert!(!is_prime_poly(&g, &f3).unwrap());
    }

    #[test]
    fn factorization_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let fac = factorize(&p(&f2, "t^2+t"), &f2).unwrap();
        assert_eq!(fac.parts, vec![(p(&f2, "t"), 1), (p(&f2, "t+1"), 1)]);
        let fac = factorize(&p(&f2, "t^4+t^2"), &f2).unwrap();
        assert_eq!(fac.parts, vec![(p(&f2, "t"), 2), (p(&f2, "t+1"), 2)]);
        let prime = p(&f2, "t^7+t+1");
        assert_eq!(factorize(&prime, &f2).unwrap().parts, vec![(prime, 1)]);
        assert_eq!(factorize(&Poly::zero(), &f2), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn factorization_with_pth_powers() {
        let f3 = FieldCtx::new(3).unwrap();
        // (t+1)^3 (t^2+1)^4 t
        let f = p(&f3, "t+1")
            .pow(3, &f3)
            .mul(&p(&f3, "t^2+1").pow(4, &f3), &f3)
            .mul(&p(&f3, "t"), &f3)
            .scale(Fq::from_raw(2), &f3);
        let fac = factorize(&f, &f3).unwrap();
        assert_eq!(fac.unit, Fq::from_raw(2));
        assert_eq!(
            fac.parts,
            vec![(p(&f3, "t"), 1), (p(&f3, "t+1"), 3), (p(&f3, "t^2+1"), 4)]
        );
        assert_eq!(fac.reconstruct(&f3), f);
    }

    #[test]
    fn factorization_over_extension_fields() {
        for q in [4u64, 8, 9, 25] {
            let f = FieldCtx::new(q).unwrap();
            let gen = Poly::from_coeffs(vec![f.generator(), Fq::ONE]);
            let g = gen
                .pow(2, &f)
                .mul(&p(&f, "t^3+t+1"), &f)
                .mul(&p(&f, "t^5+1"), &f);
            let fac = factorize(&g, &f).unwrap();
            assert_eq!(fac.reconstruct(&f), g, "q = {q}");
            for prime in fac.primes() {
                assert!(is_prime_poly(prime, &f).unwrap());
            }
        }
    }

    #[test]
    fn seeds_do_not_change_the_result() {
        let f5 = FieldCtx::new(5).unwrap();
        let g = p(&f5, "t^12+3*t^7+t+4");
        let a = factorize_with_seed(&g, &f5, 1).unwrap();
        let b = factorize_with_seed(&g, &f5, 99).unwrap();
        assert_eq!(a.parts, b.parts);
        assert_eq!((a.seed, b.seed), (1, 99));
    }

    #[test]
    fn euler_phi_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let prime = p(&f2, "t^3+t+1");
        assert_eq!(euler_phi(&prime, &f2).unwrap(), BigUint::from(7u8));
        assert_eq!(euler_phi(&p(&f2, "t^2"), &f2).unwrap(), BigUint::from(2u8));
        assert_eq!(euler_phi(&p(&f2, "t^2+t"), &f2).unwrap(), BigUint::from(1u8));
    }

    #[test]
    fn euler_phi_matches_brute_force() {
        // every f with |f| <= 2^10 over F_2, and |f| <= 3^6 over F_3
        for (q, max_deg) in [(2u64, 10usize), (3, 6)] {
            let ctx = FieldCtx::new(q).unwrap();
            for deg in 1..=max_deg {
                for f in crate::ffcore::monic_of_degree(deg, ctx.q()) {
                    let coprime = (0..(q as u64).pow(deg as u32))
                        .filter(|&i| {
                            let r = Poly::from_index(i, ctx.q());
                            !r.is_zero() && gcd(&r, &f, &ctx).unwrap().is_one()
                        })
                        .count();
                    assert_eq!(euler_phi(&f, &ctx).unwrap(), BigUint::from(coprime));
                }
            }
        }
    }

    #[test]
    fn gauss_counts() {
        let c = |n, q| count_irreducibles(n, q).unwrap().to_u64().unwrap();
        assert_eq!(c(7, 2) + c(8, 2) + c(9, 2), 104);
        assert_eq!((c(7, 2), c(8, 2), c(9, 2)), (18, 30, 56));
        assert_eq!(c(1, 7), 7);
        assert_eq!(c(4, 2), 3);
        assert!(count_irreducibles(0, 2).is_err());
    }

    #[test]
    fn gauss_identity() {
        for q in [2u32, 3, 4, 5, 7, 9] {
            for n in 1..=12usize {
                let total: BigUint = (1..=n)
                    .filter(|d| n % d == 0)
                    .map(|d| count_irreducibles(d, q).unwrap() * d)
                    .sum();
                assert_eq!(total, big_pow(q, n), "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let f3 = FieldCtx::new(3).unwrap();
        let b = Budget::default();
        assert_eq!(
            enumerate_irreducibles(2, &f2, b).unwrap(),
            vec![p(&f2, "t^2+t+1")]
        );
        assert_eq!(
            enumerate_irreducibles(1, &f3, b).unwrap(),
            vec![p(&f3, "t"), p(&f3, "t+1"), p(&f3, "t+2")]
        );
        assert_eq!(enumerate_irreducibles(4, &f2, b).unwrap().len(), 3);
        assert!(matches!(
            enumerate_irreducibles(12, &f2, Budget::new(1000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_matches_gauss_counts() {
        // all q^n <= 2^16 over a grid of fields
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16, 25] {
            let ctx = FieldCtx::new(q).unwrap();
            let mut n = 1;
            while let Some(size) = field_power(ctx.q(), n) {
                if size > 1 << 16 {
                    break;
                }
                let list = enumerate_irreducibles(n, &ctx, Budget::default()).unwrap();
                assert_eq!(
                    BigUint::from(list.len()),
                    count_irreducibles(n, ctx.q()).unwrap(),
                    "q = {q}, n = {n}"
                );
                n += 1;
            }
        }
    }

    #[test]
    fn enumeration_agrees_with_product_sieve() {
        // independent route: a monic polynomial is irreducible iff it is not a
        // product of two lower-degree monic polynomials
        let ctx = FieldCtx::new(3).unwrap();
        let max = 5;
        let mut reducible = std::collections::HashSet::new();
        for da in 1..max {
            for a in crate::ffcore::monic_of_degree(da, 3) {
                for db in da..=max - da {
                    for b in crate::ffcore::monic_of_degree(db, 3) {
                        reducible.insert(a.mul(&b, &ctx));
                    }
                }
            }
        }
        for n in 1..=max {
            let sieved: Vec<Poly> = crate::ffcore::monic_of_degree(n, 3)
                .filter(|f| !reducible.contains(f))
                .collect();
            assert_eq!(enumerate_irreducibles(n, &ctx, Budget::default()).unwrap(), sieved);
        }
    }

    #[test]
    fn mobius_values() {
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(mobius(&Poly::one(), &f2).unwrap(), 1);
        assert_eq!(mobius(&p(&f2, "t"), &f2).unwrap(), -1);
        assert_eq!(mobius(&p(&f2, "t^2+t"), &f2).unwrap(), 1);
        assert_eq!(mobius(&p(&f2, "t^2"), &f2).unwrap(), 0);
    }

    proptest! {
        #[test]
        fn factorize_reconstructs(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
                                  raw in prop::collection::vec(0u32..9, 1..14),
                                  seed in any::<u64>()) {
            let ctx = FieldCtx::new(q).unwrap();
            let f = Poly::from_coeffs(raw.into_iter().map(|c| Fq::from_raw(c % ctx.q())).collect());
            prop_assume!(!f.is_zero());
            let fac = factorize_with_seed(&f, &ctx, seed).unwrap();
            prop_assert_eq!(fac.reconstruct(&ctx), f);
            let mut prev: Option<&Poly> = None;
            for prime in fac.primes() {
                prop_assert!(is_prime_poly(prime, &ctx).unwrap());
                if let Some(pr) = prev {
                    prop_assert!(pr < prime);
                }
                prev = Some(prime);
            }
        }
    }
}
