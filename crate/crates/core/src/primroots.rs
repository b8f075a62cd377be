//! Primitive roots modulo primes of `F_q[t]`, the sets `P_g` and `P_r`, and
//! gap statistics between consecutive members of `P_g`.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{factorize, integer_factorize, is_irreducible, is_prime_poly};
use crate::ffcore::{big_pow, FieldCtx, ModRing, Poly};

/// True when `g = prod p_i^f_i` has `gcd(f_1, ..., f_r, q - 1) = 1`, i.e. `g` is
/// not a `v`-th power for any prime `v | q - 1`.
pub fn is_eligible(g: &Poly, ctx: &FieldCtx) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let fac = factorize(g, ctx)?;
    let gcd = fac
        .parts
        .iter()
        .fold(ctx.unit_order(), |acc, &(_, f)| acc.gcd(&f));
    Ok(gcd == 1)
}

/// The factored group order `q^n - 1` of `(F_q[t]/P)^*` for primes of degree `n`.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub degree: usize,
    pub order: BigUint,
    /// `(prime, exponent)` pairs of the order.
    pub factors: Vec<(u64, u32)>,
}

impl UnitGroup {
    pub fn new(q: u32, degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::invalid("unit groups are indexed by positive degrees"));
        }
        let order = big_pow(q, degree) - 1u32;
        let factors = integer_factorize(&order)?.parts().to_vec();
        Ok(UnitGroup {
            degree,
            order,
            factors,
        })
    }

    fn cofactors(&self) -> impl Iterator<Item = BigUint> + '_ {
        self.factors.iter().map(|&(r, _)| &self.order / r)
    }
}

/// Shares the factorization of `q^n - 1` between calls with the same degree.
#[derive(Debug, Default)]
pub struct OrderCache {
    groups: Mutex<HashMap<(u32, usize), Arc<UnitGroup>>>,
}

impl OrderCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn group(&self, q: u32, degree: usize) -> Result<Arc<UnitGroup>> {
        if let Some(g) = self.groups.lock().expect("poisoned").get(&(q, degree)) {
            return Ok(g.clone());
        }
        let g = Arc::new(UnitGroup::new(q, degree)?);
        self.groups
            .lock()
            .expect("poisoned")
            .insert((q, degree), g.clone());
        Ok(g)
    }
}

fn check_prime(p: &Poly, ctx: &FieldCtx) -> Result<()> {
    if !is_prime_poly(p, ctx)? {
        return Err(Error::Reducible(ctx.fmt_poly(p)));
    }
    Ok(())
}

fn residue<'a>(g: &Poly, p: &'a Poly, ctx: &'a FieldCtx) -> Result<(ModRing<'a>, Poly)> {
    let ring = ModRing::new(p, ctx)?;
    let r = ring.reduce(g);
    if r.is_zero() {
        return Err(Error::Ramified {
            value: ctx.fmt_poly(g),
            prime: ctx.fmt_poly(p),
        });
    }
    Ok((ring, r))
}

/// Exact order of `g` in `(F_q[t]/P)^*`.
pub fn multiplicative_order(g: &Poly, p: &Poly, ctx: &FieldCtx) -> Result<BigUint> {
    check_prime(p, ctx)?;
    let group = UnitGroup::new(ctx.q(), p.degree().expect("prime"))?;
    let (ring, r) = residue(g, p, ctx)?;
    let mut ord = group.order.clone();
    for &(prime, e) in &group.factors {
        for _ in 0..e {
            let cand = &ord / prime;
            if ring.pow(&r, &cand).is_one() {
                ord = cand;
            } else {
                break;
            }
        }
    }
    Ok(ord)
}

/// True when `g` generates `(F_q[t]/P)^*`. When `|P| = 2` the group is trivial
/// and every unit generates it.
pub fn is_primitive_root(g: &Poly, p: &Poly, ctx: &FieldCtx) -> Result<bool> {
    check_prime(p, ctx)?;
    let group = UnitGroup::new(ctx.q(), p.degree().expect("prime"))?;
    primitive_with(g, p, &group, ctx)
}

/// [`is_primitive_root`] for a prime `P` already known, with a prepared group.
pub fn primitive_with(g: &Poly, p: &Poly, group: &UnitGroup, ctx: &FieldCtx) -> Result<bool> {
    let (ring, r) = residue(g, p, ctx)?;
    Ok(group.cofactors().all(|c| !ring.pow(&r, &c).is_one()))
}

/// True when `t` is a primitive root modulo the prime `P`. `P = t` is not
/// primitive since `t` is not a unit there.
pub fn is_primitive_polynomial(p: &Poly, ctx: &FieldCtx) -> Result<bool> {
    check_prime(p, ctx)?;
    if *p == Poly::t() {
        return Ok(false);
    }
    is_primitive_root(&Poly::t(), p, ctx)
}

/// Indicator of `P_r`: `g^((q^l - 1)/r) = 1` modulo the degree-`l` prime `p`.
pub fn in_pr(p: &Poly, g: &Poly, r: u64, ell: usize, ctx: &FieldCtx) -> Result<bool> {
    if p.degree() != Some(ell) {
        return Err(Error::invalid(format!(
            "{} does not have degree {ell}",
            ctx.fmt_poly(p)
        )));
    }
    check_prime(p, ctx)?;
    let order = big_pow(ctx.q(), ell) - 1u32;
    if r < 2 || !(&order % r).is_zero() {
        return Err(Error::invalid(format!("{r} does not divide q^{ell} - 1")));
    }
    let (ring, res) = residue(g, p, ctx)?;
    Ok(ring.pow(&res, &(order / r)).is_one())
}

/// All primes of degree `ell` modulo which `g` is a primitive root, in
/// canonical order. Ineligible `g` yield an empty list.
pub fn enumerate_pg(g: &Poly, ell: usize, ctx: &FieldCtx, budget: Budget) -> Result<Vec<Poly>> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let count = budget.check_power(ctx.q() as u64, ell)?;
    let group = UnitGroup::new(ctx.q(), ell)?;
    let q = ctx.q();
    (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let p = Poly::monic_from_index(ell, i, q);
            let keep = (|| -> Result<bool> {
                if !is_irreducible(&p, ctx)? || ModRing::new(&p, ctx)?.reduce(g).is_zero() {
                    return Ok(false);
                }
                primitive_with(g, &p, &group, ctx)
            })();
            match keep {
                Ok(true) => Some(Ok(p)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            }
        })
        .collect()
}

/// Difference of norms between consecutive members of `P_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gap {
    /// `|next - prev|`.
    pub norm: BigUint,
    pub prev: Poly,
    pub next: Poly,
}

/// A shift `f` for which at least `m` of the `f + h_i` lie in `P_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleHit {
    pub f: Poly,
    /// Indices `i` with `f + h_i` in `P_g`.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub degree_range: (usize, usize),
    pub primes: Vec<Poly>,
    pub gaps: Vec<Gap>,
    pub hits: Vec<TupleHit>,
}

impl GapReport {
    pub fn max_gap(&self) -> Option<&Gap> {
        self.gaps.iter().max_by(|a, b| a.norm.cmp(&b.norm))
    }
}

/// Sorted `P_g` over degrees `lo..=hi`, consecutive gaps, and, when a tuple
/// `H` is supplied, every monic `f` of degree in the range with at least `m`
/// of `f + h_i` in `P_g`.
pub fn gap_report(
    g: &Poly,
    (lo, hi): (usize, usize),
    tuple: Option<(&[Poly], usize)>,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<GapReport> {
    let mut primes = Vec::new();
    if lo <= hi {
        for deg in lo.max(1)..=hi {
            primes.extend(enumerate_pg(g, deg, ctx, budget)?);
        }
    }
    let gaps = primes
        .windows(2)
        .map(|w| {
            let diff = w[1].sub(&w[0], ctx);
            Ok(Gap {
                norm: diff.norm(ctx)?,
                prev: w[0].clone(),
                next: w[1].clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut hits = Vec::new();
    if let (Some((h, m)), true) = (tuple, lo <= hi) {
        let members: HashSet<&Poly> = primes.iter().collect();
        let groups = OrderCache::new();
        let in_pg = |f: &Poly| -> Result<bool> {
            let Some(deg) = f.degree() else {
                return Ok(false);
            };
            if deg < lo || deg > hi {
                if deg == 0 || !is_prime_poly(f, ctx)? {
                    return Ok(false);
                }
                if ModRing::new(f, ctx)?.reduce(g).is_zero() {
                    return Ok(false);
                }
                return primitive_with(g, f, &*groups.group(ctx.q(), deg)?, ctx);
            }
            Ok(members.contains(f))
        };
        for deg in lo.max(1)..=hi {
            let count = budget.check_power(ctx.q() as u64, deg)?;
            for i in 0..count {
                let f = Poly::monic_from_index(deg, i, ctx.q());
                let mut idx = Vec::new();
                for (j, hj) in h.iter().enumerate() {
                    if in_pg(&f.add(hj, ctx))? {
                        idx.push(j);
                    }
                }
                if idx.len() >= m.max(1) {
                    hits.push(TupleHit { f, members: idx });
                }
            }
        }
    }
    Ok(GapReport {
        degree_range: (lo, hi),
        primes,
        gaps,
        hits,
    })
}

/// Euler's totient of `q^n - 1` divided by `n`: the classical number of
/// primitive polynomials of degree `n`.
pub fn primitive_count(q: u32, n: usize) -> Result<BigUint> {
    let group = UnitGroup::new(q, n)?;
    let phi = group.factors.iter().fold(BigUint::one(), |acc, &(p, e)| {
        acc * BigUint::from(p).pow(e - 1) * (p - 1)
    });
    Ok(phi / n)
}
