//! Sieve configuration and the weights `lambda_{d_1..d_k}`.
//!
//! With `deg_R = ceil(theta l)` and `R = q^deg_R`,
//!
//! ```text
//! lambda_d = prod(mu(d_i) |d_i|) * sum_{r : d_i | r_i, (r_i, W) = 1}
//!            mu(r_1..r_k)^2 / prod Phi(r_i) * F(deg r_1 / deg_R, ..., deg r_k / deg_R)
//! ```
//!
//! for `|d_1..d_k| < R` and `(d_1..d_k, W) = 1`, and zero otherwise. `F` is
//! evaluated only on the closed simplex `sum deg r_i <= deg_R`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::multipoly::MultiPoly;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{euler_phi_of, factorize, integer::is_prime_u64};
use crate::ffcore::{big_pow, gcd, monic_of_degree, FieldCtx, Poly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    pub k: usize,
    /// Prime degree of the `n` being sieved.
    pub ell: usize,
    pub theta: BigRational,
    pub w: Poly,
    pub alpha: Poly,
    pub f: MultiPoly,
}

impl SieveConfig {
    /// Requires `0 < theta < 1/4`, `l` prime and `F` in `k` variables.
    pub fn new(
        k: usize,
        ell: usize,
        theta: BigRational,
        w: Poly,
        alpha: Poly,
        f: MultiPoly,
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be positive"));
        }
        let quarter = BigRational::new(1.into(), 4.into());
        if !theta.is_positive() || theta >= quarter {
            return Err(Error::invalid(format!("theta = {theta} must lie in (0, 1/4)")));
        }
        if !is_prime_u64(ell as u64) {
            return Err(Error::invalid(format!("l = {ell} must be prime")));
        }
        if f.nvars() != k {
            return Err(Error::invalid(format!(
                "F has {} variables but k = {k}",
                f.nvars()
            )));
        }
        if w.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(SieveConfig {
            k,
            ell,
            theta,
            w,
            alpha,
            f,
        })
    }

    /// `deg_R = ceil(theta l)`.
    pub fn deg_r(&self) -> usize {
        (&self.theta * BigInt::from(self.ell))
            .ceil()
            .to_integer()
            .to_usize()
            .expect("small")
    }

    /// `R = q^deg_R`.
    pub fn r_norm(&self, ctx: &FieldCtx) -> BigUint {
        big_pow(ctx.q(), self.deg_r())
    }
}

/// Nonzero weights keyed by divisor tuples; absent keys have weight zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightTable {
    pub k: usize,
    pub deg_r: usize,
    entries: BTreeMap<Vec<Poly>, BigRational>,
}

impl WeightTable {
    pub fn get(&self, d: &[Poly]) -> BigRational {
        self.entries.get(d).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Poly>, &BigRational)> {
        self.entries.iter()
    }

    /// The weight of the all-ones tuple.
    pub fn lambda_one(&self) -> BigRational {
        self.get(&vec![Poly::one(); self.k])
    }
}

/// A monic squarefree polynomial coprime to `W`, with the data the sums need.
#[derive(Debug, Clone)]
struct Candidate {
    deg: usize,
    primes: Vec<Poly>,
    phi: BigUint,
}

fn candidates(deg_r: usize, w: &Poly, ctx: &FieldCtx, budget: Budget) -> Result<Vec<Candidate>> {
    let total: BigUint = (0..=deg_r).map(|d| big_pow(ctx.q(), d)).sum();
    budget.check(&total)?;
    let mut out = Vec::new();
    for deg in 0..=deg_r {
        for f in monic_of_degree(deg, ctx.q()) {
            if !gcd(&f, w, ctx)?.is_one() {
                continue;
            }
            let fac = factorize(&f, ctx)?;
            if !fac.is_squarefree() {
                continue;
            }
            let phi = euler_phi_of(&fac, ctx);
            out.push(Candidate {
                deg,
                primes: fac.parts.into_iter().map(|(p, _)| p).collect(),
                phi,
            });
        }
    }
    Ok(out)
}

/// Squarefree divisors of a squarefree candidate as `(divisor, degree, mu)`.
fn divisors(c: &Candidate, ctx: &FieldCtx) -> Vec<(Poly, usize, i32)> {
    let mut out = vec![(Poly::one(), 0usize, 1i32)];
    for p in &c.primes {
        let dp = p.degree().unwrap();
        let more: Vec<_> = out
            .iter()
            .map(|(d, deg, mu)| (d.mul(p, ctx), deg + dp, -mu))
            .collect();
        out.extend(more);
    }
    out
}

pub fn lambda_weights(cfg: &SieveConfig, ctx: &FieldCtx, budget: Budget) -> Result<WeightTable> {
    lambda_weights_for(cfg.k, cfg.deg_r(), &cfg.w, &cfg.f, ctx, budget)
}

/// Weights for an explicit `deg_R`, bypassing the `theta` constraint.
pub fn lambda_weights_for(
    k: usize,
    deg_r: usize,
    w: &Poly,
    f: &MultiPoly,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<WeightTable> {
    if f.nvars() != k || k == 0 {
        return Err(Error::invalid("F must have k >= 1 variables"));
    }
    let mut table = WeightTable {
        k,
        deg_r,
        entries: BTreeMap::new(),
    };
    if deg_r == 0 {
        return Ok(table);
    }
    let cands = candidates(deg_r, w, ctx, budget)?;
    let divs: Vec<Vec<(Poly, usize, i32)>> = cands.iter().map(|c| divisors(c, ctx)).collect();
    let deg_r_big = BigInt::from(deg_r);
    let mut sums: HashMap<Vec<Poly>, BigRational> = HashMap::new();

    let mut stack: Vec<usize> = Vec::with_capacity(k);
    // depth-first over r-tuples of pairwise coprime candidates
    fn walk(
        stack: &mut Vec<usize>,
        used_deg: usize,
        k: usize,
        deg_r: usize,
        cands: &[Candidate],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if stack.len() == k {
            visit(stack);
            return;
        }
        for (i, c) in cands.iter().enumerate() {
            if used_deg + c.deg > deg_r {
                continue;
            }
            let clash = stack
                .iter()
                .any(|&j| cands[j].primes.iter().any(|p| c.primes.contains(p)));
            if clash {
                continue;
            }
            stack.push(i);
            walk(stack, used_deg + c.deg, k, deg_r, cands, visit);
            stack.pop();
        }
    }

    let mut visit = |tuple: &[usize]| {
        let x: Vec<BigRational> = tuple
            .iter()
            .map(|&i| BigRational::new(BigInt::from(cands[i].deg), deg_r_big.clone()))
            .collect();
        let fval = f.eval(&x);
        if fval.is_zero() {
            return;
        }
        let phi = tuple
            .iter()
            .fold(BigUint::one(), |acc, &i| acc * &cands[i].phi);
        let term = fval / BigRational::from_integer(phi.into());
        // every divisor tuple with sum deg d_i < deg_R
        let mut choice = vec![0usize; k];
        loop {
            let deg: usize = (0..k).map(|j| divs[tuple[j]][choice[j]].1).sum();
            if deg < deg_r {
                let key: Vec<Poly> = (0..k).map(|j| divs[tuple[j]][choice[j]].0.clone()).collect();
                *sums.entry(key).or_insert_with(BigRational::zero) += &term;
            }
            let mut j = 0;
            while j < k {
                choice[j] += 1;
                if choice[j] < divs[tuple[j]].len() {
                    break;
                }
                choice[j] = 0;
                j += 1;
            }
            if j == k {
                break;
            }
        }
    };
    walk(&mut stack, 0, k, deg_r, &cands, &mut visit);

    for (d, s) in sums {
        if s.is_zero() {
            continue;
        }
        let mut factor = BigInt::one();
        for di in &d {
            let fac = factorize(di, ctx)?;
            if fac.parts.len().is_odd() {
                factor = -factor;
            }
            factor *= BigInt::from(big_pow(ctx.q(), di.degree().unwrap()));
        }
        table.entries.insert(d, s * BigRational::from_integer(factor));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizer::{euler_phi, mobius};
    use crate::ffcore::is_squarefree;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Independent evaluation: iterate over d-tuples and, for each, over all
    /// r-tuples of monic polynomials, testing every condition from scratch.
    fn oracle(
        k: usize,
        deg_r: usize,
        w: &Poly,
        f: &MultiPoly,
        ctx: &FieldCtx,
    ) -> BTreeMap<Vec<Poly>, BigRational> {
        let all: Vec<Poly> = (0..=deg_r).flat_map(|d| monic_of_degree(d, ctx.q())).collect();
        fn tuples(all: &[Poly], k: usize, max_deg: usize) -> Vec<Vec<Poly>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in all {
                let d = p.degree().unwrap();
                if d > max_deg {
                    continue;
                }
                for mut rest in tuples(all, k - 1, max_deg - d) {
                    rest.insert(0, p.clone());
                    out.push(rest);
                }
            }
            out
        }
        let rs = tuples(&all, k, deg_r);
        let mut out = BTreeMap::new();
        for d in tuples(&all, k, deg_r - 1) {
            let prod_d = d.iter().fold(Poly::one(), |a, x| a.mul(x, ctx));
            if !is_squarefree(&prod_d, ctx).unwrap() || !gcd(&prod_d, w, ctx).unwrap().is_one() {
                continue;
            }
            let mut sum = BigRational::zero();
            for r in &rs {
                let prod_r = r.iter().fold(Poly::one(), |a, x| a.mul(x, ctx));
                if !is_squarefree(&prod_r, ctx).unwrap() {
                    continue;
                }
                if !d.iter().zip(r).all(|(di, ri)| di.divides(ri, ctx).unwrap()) {
                    continue;
                }
                if !r.iter().all(|ri| gcd(ri, w, ctx).unwrap().is_one()) {
                    continue;
                }
                let x: Vec<BigRational> = r
                    .iter()
                    .map(|ri| rat(ri.degree().unwrap() as i64, deg_r as i64))
                    .collect();
                let phi: BigUint = r
                    .iter()
                    .map(|ri| euler_phi(ri, ctx).unwrap())
                    .fold(BigUint::one(), |a, b| a * b);
                sum += f.eval(&x) / BigRational::from_integer(phi.into());
            }
            let mut factor = BigRational::one();
            for di in &d {
                factor *= BigRational::from_integer(
                    BigInt::from(mobius(di, ctx).unwrap()) * BigInt::from(di.norm(ctx).unwrap()),
                );
            }
            let v = factor * sum;
            if !v.is_zero() {
                out.insert(d, v);
            }
        }
        out
    }

    #[test]
    fn single_variable_example() {
        // k = 1, q = 2, R = 2^4, W = 1, F = 1 - x, d = t
        let f2 = FieldCtx::new(2).unwrap();
        let f = MultiPoly::one_minus_sum(1);
        let table = lambda_weights_for(1, 4, &Poly::one(), &f, &f2, Budget::default()).unwrap();
        let expected = oracle(1, 4, &Poly::one(), &f, &f2);
        assert_eq!(table.entries, expected);
        let lt = table.get(&[Poly::t()]);
        assert!(!lt.is_zero());
        assert_eq!(lt, expected[&vec![Poly::t()]]);
    }

    #[test]
    fn hand_computed_weight() {
        // k = 1, q = 2, deg_R = 1, W = 1, F = 1 - x: only r = 1 contributes
        // (r = t, t+1 sit on the boundary where F = 0), so lambda_1 = 1.
        let f2 = FieldCtx::new(2).unwrap();
        let f = MultiPoly::one_minus_sum(1);
        let table = lambda_weights_for(1, 1, &Poly::one(), &f, &f2, Budget::default()).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.lambda_one(), rat(1, 1));
        // deg_R = 2: r in {1, t, t+1} (degree 1, F = 1/2, Phi = 1), d = 1 only:
        // 1 + 2 * 1/2 = 2; d = t: -2 * (1/2) = -1.
        let table = lambda_weights_for(1, 2, &Poly::one(), &f, &f2, Budget::default()).unwrap();
        assert_eq!(table.lambda_one(), rat(2, 1));
        assert_eq!(table.get(&[Poly::t()]), rat(-1, 1));
        assert_eq!(table.get(&[Poly::t().mul(&Poly::t(), &f2)]), rat(0, 1));
    }

    #[test]
    fn matches_oracle_on_small_grid() {
        for q in [2u64, 3] {
            let ctx = FieldCtx::new(q).unwrap();
            for k in 1..=2usize {
                for deg_r in 1..=4usize {
                    for w in [Poly::one(), Poly::t()] {
                        let f = MultiPoly::one_minus_sum(k);
                        let table =
                            lambda_weights_for(k, deg_r, &w, &f, &ctx, Budget::default()).unwrap();
                        assert_eq!(table.entries, oracle(k, deg_r, &w, &f, &ctx), "q={q} k={k} R={deg_r}");
                    }
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        let f = MultiPoly::one_minus_sum(1);
        let ok = SieveConfig::new(1, 5, rat(6, 25), Poly::t(), Poly::one(), f.clone()).unwrap();
        assert_eq!(ok.deg_r(), 2);
        assert!(SieveConfig::new(1, 5, rat(3, 10), Poly::t(), Poly::one(), f.clone()).is_err());
        assert!(SieveConfig::new(1, 5, rat(0, 1), Poly::t(), Poly::one(), f.clone()).is_err());
        assert!(SieveConfig::new(1, 6, rat(1, 5), Poly::t(), Poly::one(), f.clone()).is_err());
        assert!(SieveConfig::new(2, 5, rat(1, 5), Poly::t(), Poly::one(), f).is_err());
    }

    #[test]
    fn zero_outside_support() {
        let ctx = FieldCtx::new(3).unwrap();
        let f = MultiPoly::one_minus_sum(2);
        let table = lambda_weights_for(2, 3, &Poly::t(), &f, &ctx, Budget::default()).unwrap();
        for (d, _) in table.iter() {
            let deg: usize = d.iter().map(|x| x.degree().unwrap()).sum();
            assert!(deg < 3);
            for x in d {
                assert!(gcd(x, &Poly::t(), &ctx).unwrap().is_one());
            }
        }
    }
}
