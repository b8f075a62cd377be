//! Exact evaluation of
//!
//! ```text
//! S_1 = sum_{n in A(q^l), n = alpha (W)} omega(n)
//! S_2 = sum_n (sum_i chi(n + h_i)) omega(n),
//! omega(n) = (sum_{d_i | n + h_i} lambda_d)^2,
//! ```
//!
//! with `chi` the indicator of the primes (`S_2`) or of `P_g` (the tilde
//! variant), by enumerating the residue class.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::multipoly::simplex_integrals;
use super::tuple::TupleH;
use super::weights::{SieveConfig, WeightTable};
use super::ResidueClass;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{euler_phi, factorize, Factorization};
use crate::ffcore::{big_pow, crt_general, lcm, FieldCtx, Poly};
use crate::primroots::{primitive_with, UnitGroup};

/// Contributions of a single shift `h_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerShift {
    /// `sum_n chi_P(n + h_m) omega(n)`.
    pub plain: BigRational,
    /// `sum_n chi_{P_g}(n + h_m) omega(n)`.
    pub tilde: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSums {
    pub s1: BigRational,
    pub s2: BigRational,
    pub s2_tilde: BigRational,
    pub per_m: Vec<PerShift>,
    /// Size of the residue class enumerated.
    pub class_size: u64,
}

impl SieveSums {
    /// `S_2 - S~_2`, nonnegative since `P_g` is a subset of the primes.
    pub fn difference(&self) -> BigRational {
        &self.s2 - &self.s2_tilde
    }
}

/// Leading-order predictions for `S_1` and `S_2` with logarithms measured in
/// degrees: `Phi(W)^k q^l deg_R^k I_k / |W|^(k+1)` and
/// `Phi(W)^k q^l deg_R^(k+1) sum_m J_k^(m) / (l |W|^(k+1))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MainTerms {
    pub s1: BigRational,
    pub s2: BigRational,
    pub i_k: BigRational,
    pub j_sum: BigRational,
}

impl MainTerms {
    pub fn new(cfg: &SieveConfig, ctx: &FieldCtx) -> Result<Self> {
        let ints = simplex_integrals(&cfg.f)?;
        let k = cfg.k as u32;
        let phi_w = BigInt::from(euler_phi(&cfg.w, ctx)?);
        let norm_w = BigInt::from(cfg.w.norm(ctx)?);
        let a = BigInt::from(big_pow(ctx.q(), cfg.ell));
        let deg_r = BigInt::from(cfg.deg_r());
        let base = BigRational::new(
            phi_w.pow(k) * a,
            norm_w.pow(k + 1),
        );
        let s1 = &base * BigRational::from_integer(deg_r.pow(k)) * &ints.i_k;
        let j_sum = ints.j_sum();
        let s2 = &base * BigRational::new(deg_r.pow(k + 1), BigInt::from(cfg.ell)) * &j_sum;
        Ok(MainTerms {
            s1,
            s2,
            i_k: ints.i_k,
            j_sum,
        })
    }
}

pub fn sieve_sums(
    cfg: &SieveConfig,
    table: &WeightTable,
    h: &TupleH,
    g: &Poly,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<SieveSums> {
    if table.k != cfg.k || h.k() != cfg.k {
        return Err(Error::invalid("weight table, tuple and config disagree on k"));
    }
    sieve_sums_with(table, cfg.ell, &cfg.w, &cfg.alpha, h.elements(), g, ctx, budget)
}

/// Squarefree monic divisors of `m` of degree below `bound`.
fn small_divisors(fac: &Factorization, bound: usize, ctx: &FieldCtx) -> Vec<Poly> {
    let mut out = vec![(Poly::one(), 0usize)];
    for p in fac.primes() {
        let dp = p.degree().unwrap();
        let more: Vec<_> = out
            .iter()
            .filter(|(_, d)| d + dp < bound)
            .map(|(x, d)| (x.mul(p, ctx), d + dp))
            .collect();
        out.extend(more);
    }
    out.into_iter().map(|(x, _)| x).collect()
}

struct Row {
    omega: BigRational,
    prime: Vec<bool>,
    in_pg: Vec<bool>,
}

/// [`sieve_sums`] for explicit parameters (any `deg_R`, any `l`).
#[allow(clippy::too_many_arguments)]
pub fn sieve_sums_with(
    table: &WeightTable,
    ell: usize,
    w: &Poly,
    alpha: &Poly,
    h: &[Poly],
    g: &Poly,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<SieveSums> {
    let k = h.len();
    if table.k != k {
        return Err(Error::invalid("weight table and tuple disagree on k"));
    }
    if h.iter().any(|x| x.degree_i64() >= ell as i64) {
        return Err(Error::invalid("every h_i must have degree below l"));
    }
    let class = ResidueClass::new(alpha, w, ell, ctx)?;
    budget.check(&BigUint::from(class.len()))?;
    let group = UnitGroup::new(ctx.q(), ell)?;
    let rows: Vec<Row> = (0..class.len())
        .into_par_iter()
        .map(|i| -> Result<Row> {
            let n = class.get(i, ctx);
            let mut lists = Vec::with_capacity(k);
            let mut prime = Vec::with_capacity(k);
            let mut in_pg = Vec::with_capacity(k);
            for hi in h {
                let m = n.add(hi, ctx);
                let fac = factorize(&m, ctx)?;
                lists.push(small_divisors(&fac, table.deg_r, ctx));
                let is_prime = fac.parts.len() == 1 && fac.parts[0].1 == 1;
                prime.push(is_prime);
                let pg = is_prime
                    && !g.rem(&m, ctx)?.is_zero()
                    && primitive_with(g, &m, &group, ctx)?;
                in_pg.push(pg);
            }
            // sum of lambda over the product of divisor lists
            let mut inner = BigRational::zero();
            let mut choice = vec![0usize; k];
            loop {
                let key: Vec<Poly> = (0..k).map(|j| lists[j][choice[j]].clone()).collect();
                let deg: usize = key.iter().map(|x| x.degree().unwrap()).sum();
                if deg < table.deg_r {
                    inner += table.get(&key);
                }
                let mut j = 0;
                while j < k {
                    choice[j] += 1;
                    if choice[j] < lists[j].len() {
                        break;
                    }
                    choice[j] = 0;
                    j += 1;
                }
                if j == k {
                    break;
                }
            }
            Ok(Row {
                omega: &inner * &inner,
                prime,
                in_pg,
            })
        })
        .collect::<Result<_>>()?;

    let mut out = SieveSums {
        s1: BigRational::zero(),
        s2: BigRational::zero(),
        s2_tilde: BigRational::zero(),
        per_m: vec![
            PerShift {
                plain: BigRational::zero(),
                tilde: BigRational::zero(),
            };
            k
        ],
        class_size: class.len(),
    };
    for row in rows {
        out.s1 += &row.omega;
        for j in 0..k {
            if row.prime[j] {
                out.per_m[j].plain += &row.omega;
                out.s2 += &row.omega;
            }
            if row.in_pg[j] {
                out.per_m[j].tilde += &row.omega;
                out.s2_tilde += &row.omega;
            }
        }
    }
    Ok(out)
}

/// Number of monic `n` of degree `l` with `n = x mod L`.
fn class_count(x: &Poly, l_mod: &Poly, ell: usize, ctx: &FieldCtx) -> BigUint {
    let dl = l_mod.degree().unwrap();
    if dl <= ell {
        big_pow(ctx.q(), ell - dl)
    } else if x.degree() == Some(ell) && x.is_monic() {
        BigUint::from(1u8)
    } else {
        BigUint::zero()
    }
}

/// `S_1` by expanding the square:
/// `sum_{d, e} lambda_d lambda_e #{n : n = alpha (W), [d_i, e_i] | n + h_i}`.
pub fn s1_by_expansion(
    table: &WeightTable,
    ell: usize,
    w: &Poly,
    alpha: &Poly,
    h: &[Poly],
    ctx: &FieldCtx,
) -> Result<BigRational> {
    let entries: Vec<_> = table.iter().collect();
    let terms: Vec<BigRational> = entries
        .par_iter()
        .map(|(d, ld)| -> Result<BigRational> {
            let mut acc = BigRational::zero();
            for (e, le) in &entries {
                let mut pairs = vec![(alpha.clone(), w.clone())];
                for i in 0..h.len() {
                    let m = lcm(&d[i], &e[i], ctx)?;
                    pairs.push((h[i].neg(ctx), m));
                }
                if let Some((x, l_mod)) = crt_general(&pairs, ctx)? {
                    let count = class_count(&x, &l_mod, ell, ctx);
                    if !count.is_zero() {
                        acc += (*ld * *le) * BigRational::from_integer(count.into());
                    }
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(BigRational::zero(), |a, b| a + b))
}
