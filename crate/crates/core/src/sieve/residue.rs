//! The sieve modulus `W` and the residue class `alpha mod W` on which every
//! shift `n + h_i` is coprime to `W` and has `(g/(n+h_i))_{q-1}` generating
//! `F_q^*`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::tuple::{omitted_residue, TupleH};
use super::ResidueClass;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{enumerate_irreducibles, factorize};
use crate::ffcore::{crt, gcd, lcm, FieldCtx, Fq, Poly};
use crate::primroots::is_eligible;
use crate::symbols::{find_preimage, jacobi_value};

/// `log log log (q^l)` with natural logarithms; `-inf` when undefined.
pub fn w_threshold(ell: usize, q: u32) -> f64 {
    let inner = ell as f64 * (q as f64).ln();
    let ll = inner.ln();
    if ll <= 0.0 {
        f64::NEG_INFINITY
    } else {
        ll.ln()
    }
}

/// `lcm(g, prod_{|p| < log log log q^l} p)`.
pub fn compute_w(ell: usize, g: &Poly, ctx: &FieldCtx, budget: Budget) -> Result<Poly> {
    let threshold = w_threshold(ell, ctx.q());
    let mut product = Poly::one();
    let mut deg = 1;
    while (ctx.q() as f64).powi(deg as i32) < threshold {
        for p in enumerate_irreducibles(deg, ctx, budget)? {
            product = product.mul(&p, ctx);
        }
        deg += 1;
    }
    lcm(g, &product, ctx)
}

/// `lcm(g, extra)`: a hand-picked modulus in place of the tiny default.
pub fn compute_w_override(g: &Poly, extra: &Poly, ctx: &FieldCtx) -> Result<Poly> {
    lcm(g, extra, ctx)
}

/// Whether the residue class must also control the residue symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    /// Both coprimality and the generator condition.
    Symbol,
    /// Coprimality only: the unrestricted class usually written `beta`.
    CoprimeOnly,
}

/// Integers `b_0, b_1..b_r` with `b_0 (q-1) + sum b_i f_i = gcd`.
fn integer_bezout(modulus: i64, exps: &[i64]) -> (i64, Vec<i64>) {
    fn ext(a: i64, b: i64) -> (i64, i64, i64) {
        if b == 0 {
            (a, 1, 0)
        } else {
            let (g, x, y) = ext(b, a % b);
            (g, y, x - (a / b) * y)
        }
    }
    let mut g = modulus;
    let mut coeffs = vec![0i64; exps.len()];
    for (i, &f) in exps.iter().enumerate() {
        let (ng, x, y) = ext(g, f);
        for c in coeffs.iter_mut().take(i) {
            *c *= x;
        }
        coeffs[i] = y;
        g = ng;
    }
    (g, coeffs)
}

/// Constructs `alpha mod W` prime by prime and glues with CRT.
///
/// For `p | g` the class is chosen so that `prod (alpha/p_i)^{f_i} = (-1)^{deg g}
/// omega` with `omega` the field generator; reciprocity then gives
/// `(g/(n+h_i))_{q-1} = omega` whenever `n = alpha mod W` has odd degree
/// exceeding every `deg h_i`. For the remaining primes of `W` the class is
/// `-c` with `c` a residue missed by the tuple.
pub fn find_alpha(g: &Poly, h: &TupleH, w: &Poly, ctx: &FieldCtx, mode: AlphaMode) -> Result<Poly> {
    if g.is_zero() || w.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !g.is_monic() {
        return Err(Error::NotMonic(ctx.fmt_poly(g)));
    }
    if !g.divides(w, ctx)? {
        return Err(Error::invalid("g must divide W"));
    }
    for x in h.elements() {
        if !g.divides(x, ctx)? {
            return Err(Error::invalid(format!(
                "tuple element {} is not a multiple of g",
                ctx.fmt_poly(x)
            )));
        }
    }
    let g_fac = factorize(g, ctx)?;
    let unit_order = ctx.unit_order() as i64;
    let target_exp: Vec<i64> = if mode == AlphaMode::Symbol {
        if !is_eligible(g, ctx)? {
            return Err(Error::invalid(format!(
                "{} is a v-th power for some prime v | q - 1",
                ctx.fmt_poly(g)
            )));
        }
        let exps: Vec<i64> = g_fac.parts.iter().map(|&(_, f)| f as i64).collect();
        let (d, b) = integer_bezout(unit_order, &exps);
        debug_assert_eq!(d, 1);
        b.into_iter().map(|x| x.rem_euclid(unit_order)).collect()
    } else {
        Vec::new()
    };
    let tau = if g.degree().unwrap_or(0) % 2 == 1 {
        ctx.neg(ctx.generator())
    } else {
        ctx.generator()
    };
    let w_fac = factorize(w, ctx)?;
    let mut pairs = Vec::with_capacity(w_fac.parts.len());
    for (p, _) in &w_fac.parts {
        let in_g = g_fac.parts.iter().position(|(x, _)| x == p);
        let class = match (mode, in_g) {
            (AlphaMode::Symbol, Some(i)) => {
                find_preimage(p, ctx.pow(tau, target_exp[i] as u64), ctx.unit_order(), ctx)?
            }
            _ => {
                let c = omitted_residue(h.elements(), p, ctx)?.ok_or_else(|| {
                    Error::invalid(format!(
                        "tuple covers every class modulo {}",
                        ctx.fmt_poly(p)
                    ))
                })?;
                c.neg(ctx).rem(p, ctx)?
            }
        };
        pairs.push((class, p.clone()));
    }
    crt(&pairs, ctx)
}

/// What [`verify_alpha`] inspects.
#[derive(Debug, Clone)]
pub struct VerifySpec {
    pub degrees: Vec<usize>,
    /// Classes larger than this are sampled instead of enumerated.
    pub budget: Budget,
    pub samples: u64,
    pub seed: u64,
    /// `false` checks coprimality only.
    pub check_symbol: bool,
}

impl VerifySpec {
    pub fn exhaustive(degrees: Vec<usize>) -> Self {
        VerifySpec {
            degrees,
            budget: Budget::default(),
            samples: 100,
            seed: crate::factorizer::DEFAULT_SEED,
            check_symbol: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `gcd(n + h_i, W) != 1`.
    SharedFactor,
    /// The symbol value does not generate `F_q^*`.
    NotGenerator(Fq),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaViolation {
    pub n: Poly,
    pub index: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlphaVerification {
    /// Number of `n` examined.
    pub checked: u64,
    pub exhaustive_degrees: Vec<usize>,
    pub sampled_degrees: Vec<usize>,
    /// Degrees skipped, with the reason.
    pub inapplicable: Vec<(usize, String)>,
    pub violation_count: u64,
    /// The first few violations found.
    pub violations: Vec<AlphaViolation>,
    /// Distinct symbol values met, as field indices.
    pub symbol_values: BTreeSet<u32>,
}

impl AlphaVerification {
    pub fn passed(&self) -> bool {
        self.violation_count == 0 && self.checked > 0
    }
}

const KEPT_VIOLATIONS: usize = 32;

/// Checks both conditions on every `n = alpha mod W` of each requested odd
/// degree (or on a seeded sample when the class exceeds the budget). Even
/// degrees and degrees not exceeding `max deg h_i` are reported as
/// inapplicable: there `n + h_i` need not be monic of odd degree.
pub fn verify_alpha(
    alpha: &Poly,
    w: &Poly,
    h: &TupleH,
    g: &Poly,
    ctx: &FieldCtx,
    spec: &VerifySpec,
) -> Result<AlphaVerification> {
    let mut out = AlphaVerification::default();
    let max_h = h.degree_range().1;
    let full = ctx.unit_order();
    for &deg in &spec.degrees {
        if deg % 2 == 0 {
            out.inapplicable.push((deg, "even degree".to_string()));
            continue;
        }
        if (deg as i64) <= max_h {
            out.inapplicable
                .push((deg, format!("degree does not exceed max deg h_i = {max_h}")));
            continue;
        }
        let class = ResidueClass::new(alpha, w, deg, ctx)?;
        if class.len() == 0 {
            out.inapplicable
                .push((deg, "no monic polynomial of this degree in the class".to_string()));
            continue;
        }
        let indices: Vec<u64> = if class.len() <= spec.budget.cap() {
            out.exhaustive_degrees.push(deg);
            (0..class.len()).collect()
        } else {
            out.sampled_degrees.push(deg);
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ deg as u64);
            (0..spec.samples).map(|_| rng.random_range(0..class.len())).collect()
        };
        let results: Vec<(Vec<AlphaViolation>, BTreeSet<u32>)> = indices
            .par_iter()
            .map(|&i| -> Result<_> {
                let n = class.get(i, ctx);
                let mut bad = Vec::new();
                let mut seen = BTreeSet::new();
                for (idx, hi) in h.elements().iter().enumerate() {
                    let m = n.add(hi, ctx);
                    if !gcd(&m, w, ctx)?.is_one() {
                        bad.push(AlphaViolation {
                            n: n.clone(),
                            index: idx,
                            kind: ViolationKind::SharedFactor,
                        });
                        continue;
                    }
                    if spec.check_symbol {
                        match jacobi_value(g, &m, full, ctx)? {
                            None => bad.push(AlphaViolation {
                                n: n.clone(),
                                index: idx,
                                kind: ViolationKind::SharedFactor,
                            }),
                            Some(v) => {
                                seen.insert(v.index());
                                if ctx.order(v) != Some(full) {
                                    bad.push(AlphaViolation {
                                        n: n.clone(),
                                        index: idx,
                                        kind: ViolationKind::NotGenerator(v),
                                    });
                                }
                            }
                        }
                    }
                }
                Ok((bad, seen))
            })
            .collect::<Result<_>>()?;
        out.checked += indices.len() as u64;
        for (bad, seen) in results {
            out.violation_count += bad.len() as u64;
            for v in bad {
                if out.violations.len() < KEPT_VIOLATIONS {
                    out.violations.push(v);
                }
            }
            out.symbol_values.extend(seen);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::tuple::build_admissible_tuple;

    fn p(f: &FieldCtx, s: &str) -> Poly {
        f.parse_poly(s).unwrap()
    }

    fn tuple(elements: Vec<Poly>, g: &Poly, ctx: &FieldCtx) -> TupleH {
        TupleH::new(elements, g, ctx, Budget::default()).unwrap()
    }

    #[test]
    fn threshold_and_w() {
        let f2 = FieldCtx::new(2).unwrap();
        assert!((w_threshold(20, 2) - 0.967).abs() < 1e-3);
        assert_eq!(compute_w(20, &Poly::t(), &f2, Budget::default()).unwrap(), Poly::t());
        assert_eq!(compute_w(3, &Poly::one(), &f2, Budget::default()).unwrap(), Poly::one());
        // threshold exceeds 2 once l log 2 > e^(e^2), i.e. l >= 2335
        assert!(w_threshold(2334, 2) < 2.0);
        assert!(w_threshold(2335, 2) > 2.0);
        let w = compute_w(2335, &Poly::one(), &f2, Budget::default()).unwrap();
        assert_eq!(w, p(&f2, "t^2+t"));
        assert_eq!(
            compute_w_override(&Poly::t(), &p(&f2, "t+1"), &f2).unwrap(),
            p(&f2, "t^2+t")
        );
    }

    #[test]
    fn bezout_over_exponents() {
        let (g, b) = integer_bezout(6, &[2, 3]);
        assert_eq!(g, 1);
        assert_eq!(b.len(), 2);
        // 6 * b0 + 2 b1 + 3 b2 = 1 for some b0
        assert_eq!((1 - 2 * b[0] - 3 * b[1]).rem_euclid(6), 0);
        let (g, _) = integer_bezout(4, &[2]);
        assert_eq!(g, 2);
    }

    #[test]
    fn alpha_over_f2_is_one() {
        let f2 = FieldCtx::new(2).unwrap();
        let h = tuple(vec![p(&f2, "t^3"), p(&f2, "t^4")], &Poly::t(), &f2);
        let a = find_alpha(&Poly::t(), &h, &Poly::t(), &f2, AlphaMode::Symbol).unwrap();
        assert_eq!(a, Poly::one());
    }

    #[test]
    fn alpha_over_f3_with_g_t() {
        let f3 = FieldCtx::new(3).unwrap();
        let h = build_admissible_tuple(2, &f3, &Poly::t(), Budget::default()).unwrap();
        let a = find_alpha(&Poly::t(), &h, &Poly::t(), &f3, AlphaMode::Symbol).unwrap();
        assert_eq!(a, Poly::one());
        let v = verify_alpha(
            &a,
            &Poly::t(),
            &h,
            &Poly::t(),
            &f3,
            &VerifySpec::exhaustive(vec![1, 2, 3, 5, 7]),
        )
        .unwrap();
        assert!(v.passed(), "{v:?}");
        assert_eq!(v.symbol_values, BTreeSet::from([2]));
        assert_eq!(v.inapplicable.len(), 2);
        assert_eq!(v.exhaustive_degrees, vec![3, 5, 7]);
    }

    #[test]
    fn bad_alphas_are_caught() {
        let f3 = FieldCtx::new(3).unwrap();
        let h = tuple(vec![Poly::zero()], &Poly::t(), &f3);
        let spec = VerifySpec::exhaustive(vec![3]);
        let v = verify_alpha(&Poly::zero(), &Poly::t(), &h, &Poly::t(), &f3, &spec).unwrap();
        assert!(!v.passed());
        assert_eq!(v.violations[0].kind, ViolationKind::SharedFactor);
        // alpha = 2: (t/n)_2 = -(2/t)_2 = 1 for odd deg n, not a generator
        let v = verify_alpha(&p(&f3, "2"), &Poly::t(), &h, &Poly::t(), &f3, &spec).unwrap();
        assert!(!v.passed());
        assert!(matches!(v.violations[0].kind, ViolationKind::NotGenerator(_)));
        // alpha = -h_1 mod a prime of W
        let w = p(&f3, "t^2+t");
        let h2 = tuple(vec![p(&f3, "t"), p(&f3, "t^2")], &Poly::t(), &f3);
        let alpha = p(&f3, "t+2");
        let v = verify_alpha(&alpha, &w, &h2, &Poly::t(), &f3, &spec).unwrap();
        assert!(v.violations.iter().any(|x| x.kind == ViolationKind::SharedFactor));
    }

    #[test]
    fn alpha_general_fields() {
        // W enlarged by small primes; odd- and even-degree g; composite g
        let cases = [
            (3u64, "t", "t^2+1"),
            (5, "t", "t+1"),
            (5, "t^2+t", "t+2"),
            (7, "t^5+3*t^4+3*t^3+t^2", "t+3"),
            (4, "t", "t+1"),
            (9, "t+1", "t"),
            (2, "t^2+t+1", "t"),
        ];
        for (q, g, extra) in cases {
            let ctx = FieldCtx::new(q).unwrap();
            let g = p(&ctx, g);
            let w = compute_w_override(&g, &p(&ctx, extra), &ctx).unwrap();
            let h = build_admissible_tuple(3, &ctx, &g, Budget::default()).unwrap();
            let a = find_alpha(&g, &h, &w, &ctx, AlphaMode::Symbol).unwrap();
            let max_h = h.degree_range().1 as usize;
            let degrees: Vec<usize> = (max_h + 1..=max_h + 4).collect();
            let mut spec = VerifySpec::exhaustive(degrees);
            spec.budget = Budget::new(4000);
            let v = verify_alpha(&a, &w, &h, &g, &ctx, &spec).unwrap();
            assert!(v.passed(), "q = {q}: {v:?}");
            let beta = find_alpha(&g, &h, &w, &ctx, AlphaMode::CoprimeOnly).unwrap();
            spec.check_symbol = false;
            assert!(verify_alpha(&beta, &w, &h, &g, &ctx, &spec).unwrap().passed());
        }
    }

    #[test]
    fn alpha_rejects_bad_inputs() {
        let f3 = FieldCtx::new(3).unwrap();
        let h = tuple(vec![p(&f3, "t^2")], &Poly::t(), &f3);
        let g2 = p(&f3, "t^2");
        assert!(find_alpha(&g2, &h, &g2, &f3, AlphaMode::Symbol).is_err());
        let h_bad = tuple(vec![p(&f3, "t+1")], &Poly::one(), &f3);
        assert!(find_alpha(&Poly::t(), &h_bad, &Poly::t(), &f3, AlphaMode::Symbol).is_err());
        assert!(find_alpha(&Poly::t(), &h, &p(&f3, "t+1"), &f3, AlphaMode::Symbol).is_err());
    }
}
