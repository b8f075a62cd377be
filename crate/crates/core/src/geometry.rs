//! Genus formulas for Kummer and Carlitz cyclotomic extensions of `F_q(t)`,
//! the Castelnuovo bound for their compositum, and the Chebotarev main term
//! compared against exhaustive prime counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::{
    enumerate_irreducibles, euler_phi, euler_phi_of, factorize, integer_factorize, is_prime_u64,
    order_mod_prime,
};
use crate::ffcore::{big_pow, gcd, FieldCtx, Poly};
use crate::primroots::in_pr;

/// Which formula produced a genus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusSource {
    Kummer,
    Cyclotomic,
    Castelnuovo,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusEstimate {
    pub genus: u64,
    /// False when `genus` is only an upper bound.
    pub exact: bool,
    pub source: GenusSource,
}

/// Genus of `K(a^(1/r))` over `K = F_q(t)`, assuming no constant field
/// extension.
///
/// `2g - 2 = -2r + R_a (r - 1)`, where `R_a` sums the degrees of the places
/// at which the order of `a` is prime to `r`. The place at infinity has
/// degree 1 and order `-deg a`. The leading coefficient of `a` is ignored.
pub fn kummer_genus(a: &Poly, r: u64, ctx: &FieldCtx) -> Result<GenusEstimate> {
    if !is_prime_u64(r) {
        return Err(Error::invalid(format!("r = {r} is not prime")));
    }
    if r == u64::from(ctx.characteristic()) {
        return Err(Error::invalid(format!(
            "r = {r} equals the characteristic; the extension is not Kummer"
        )));
    }
    let deg = a.degree().ok_or(Error::ZeroPolynomial)?;
    let fac = factorize(a, ctx)?;
    let mut ramified: u64 = fac
        .parts
        .iter()
        .filter(|(_, e)| u64::from(*e) % r != 0)
        .map(|(p, _)| p.degree().unwrap() as u64)
        .sum();
    if ramified == 0 {
        return Err(Error::invalid(format!(
            "{} is an {r}-th power",
            ctx.fmt_poly(a)
        )));
    }
    if deg as u64 % r != 0 {
        ramified += 1;
    }
    // ramified >= 2 because the orders of a sum to zero
    let twice = (ramified - 2) * (r - 1);
    if twice % 2 != 0 {
        return Err(Error::Mismatch(format!("odd value 2g = {twice}")));
    }
    Ok(GenusEstimate {
        genus: twice / 2,
        exact: true,
        source: GenusSource::Kummer,
    })
}

/// Genus of the Carlitz cyclotomic field `K(Lambda_M)`.
///
/// With `M = prod P_i^a_i`, `d_i = deg P_i` and
/// `s_i = a_i Phi(P_i^a_i) - q^(d_i (a_i - 1))`,
///
/// ```text
/// 2g - 2 = -2 Phi(M) + sum_i d_i s_i Phi(M) / Phi(P_i^a_i) + (q - 2) Phi(M) / (q - 1)
/// ```
pub fn cyclotomic_genus(m: &Poly, ctx: &FieldCtx) -> Result<GenusEstimate> {
    match m.degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(0) => return Err(Error::invalid("M must be nonconstant")),
        _ => {}
    }
    let fac = factorize(m, ctx)?;
    let phi_m = BigInt::from(euler_phi_of(&fac, ctx));
    let q = BigInt::from(ctx.q());
    let mut total: BigInt = -BigInt::from(2) * &phi_m;
    for (p, a) in &fac.parts {
        let d = p.degree().unwrap();
        let qd = BigInt::from(big_pow(ctx.q(), d));
        let phi_pa: BigInt = qd.pow(a - 1) * (&qd - 1u32);
        let s = BigInt::from(*a) * &phi_pa - qd.pow(a - 1);
        let (share, rem) = phi_m.div_rem(&phi_pa);
        debug_assert!(rem.is_zero());
        total += BigInt::from(d) * s * share;
    }
    let numer: BigInt = (&q - 2u32) * &phi_m;
    let (tail, rem) = numer.div_rem(&(&q - 1u32));
    if !rem.is_zero() {
        return Err(Error::Mismatch("q - 1 does not divide (q - 2) Phi(M)".into()));
    }
    total += tail;
    let twice: BigInt = total + 2u32;
    if twice.is_negative() || twice.is_odd() {
        return Err(Error::Mismatch(format!("2g = {twice} is not a nonnegative even integer")));
    }
    let genus = (twice / 2u32)
        .to_u64()
        .ok_or_else(|| Error::IntegerTooLarge("genus".into()))?;
    Ok(GenusEstimate {
        genus,
        exact: true,
        source: GenusSource::Cyclotomic,
    })
}

/// `n1 g1 + n2 g2 + (n1 - 1)(n2 - 1)`, bounding the genus of a compositum
/// `L = F1 F2` with `[L : F1] = n1`, `[L : F2] = n2`.
pub fn castelnuovo_bound(n1: u64, g1: u64, n2: u64, g2: u64) -> Result<u64> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::invalid("extension degrees must be positive"));
    }
    let bound = n1
        .checked_mul(g1)
        .and_then(|x| x.checked_add(n2.checked_mul(g2)?))
        .and_then(|x| x.checked_add((n1 - 1).checked_mul(n2 - 1)?))
        .ok_or_else(|| Error::IntegerTooLarge("Castelnuovo bound".into()))?;
    Ok(bound)
}

/// Genus bound for `L = K(g^(1/r), Lambda_M)`:
/// `Phi(M) g_1 + r g_2 + (Phi(M) - 1)(r - 1)`, with `g_1` the Kummer genus and
/// `g_2` the cyclotomic genus. For constant `M`, `L` is the Kummer field.
pub fn compositum_genus_bound(g: &Poly, r: u64, m: &Poly, ctx: &FieldCtx) -> Result<GenusEstimate> {
    let kummer = kummer_genus(g, r, ctx)?;
    if m.degree() == Some(0) {
        return Ok(kummer);
    }
    let cyclotomic = cyclotomic_genus(m, ctx)?;
    let phi_m = euler_phi(m, ctx)?
        .to_u64()
        .ok_or_else(|| Error::IntegerTooLarge("Phi(M)".into()))?;
    Ok(GenusEstimate {
        genus: castelnuovo_bound(phi_m, kummer.genus, r, cyclotomic.genus)?,
        exact: false,
        source: GenusSource::Castelnuovo,
    })
}

/// Chebotarev count for a conjugacy class of size `class_size` in a Galois
/// group of order `m`, for primes of degree `ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebotarevPrediction {
    pub ell: usize,
    pub class_size: u64,
    pub m: u64,
    pub genus: u64,
    /// `(#C / m) q^l / l`.
    pub main_term: BigRational,
    /// `(#C / m) (m + g_L) q^(l/2) / l`.
    pub error_scale: f64,
}

pub fn chebotarev_predict(
    ell: usize,
    class_size: u64,
    m: u64,
    genus: u64,
    ctx: &FieldCtx,
) -> Result<ChebotarevPrediction> {
    if ell == 0 || m == 0 {
        return Err(Error::invalid("l and m must be positive"));
    }
    let density = BigRational::new(class_size.into(), m.into());
    let main_term = &density * BigRational::new(big_pow(ctx.q(), ell).into(), BigInt::from(ell));
    let error_scale = density.to_f64().unwrap_or(f64::NAN)
        * (m + genus) as f64
        * f64::from(ctx.q()).powf(ell as f64 / 2.0)
        / ell as f64;
    Ok(ChebotarevPrediction {
        ell,
        class_size,
        m,
        genus,
        main_term,
        error_scale,
    })
}

/// Exhaustive count of degree-`l` primes in `P_r` within one class mod `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityCheck {
    pub ell: usize,
    pub r: u64,
    /// Degree-`l` primes in the class `alpha mod M`.
    pub class_primes: u64,
    pub observed: u64,
    /// `q^l / (r Phi(M) l)`.
    pub predicted: BigRational,
    /// `q^(l/2)`.
    pub sqrt_scale: f64,
}

impl DensityCheck {
    pub fn deviation(&self) -> f64 {
        (self.observed as f64 - self.predicted.to_f64().unwrap_or(f64::NAN)).abs()
    }

    /// Deviation in units of `q^(l/2)`.
    pub fn normalized_deviation(&self) -> f64 {
        self.deviation() / self.sqrt_scale
    }
}

pub fn density_check(
    g: &Poly,
    r: u64,
    m: &Poly,
    alpha: &Poly,
    ell: usize,
    ctx: &FieldCtx,
    budget: Budget,
) -> Result<DensityCheck> {
    if !is_prime_u64(ell as u64) {
        return Err(Error::invalid(format!("l = {ell} must be prime")));
    }
    if !is_prime_u64(r) {
        return Err(Error::invalid(format!("r = {r} is not prime")));
    }
    if u64::from(ctx.unit_order()) % r == 0 {
        return Err(Error::invalid(format!(
            "r = {r} divides q - 1; such r contribute nothing to the sum"
        )));
    }
    let norm = big_pow(ctx.q(), ell);
    if !((&norm - 1u32) % r).is_zero() {
        return Err(Error::invalid(format!("r = {r} does not divide q^{ell} - 1")));
    }
    if m.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = m.monic(ctx)?.1;
    if !gcd(alpha, &m, ctx)?.is_one() {
        return Err(Error::NotCoprime);
    }
    let alpha = alpha.rem(&m, ctx)?;
    let primes = enumerate_irreducibles(ell, ctx, budget)?;
    let in_class: Vec<&Poly> = primes
        .iter()
        .map(|p| Ok((p.rem(&m, ctx)? == alpha).then_some(p)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let observed = in_class
        .par_iter()
        .map(|p| in_pr(p, g, r, ell, ctx).map(u64::from))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    let phi_m = euler_phi(&m, ctx)?;
    let predicted = BigRational::new(
        norm.into(),
        BigInt::from(phi_m * BigUint::from(r) * BigUint::from(ell)),
    );
    Ok(DensityCheck {
        ell,
        r,
        class_primes: in_class.len() as u64,
        observed,
        predicted,
        sqrt_scale: f64::from(ctx.q()).powf(ell as f64 / 2.0),
    })
}

/// `sum 1/r` over primes `r | q^l - 1` with `r` not dividing `q - 1`, next to
/// the bound `omega(q^l - 1) / l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSum {
    pub ell: usize,
    /// The primes `r` in the sum, ascending.
    pub primes: Vec<u64>,
    /// Number of distinct primes dividing `q^l - 1`.
    pub omega: usize,
    pub sum: BigRational,
    pub bound: BigRational,
}

/// Also checks that `q` has order exactly `l` modulo every `r` in the sum.
pub fn r_sum_diagnostic(ell: usize, ctx: &FieldCtx) -> Result<RSum> {
    if !is_prime_u64(ell as u64) {
        return Err(Error::invalid(format!("l = {ell} must be prime")));
    }
    let fac = integer_factorize(&(big_pow(ctx.q(), ell) - 1u32))?;
    let q = u64::from(ctx.q());
    let primes: Vec<u64> = fac.primes().filter(|r| (q - 1) % r != 0).collect();
    for &r in &primes {
        let ord = order_mod_prime(q % r, r)?;
        if ord != ell as u64 {
            return Err(Error::Mismatch(format!(
                "q has order {ord} modulo {r}, expected {ell}"
            )));
        }
    }
    let sum = primes
        .iter()
        .map(|&r| BigRational::new(BigInt::one(), r.into()))
        .fold(BigRational::zero(), |acc, x| acc + x);
    let omega = fac.omega();
    let bound = BigRational::new(BigInt::from(omega), BigInt::from(ell));
    if sum > bound {
        return Err(Error::Mismatch(format!("sum {sum} exceeds bound {bound}")));
    }
    Ok(RSum {
        ell,
        primes,
        omega,
        sum,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(f: &FieldCtx, s: &str) -> Poly {
        f.parse_poly(s).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn kummer_examples() {
        let f7 = FieldCtx::new(7).unwrap();
        assert_eq!(kummer_genus(&Poly::t(), 3, &f7).unwrap().genus, 0);
        assert_eq!(kummer_genus(&p(&f7, "t^2+t"), 3, &f7).unwrap().genus, 1);
        assert!(kummer_genus(&p(&f7, "t^3"), 3, &f7).is_err());
        assert!(kummer_genus(&Poly::t(), 7, &f7).is_err());
        assert!(kummer_genus(&Poly::t(), 4, &f7).is_err());
        assert!(kummer_genus(&Poly::one(), 3, &f7).is_err());
        // y^2 = t^3 + 1 is elliptic; t^3 * (t+1) has the same ramification
        assert_eq!(kummer_genus(&p(&f7, "t^3+1"), 2, &f7).unwrap().genus, 1);
        assert_eq!(kummer_genus(&p(&f7, "t^4+t^3"), 2, &f7).unwrap().genus, 0);
    }

    #[test]
    fn cyclotomic_examples() {
        for q in [2u64, 3, 4, 5, 7] {
            let ctx = FieldCtx::new(q).unwrap();
            assert_eq!(cyclotomic_genus(&Poly::t(), &ctx).unwrap().genus, 0);
        }
        let f2 = FieldCtx::new(2).unwrap();
        assert_eq!(cyclotomic_genus(&p(&f2, "t^2"), &f2).unwrap().genus, 0);
        let f3 = FieldCtx::new(3).unwrap();
        assert_eq!(cyclotomic_genus(&p(&f3, "t^2+t"), &f3).unwrap().genus, 0);
        // Phi = 8, s = 7: 2g - 2 = -16 + 14 + 4
        assert_eq!(cyclotomic_genus(&p(&f3, "t^2+1"), &f3).unwrap().genus, 2);
        assert!(cyclotomic_genus(&Poly::one(), &f3).is_err());
    }

    #[test]
    fn castelnuovo_examples() {
        assert_eq!(castelnuovo_bound(1, 0, 1, 0).unwrap(), 0);
        assert_eq!(castelnuovo_bound(2, 1, 3, 2).unwrap(), 10);
        assert!(castelnuovo_bound(0, 1, 1, 1).is_err());
        let f7 = FieldCtx::new(7).unwrap();
        let l = compositum_genus_bound(&Poly::t(), 3, &Poly::t(), &f7).unwrap();
        assert_eq!(l.genus, 10);
        assert!(!l.exact);
        let kummer_only = compositum_genus_bound(&Poly::t(), 3, &Poly::one(), &f7).unwrap();
        assert_eq!(kummer_only.source, GenusSource::Kummer);
    }

    #[test]
    fn chebotarev_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let c = chebotarev_predict(11, 1, 23, 0, &f2).unwrap();
        assert_eq!(c.main_term, ratio(2048, 253));
        assert!((c.error_scale - 2048f64.sqrt() / 11.0).abs() < 1e-9);
        assert!(chebotarev_predict(11, 0, 23, 0, &f2).unwrap().main_term.is_zero());
        assert!(chebotarev_predict(11, 1, 0, 0, &f2).is_err());
    }

    #[test]
    fn density_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let b = Budget::default();
        let d = density_check(&Poly::t(), 23, &Poly::one(), &Poly::zero(), 11, &f2, b).unwrap();
        assert_eq!(d.class_primes, 186);
        assert_eq!(d.observed, 8);
        assert_eq!(d.predicted, ratio(2048, 253));
        let d = density_check(&Poly::t(), 89, &Poly::one(), &Poly::zero(), 11, &f2, b).unwrap();
        assert_eq!(d.observed, 2);
        assert_eq!(d.predicted, ratio(2048, 979));
        let f3 = FieldCtx::new(3).unwrap();
        assert!(density_check(&Poly::t(), 2, &Poly::one(), &Poly::zero(), 3, &f3, b).is_err());
        assert!(density_check(&Poly::t(), 7, &Poly::one(), &Poly::zero(), 5, &f2, b).is_err());
        assert!(density_check(&Poly::t(), 31, &Poly::t(), &Poly::zero(), 5, &f2, b).is_err());
    }

    #[test]
    fn density_classes_partition() {
        // the classes mod t^2+t+1 coprime to it split the count
        let f2 = FieldCtx::new(2).unwrap();
        let b = Budget::default();
        let m = p(&f2, "t^2+t+1");
        let whole = density_check(&Poly::t(), 23, &Poly::one(), &Poly::zero(), 11, &f2, b).unwrap();
        let mut total = 0;
        let mut primes = 0;
        for a in ["1", "t", "t+1"] {
            let d = density_check(&Poly::t(), 23, &m, &p(&f2, a), 11, &f2, b).unwrap();
            assert_eq!(d.predicted, ratio(2048, 23 * 3 * 11));
            total += d.observed;
            primes += d.class_primes;
        }
        assert_eq!(total, whole.observed);
        assert_eq!(primes, whole.class_primes);
    }

    #[test]
    fn r_sum_examples() {
        let f2 = FieldCtx::new(2).unwrap();
        let s = r_sum_diagnostic(11, &f2).unwrap();
        assert_eq!(s.primes, vec![23, 89]);
        assert_eq!(s.sum, ratio(1, 23) + ratio(1, 89));
        assert_eq!(s.bound, ratio(2, 11));
        let s = r_sum_diagnostic(13, &f2).unwrap();
        assert_eq!(s.sum, ratio(1, 8191));
        assert_eq!(s.bound, ratio(1, 13));
        let s = r_sum_diagnostic(2, &f2).unwrap();
        assert_eq!(s.sum, ratio(1, 3));
        assert!(r_sum_diagnostic(4, &f2).is_err());
        for q in [3u64, 4, 5, 7, 8, 9, 11] {
            let ctx = FieldCtx::new(q).unwrap();
            for ell in [2usize, 3, 5, 7, 11] {
                let s = r_sum_diagnostic(ell, &ctx).unwrap();
                assert!(s.primes.iter().all(|&r| r % ell as u64 == 1));
            }
        }
    }

    proptest! {
        #[test]
        fn linear_kummer_is_rational(c in 0u32..7, r in prop::sample::select(vec![2u64, 3, 5, 11, 13])) {
            let f7 = FieldCtx::new(7).unwrap();
            let a = Poly::t().sub(&Poly::constant(f7.elem(c).unwrap()), &f7);
            prop_assert_eq!(kummer_genus(&a, r, &f7).unwrap().genus, 0);
        }

        #[test]
        fn squarefree_kummer_matches_superelliptic(idx in 1u64..2400,
                                                  r in prop::sample::select(vec![2u64, 3, 5])) {
            // y^r = a with a squarefree of degree n has genus (r-1)(n-1)/2 when
            // r does not divide n, and (r-1)(n-2)/2 otherwise
            let f7 = FieldCtx::new(7).unwrap();
            let a = Poly::from_index(idx, f7.q()).monic(&f7).unwrap().1;
            let n = a.degree().unwrap() as u64;
            prop_assume!(n >= 1 && crate::ffcore::is_squarefree(&a, &f7).unwrap());
            let expected = if n % r != 0 { (r - 1) * (n - 1) / 2 } else { (r - 1) * (n - 2) / 2 };
            prop_assert_eq!(kummer_genus(&a, r, &f7).unwrap().genus, expected);
        }

        #[test]
        fn cyclotomic_genus_is_integral(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]),
                                        idx in 1u64..3000) {
            let ctx = FieldCtx::new(q).unwrap();
            let m = Poly::from_index(idx, ctx.q());
            prop_assume!(m.degree() > Some(0));
            prop_assert!(cyclotomic_genus(&m, &ctx).is_ok());
        }
    }
}
