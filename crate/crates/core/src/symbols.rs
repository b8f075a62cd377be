//! The `d`-th power residue symbol `(a/b)_d` with values in `F_q^*`.
//!
//! Two evaluation paths are provided and kept independent:
//! [`symbol_composite`] factors `b` and exponentiates modulo each prime,
//! while [`symbol_reciprocal`] runs a Euclid-style loop driven by the
//! reciprocity law `(a/b)_d = (b/a)_d * (-1)^(((q-1)/d) deg a deg b)` and never
//! factors anything.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::factorizer::{factorize, is_irreducible};
use crate::ffcore::{big_pow, gcd, FieldCtx, Fq, ModRing, Poly};

/// A value of a residue symbol together with its discrete logarithm to the
/// field's fixed generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymbolValue {
    pub value: Fq,
    /// `value = generator^dlog`, `0 <= dlog < q - 1`.
    pub dlog: u32,
}

impl SymbolValue {
    pub fn new(value: Fq, ctx: &FieldCtx) -> Result<Self> {
        let dlog = ctx
            .dlog(value)
            .ok_or_else(|| Error::invalid("symbol values are nonzero"))?;
        Ok(SymbolValue { value, dlog })
    }

    pub fn one() -> Self {
        SymbolValue {
            value: Fq::ONE,
            dlog: 0,
        }
    }

    /// Multiplicative order of the value in `F_q^*`.
    pub fn order(&self, ctx: &FieldCtx) -> u32 {
        ctx.order(self.value).expect("nonzero")
    }

    /// True when the value generates `F_q^*`.
    pub fn is_generator(&self, ctx: &FieldCtx) -> bool {
        self.order(ctx) == ctx.unit_order()
    }
}

fn check_d(d: u32, ctx: &FieldCtx) -> Result<()> {
    if d == 0 || ctx.unit_order() % d != 0 {
        return Err(Error::invalid(format!(
            "d = {d} must divide q - 1 = {}",
            ctx.unit_order()
        )));
    }
    Ok(())
}

fn require_monic(p: &Poly, ctx: &FieldCtx) -> Result<()> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic(ctx.fmt_poly(p)));
    }
    Ok(())
}

/// `(a/P)_d` for a prime `P`: the element of `F_q^*` congruent to
/// `a^((|P|-1)/d)` modulo `P`.
pub fn symbol_prime(a: &Poly, p: &Poly, d: u32, ctx: &FieldCtx) -> Result<SymbolValue> {
    check_d(d, ctx)?;
    require_monic(p, ctx)?;
    if !is_irreducible(p, ctx)? {
        return Err(Error::Reducible(ctx.fmt_poly(p)));
    }
    prime_symbol_unchecked(a, p, d, ctx)
}

fn prime_symbol_unchecked(a: &Poly, p: &Poly, d: u32, ctx: &FieldCtx) -> Result<SymbolValue> {
    let ring = ModRing::new(p, ctx)?;
    let r = ring.reduce(a);
    if r.is_zero() {
        return Err(Error::Ramified {
            value: ctx.fmt_poly(a),
            prime: ctx.fmt_poly(p),
        });
    }
    let deg = p.degree().expect("nonzero");
    let e: BigUint = (big_pow(ctx.q(), deg) - 1u32) / d;
    let x = ring.pow(&r, &e);
    if x.degree() != Some(0) {
        return Err(Error::Mismatch(format!(
            "{}^((|P|-1)/{d}) mod {} is not a constant",
            ctx.fmt_poly(a),
            ctx.fmt_poly(p)
        )));
    }
    SymbolValue::new(x.coeff(0), ctx)
}

/// `(a/b)_d` for monic `b`, multiplicatively over the factorization of `b`.
pub fn symbol_composite(a: &Poly, b: &Poly, d: u32, ctx: &FieldCtx) -> Result<SymbolValue> {
    check_d(d, ctx)?;
    require_monic(b, ctx)?;
    if !gcd(a, b, ctx)?.is_one() {
        return Err(Error::NotCoprime);
    }
    let mut acc = Fq::ONE;
    for (p, e) in factorize(b, ctx)?.parts {
        let s = prime_symbol_unchecked(a, &p, d, ctx)?;
        acc = ctx.mul(acc, ctx.pow(s.value, e as u64));
    }
    SymbolValue::new(acc, ctx)
}

/// `(a/b)_d` for monic coprime `a`, `b` by reciprocity, without factoring.
pub fn symbol_reciprocal(a: &Poly, b: &Poly, d: u32, ctx: &FieldCtx) -> Result<SymbolValue> {
    check_d(d, ctx)?;
    require_monic(a, ctx)?;
    require_monic(b, ctx)?;
    symbol_jacobi(a, b, d, ctx)
}

/// Reciprocity evaluator for any numerator `a` and monic modulus `b`.
pub fn symbol_jacobi(a: &Poly, b: &Poly, d: u32, ctx: &FieldCtx) -> Result<SymbolValue> {
    check_d(d, ctx)?;
    require_monic(b, ctx)?;
    match jacobi_value(a, b, d, ctx)? {
        Some(v) => SymbolValue::new(v, ctx),
        None => Err(Error::NotCoprime),
    }
}

/// `None` when `a` and `b` share a factor. `b` must be monic, `d | q - 1`.
pub(crate) fn jacobi_value(a: &Poly, b: &Poly, d: u32, ctx: &FieldCtx) -> Result<Option<Fq>> {
    let e = (ctx.unit_order() / d) as u64;
    let minus_one = ctx.neg(Fq::ONE);
    let mut acc = Fq::ONE;
    let mut num = a.clone();
    let mut modulus = b.clone();
    loop {
        let deg_b = modulus.degree().expect("nonzero");
        if deg_b == 0 {
            return Ok(Some(acc));
        }
        num = num.rem(&modulus, ctx)?;
        if num.is_zero() {
            return Ok(None);
        }
        // (c/b)_d = c^(((q-1)/d) deg b) for a constant c
        let (c, monic) = num.monic(ctx)?;
        acc = ctx.mul(acc, ctx.pow(c, e * deg_b as u64));
        let deg_a = monic.degree().expect("nonzero");
        if (e as usize * deg_a * deg_b) % 2 == 1 {
            acc = ctx.mul(acc, minus_one);
        }
        num = modulus;
        modulus = monic;
    }
}

/// The first residue `a` modulo the prime `P` (canonical order) with
/// `(a/P)_d = zeta`.
pub fn find_preimage(p: &Poly, zeta: Fq, d: u32, ctx: &FieldCtx) -> Result<Poly> {
    check_d(d, ctx)?;
    require_monic(p, ctx)?;
    if zeta.is_zero() || !ctx.pow(zeta, d as u64).is_one() {
        return Err(Error::invalid(format!(
            "{} is not a {d}-th root of unity",
            ctx.fmt_elem(zeta)
        )));
    }
    let deg = p.degree().expect("nonzero");
    let count = big_pow(ctx.q(), deg);
    let mut i = 1u64;
    while BigUint::from(i) < count {
        let a = Poly::from_index(i, ctx.q());
        if prime_symbol_unchecked(&a, p, d, ctx)?.value == zeta {
            return Ok(a);
        }
        i += 1;
    }
    Err(Error::Mismatch(format!(
        "no residue modulo {} has symbol {}",
        ctx.fmt_poly(p),
        ctx.fmt_elem(zeta)
    )))
}

/// Divisors of `q - 1`, ascending.
pub fn admissible_exponents(ctx: &FieldCtx) -> Vec<u32> {
    let n = ctx.unit_order();
    (1..=n).filter(|d| n % d == 0).collect()
}
