//! Admissible tuples `H = {h_1, ..., h_k}`.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::factorizer::enumerate_irreducibles;
use crate::ffcore::{big_pow, FieldCtx, Poly};

/// Result of checking residues modulo every prime of norm at most `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// `(prime, first residue class missed by the tuple)`.
    pub omitted: Vec<(Poly, Poly)>,
    /// Primes whose residue classes are all hit.
    pub covered: Vec<Poly>,
}

/// The first residue modulo `p`, in canonical order, not hit by any element.
pub fn omitted_residue(elements: &[Poly], p: &Poly, ctx: &FieldCtx) -> Result<Option<Poly>> {
    let deg = p.degree().ok_or(Error::ZeroPolynomial)?;
    let hit: HashSet<Poly> = elements
        .iter()
        .map(|h| h.rem(p, ctx))
        .collect::<Result<_>>()?;
    let size = big_pow(ctx.q(), deg);
    if BigUint::from(hit.len()) >= size {
        return Ok(None);
    }
    let mut i = 0u64;
    loop {
        let r = Poly::from_index(i, ctx.q());
        if !hit.contains(&r) {
            return Ok(Some(r));
        }
        i += 1;
    }
}

/// Checks every prime `p` with `|p| <= k`; larger primes have more than `k`
/// classes and cannot be covered.
pub fn is_admissible(elements: &[Poly], ctx: &FieldCtx, budget: Budget) -> Result<Admissibility> {
    let distinct: HashSet<&Poly> = elements.iter().collect();
    if distinct.len() != elements.len() {
        return Err(Error::invalid("tuple elements must be distinct"));
    }
    let k = elements.len() as u64;
    let mut omitted = Vec::new();
    let mut covered = Vec::new();
    let mut deg = 1;
    while (ctx.q() as u64).checked_pow(deg as u32).is_some_and(|n| n <= k) {
        for p in enumerate_irreducibles(deg, ctx, budget)? {
            match omitted_residue(elements, &p, ctx)? {
                Some(r) => omitted.push((p, r)),
                None => covered.push(p),
            }
        }
        deg += 1;
    }
    Ok(Admissibility {
        admissible: covered.is_empty(),
        omitted,
        covered,
    })
}

/// An admissible tuple of distinct polynomials with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleH {
    elements: Vec<Poly>,
    g_multiple: bool,
    certificate: Vec<(Poly, Poly)>,
}

impl TupleH {
    /// Certifies admissibility; `g_multiple` records whether `g` divides
    /// every element.
    pub fn new(elements: Vec<Poly>, g: &Poly, ctx: &FieldCtx, budget: Budget) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::invalid("a tuple needs at least one element"));
        }
        let check = is_admissible(&elements, ctx, budget)?;
        if let Some(p) = check.covered.first() {
            return Err(Error::invalid(format!(
                "tuple covers every residue class modulo {}",
                ctx.fmt_poly(p)
            )));
        }
        let mut g_multiple = true;
        for h in &elements {
            g_multiple &= g.divides(h, ctx)?;
        }
        Ok(TupleH {
            elements,
            g_multiple,
            certificate: check.omitted,
        })
    }

    pub fn elements(&self) -> &[Poly] {
        &self.elements
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn g_multiple(&self) -> bool {
        self.g_multiple
    }

    pub fn certificate(&self) -> &[(Poly, Poly)] {
        &self.certificate
    }

    /// `g * H`, again admissible.
    pub fn scaled(&self, g: &Poly, ctx: &FieldCtx, budget: Budget) -> Result<Self> {
        let elements = self.elements.iter().map(|h| h.mul(g, ctx)).collect();
        TupleH::new(elements, g, ctx, budget)
    }

    pub fn degree_range(&self) -> (i64, i64) {
        let degs = self.elements.iter().map(|h| h.degree_i64());
        (degs.clone().min().unwrap(), degs.max().unwrap())
    }

    /// `max_{i != j} |h_i - h_j|`; zero for a singleton.
    pub fn max_gap_norm(&self, ctx: &FieldCtx) -> BigUint {
        let mut best: Option<usize> = None;
        for (i, a) in self.elements.iter().enumerate() {
            for b in &self.elements[i + 1..] {
                let d = a.sub(b, ctx).degree();
                best = best.max(d);
            }
        }
        best.map_or(BigUint::default(), |d| big_pow(ctx.q(), d))
    }
}

/// The first `k` primes of norm greater than `k`, each multiplied by `g`.
pub fn build_admissible_tuple(k: usize, ctx: &FieldCtx, g: &Poly, budget: Budget) -> Result<TupleH> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut deg = 1;
    while big_pow(ctx.q(), deg) <= BigUint::from(k) {
        deg += 1;
    }
    let mut primes = Vec::with_capacity(k);
    while primes.len() < k {
        let batch = enumerate_irreducibles(deg, ctx, budget)?;
        primes.extend(batch.into_iter().take(k - primes.len()));
        deg += 1;
    }
    let elements = primes.iter().map(|p| p.mul(g, ctx)).collect();
    TupleH::new(elements, g, ctx, budget)
}
