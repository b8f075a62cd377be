//! Admissible tuples, the modulus `W` and class `alpha`, Maynard-Tao weights
//! and the sums `S_1`, `S_2` evaluated exactly over small fields.

pub mod multipoly;
pub mod residue;
pub mod sums;
pub mod tuple;
pub mod weights;

pub use multipoly::{mk_lower_bound, parse_rational, simplex_integrals, MultiPoly, SimplexIntegrals};
pub use residue::{
    compute_w, compute_w_override, find_alpha, verify_alpha, AlphaMode, AlphaVerification,
    AlphaViolation, VerifySpec, ViolationKind,
};
pub use sums::{s1_by_expansion, sieve_sums, sieve_sums_with, MainTerms, SieveSums};
pub use tuple::{build_admissible_tuple, is_admissible, Admissibility, TupleH};
pub use weights::{lambda_weights, lambda_weights_for, SieveConfig, WeightTable};

use crate::error::Result;
use crate::ffcore::{big_pow, FieldCtx, Poly};
use num_traits::ToPrimitive;

/// The monic polynomials of a fixed degree in a class `alpha mod W`, indexed
/// `0..len()` in canonical order.
#[derive(Debug, Clone)]
pub struct ResidueClass {
    base: Poly,
    w: Poly,
    free: Option<usize>,
    len: u64,
}

impl ResidueClass {
    pub fn new(alpha: &Poly, w: &Poly, deg: usize, ctx: &FieldCtx) -> Result<Self> {
        let base = alpha.rem(w, ctx)?;
        let dw = w.degree().expect("nonzero modulus");
        if dw <= deg {
            let free = deg - dw;
            let len = big_pow(ctx.q(), free).to_u64().unwrap_or(u64::MAX);
            return Ok(ResidueClass {
                base,
                w: w.clone(),
                free: Some(free),
                len,
            });
        }
        let len = u64::from(base.degree() == Some(deg) && base.is_monic());
        Ok(ResidueClass {
            base,
            w: w.clone(),
            free: None,
            len,
        })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `i`-th member: `base + W m` with `m` the `i`-th monic polynomial of
    /// the free degree.
    pub fn get(&self, i: u64, ctx: &FieldCtx) -> Poly {
        match self.free {
            Some(free) => {
                let m = Poly::monic_from_index(free, i, ctx.q());
                self.base.add(&self.w.mul(&m, ctx), ctx)
            }
            None => self.base.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residue_classes() {
        let f2 = FieldCtx::new(2).unwrap();
        let class = ResidueClass::new(&Poly::one(), &Poly::t(), 5, &f2).unwrap();
        assert_eq!(class.len(), 16);
        for i in 0..16 {
            let n = class.get(i, &f2);
            assert_eq!(n.degree(), Some(5));
            assert!(n.is_monic());
            assert!(n.coeff(0).is_one());
        }
        let w = f2.parse_poly("t^3+t").unwrap();
        let alpha = f2.parse_poly("t^2+1").unwrap();
        let small = ResidueClass::new(&alpha, &w, 2, &f2).unwrap();
        assert_eq!(small.len(), 1);
        assert_eq!(small.get(0, &f2), alpha);
        assert!(ResidueClass::new(&alpha, &w, 1, &f2).unwrap().is_empty());
        let whole = ResidueClass::new(&Poly::zero(), &Poly::one(), 3, &f2).unwrap();
        assert_eq!(whole.len(), 8);
    }
}
