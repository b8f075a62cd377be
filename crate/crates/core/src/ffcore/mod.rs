//! Exact arithmetic in `F_q` and `F_q[t]`.

mod field;
mod poly;
mod text;

pub use field::{FieldCtx, Fq, MAX_FIELD_SIZE};
pub use poly::{
    big_pow, crt, crt_general, ext_gcd, gcd, inverse_mod, is_squarefree, lcm, monic_of_degree,
    powmod, ModRing, Poly,
};
pub use text::PolyDisplay;

#[cfg(test)]
mod props {
    use super::*;
    use num_bigint::BigUint;
    use proptest::prelude::*;

    fn arb_poly(q: u32, max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec(0..q, 0..max_len)
            .prop_map(|v| Poly::from_coeffs(v.into_iter().map(Fq::from_raw).collect()))
    }

    fn field_and_polys(n: usize) -> impl Strategy<Value = (u64, Vec<Poly>)> {
        prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]).prop_flat_map(move |q| {
            let qq = q as u32;
            (Just(q), prop::collection::vec(arb_poly(qq, 9), n))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms((q, v) in field_and_polys(3)) {
            let f = FieldCtx::new(q).unwrap();
            let (a, b, c) = (&v[0], &v[1], &v[2]);
            prop_assert_eq!(a.add(b, &f).add(c, &f), a.add(&b.add(c, &f), &f));
            prop_assert_eq!(
                a.mul(&b.add(c, &f), &f),
                a.mul(b, &f).add(&a.mul(c, &f), &f)
            );
            prop_assert_eq!(a.mul(b, &f), b.mul(a, &f));
            prop_assert_eq!(a.sub(a, &f), Poly::zero());
            prop_assert_eq!(a.square(&f), a.mul(a, &f));
            if !b.is_zero() {
                let (qt, r) = a.div_rem(b, &f).unwrap();
                prop_assert_eq!(qt.mul(b, &f).add(&r, &f), a.clone());
                prop_assert!(r.degree_i64() < b.degree_i64());
            }
        }

        #[test]
        fn norm_is_multiplicative((q, v) in field_and_polys(2)) {
            let f = FieldCtx::new(q).unwrap();
            let (a, b) = (&v[0], &v[1]);
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!(
                a.mul(b, &f).norm(&f).unwrap(),
                a.norm(&f).unwrap() * b.norm(&f).unwrap()
            );
        }

        #[test]
        fn powmod_matches_iterated_product((q, v) in field_and_polys(2), n in 0u64..4096) {
            let f = FieldCtx::new(q).unwrap();
            let (a, m) = (&v[0], &v[1]);
            prop_assume!(m.degree().is_some_and(|d| d >= 1));
            let fast = powmod(a, &BigUint::from(n), m, &f).unwrap();
            let mut slow = Poly::one().rem(m, &f).unwrap();
            let a = a.rem(m, &f).unwrap();
            for _ in 0..n {
                slow = slow.mul(&a, &f).rem(m, &f).unwrap();
            }
            prop_assert_eq!(fast, slow);
        }

        #[test]
        fn crt_satisfies_congruences((q, v) in field_and_polys(4)) {
            let f = FieldCtx::new(q).unwrap();
            let (m1, m2) = (&v[0], &v[1]);
            prop_assume!(!m1.is_zero() && !m2.is_zero());
            prop_assume!(gcd(m1, m2, &f).unwrap().is_one());
            let pairs = [(v[2].clone(), m1.clone()), (v[3].clone(), m2.clone())];
            let x = crt(&pairs, &f).unwrap();
            for (r, m) in &pairs {
                prop_assert_eq!(x.rem(m, &f).unwrap(), r.rem(m, &f).unwrap());
            }
            // minimal degree representative
            prop_assert!(x.degree_i64() < m1.mul(m2, &f).degree_i64());
        }

        #[test]
        fn ext_gcd_bezout((q, v) in field_and_polys(2)) {
            let f = FieldCtx::new(q).unwrap();
            let (a, b) = (&v[0], &v[1]);
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let (g, u, w) = ext_gcd(a, b, &f).unwrap();
            prop_assert!(g.is_monic());
            prop_assert_eq!(u.mul(a, &f).add(&w.mul(b, &f), &f), g.clone());
            prop_assert!(g.divides(a, &f).unwrap() && g.divides(b, &f).unwrap());
            prop_assert_eq!(gcd(a, b, &f).unwrap(), g);
        }
    }
}
