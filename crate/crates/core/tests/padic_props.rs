mod common;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use ultrametric::ballcalc::{PadicSpace, UltraSpace};
use ultrametric::padic::{Comparison, PadicNumber};
use ultrametric::ValBound;

const PREC: u32 = 24;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-5000i64..5000, 1i64..300).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

/// An inexact value `p^val * unit` with `prec` known digits.
fn approx(p: u64) -> impl Strategy<Value = PadicNumber> {
    (-3i64..4, any::<u64>(), 4u32..PREC).prop_map(move |(val, seed, prec)| {
        let m = num_traits::pow(BigInt::from(p), prec as usize);
        let mut unit = BigInt::from(seed) % &m;
        if (&unit % p).is_zero() {
            unit += 1;
        }
        PadicNumber::from_digits(p, val, &unit, prec)
    })
}

fn same(a: &PadicNumber, b: &PadicNumber) -> bool {
    a.compare(b) != Comparison::Distinct
}

proptest! {
    #[test]
    fn ultrametric_on_exact_values(p in prime(), x in rational(), y in rational(), z in rational()) {
        let s = PadicSpace { p, prec: PREC };
        let (x, y, z) = (PadicNumber::from_rational(p, &x, PREC), PadicNumber::from_rational(p, &y, PREC), PadicNumber::from_rational(p, &z, PREC));
        let dxy = s.dist(&x, &y).unwrap();
        let dyz = s.dist(&y, &z).unwrap();
        let dxz = s.dist(&x, &z).unwrap();
        let m = dxy.clone().max(dyz.clone());
        prop_assert!(dxz <= m);
        if dxy != dyz {
            prop_assert_eq!(dxz, m);
        }
    }

    #[test]
    fn valuation_matches_rational_oracle(p in prime(), q in rational()) {
        let x = PadicNumber::from_rational(p, &q, PREC);
        prop_assert_eq!(x.valuation().unwrap(), common::to_valuation(common::rat_val(&q, p)));
    }

    #[test]
    fn norm_is_multiplicative(p in prime(), a in rational(), b in rational()) {
        let x = PadicNumber::from_rational(p, &a, PREC);
        let y = PadicNumber::from_rational(p, &b, PREC);
        prop_assert_eq!(x.try_mul(&y).unwrap().norm().unwrap(), x.norm().unwrap().mul(&y.norm().unwrap()));
    }

    #[test]
    fn inexact_norm_is_multiplicative((_p, x, y) in prime().prop_flat_map(|p| (Just(p), approx(p), approx(p)))) {
        let xy = x.try_mul(&y).unwrap();
        prop_assert_eq!(xy.norm().unwrap(), x.norm().unwrap().mul(&y.norm().unwrap()));
        prop_assert_eq!(xy.precision(), x.precision().min(y.precision()));
    }

    #[test]
    fn ring_axioms_at_precision((_p, a, b, c) in prime().prop_flat_map(|p| (Just(p), approx(p), approx(p), approx(p)))) {
        let l = a.try_add(&b).unwrap().try_add(&c).unwrap();
        let r = a.try_add(&b.try_add(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
        let l = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let r = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
        let l = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let r = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert!(same(&l, &r));
    }

    #[test]
    fn embedding_of_rationals_is_a_ring_morphism(p in prime(), a in rational(), b in rational()) {
        let f = |q: &BigRational| PadicNumber::from_rational(p, q, PREC);
        prop_assert_eq!(f(&a).try_add(&f(&b)).unwrap().compare(&f(&(&a + &b))), Comparison::Equal);
        prop_assert_eq!(f(&a).try_mul(&f(&b)).unwrap().compare(&f(&(&a * &b))), Comparison::Equal);
        prop_assert_eq!(f(&a).try_sub(&f(&b)).unwrap().compare(&f(&(&a - &b))), Comparison::Equal);
    }

    #[test]
    fn truncation_keeps_the_strong_triangle_inequality(
        p in prime(), x in rational(), y in rational(), z in rational(), k in 1u32..8
    ) {
        let t = |q: &BigRational| PadicNumber::from_rational(p, q, PREC).truncate(k);
        let (x, y, z) = (t(&x), t(&y), t(&z));
        let lo = |b: ValBound| b.lower();
        let dxy = lo(x.try_sub(&y).unwrap().val_bound());
        let dyz = lo(y.try_sub(&z).unwrap().val_bound());
        let dxz = lo(x.try_sub(&z).unwrap().val_bound());
        prop_assert!(dxz >= dxy.min(dyz));
    }

    #[test]
    fn display_round_trips((p, x) in prime().prop_flat_map(|p| (Just(p), approx(p)))) {
        let back = PadicNumber::parse(&x.to_string(), p, PREC).unwrap();
        prop_assert_eq!(back.compare(&x), Comparison::Indistinguishable);
        prop_assert_eq!(back.valuation().unwrap(), x.valuation().unwrap());
        prop_assert_eq!(back.precision(), x.precision());
        prop_assert_eq!(back.unit(), x.unit());
    }

    #[test]
    fn exact_display_round_trips(p in prime(), q in rational()) {
        let x = PadicNumber::from_rational(p, &q, PREC);
        let back = PadicNumber::parse(&x.to_string(), p, PREC).unwrap();
        prop_assert_eq!(back.compare(&x), Comparison::Equal);
        prop_assert_eq!(back.valuation().unwrap(), x.valuation().unwrap());
    }
}
