mod common;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ultrametric::valcore::{cmp_norm_radius, floor_to_value_group, NormValue, Radius, Valuation};

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7])
}

fn exponent() -> impl Strategy<Value = BigRational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn radius() -> impl Strategy<Value = Radius> {
    (1i64..500, 1i64..500).prop_map(|(n, d)| Radius::frac(n, d))
}

/// `p^(-q)` against `r` by exact integer powers, independent of the library.
fn oracle_cmp(p: u64, q: &BigRational, r: &Radius) -> Ordering {
    let v = q.denom().clone();
    let v: u32 = v.try_into().unwrap();
    let u: i64 = q.numer().try_into().unwrap();
    common::cmp_power(p, u, v, r.value())
}

proptest! {
    #[test]
    fn order_is_total_and_matches_floats(p in prime(), a in exponent(), b in exponent()) {
        let x = NormValue::pow_p(p, a.clone());
        let y = NormValue::pow_p(p, b.clone());
        let rel = [x < y, x == y, x > y];
        prop_assert_eq!(rel.iter().filter(|&&t| t).count(), 1);
        // larger valuation, smaller norm
        prop_assert_eq!(x.cmp(&y), b.cmp(&a));
        let fx = -(p as f64).ln() * (a.numer().to_string().parse::<f64>().unwrap() / a.denom().to_string().parse::<f64>().unwrap());
        let fy = -(p as f64).ln() * (b.numer().to_string().parse::<f64>().unwrap() / b.denom().to_string().parse::<f64>().unwrap());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x.cmp(&y), fx.partial_cmp(&fy).unwrap());
        }
    }

    #[test]
    fn multiplication_adds_exponents(p in prime(), a in exponent(), b in exponent()) {
        let x = NormValue::pow_p(p, a.clone());
        let y = NormValue::pow_p(p, b.clone());
        prop_assert_eq!(x.mul(&y).v, Valuation::Finite(a + b));
        prop_assert!(x.mul(&NormValue::zero(p)).is_zero());
        prop_assert!(NormValue::zero(p).mul(&y).is_zero());
    }

    #[test]
    fn norm_radius_comparison_matches_oracle(p in prime(), q in exponent(), r in radius()) {
        let n = NormValue::pow_p(p, q.clone());
        prop_assert_eq!(cmp_norm_radius(&n, &r).unwrap(), oracle_cmp(p, &q, &r));
    }

    #[test]
    fn floor_is_the_largest_norm_below(p in prime(), e in 1u32..9, r in radius()) {
        let q = match floor_to_value_group(p, e, &r).unwrap() {
            Valuation::Finite(q) => q,
            Valuation::Infinite => unreachable!(),
        };
        prop_assert!((&q * BigRational::from_integer(BigInt::from(e))).is_integer());
        prop_assert_ne!(oracle_cmp(p, &q, &r), Ordering::Greater);
        let prev = &q - BigRational::new(1.into(), e.into());
        prop_assert_eq!(oracle_cmp(p, &prev, &r), Ordering::Greater);
    }
}
