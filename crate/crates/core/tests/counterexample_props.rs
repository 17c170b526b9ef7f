mod common;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ultrametric::ballcalc::{TowerSpace, UltraSpace};
use ultrametric::counterexample::{avoid_ball_step, ball_diameter, default_dense_sequence, default_radii, schikhof_chain};
use ultrametric::eisenstein::TowerElement;
use ultrametric::gen;
use ultrametric::padic::ArithOp;
use ultrametric::valcore::cmp_norm_radius;
use ultrametric::{Error, Radius, Scalar, Valuation};

const PREC: u32 = 32;
const CAP: u32 = 1024;

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

fn radius() -> impl Strategy<Value = Radius> {
    (1i64..400, 1i64..100).prop_map(|(n, d)| Radius::frac(n, d))
}

/// `r` is an integer power of `p`, the only rationals in any value group
/// `p^(Z/e)`.
fn is_power_of(p: u64, r: &BigRational) -> bool {
    let (n, d) = (r.numer().clone(), r.denom().clone());
    let pb = BigInt::from(p);
    let one = BigInt::from(1);
    let pure = |mut x: BigInt| {
        while &x % &pb == BigInt::from(0) {
            x /= &pb;
        }
        x == one
    };
    (n == one && pure(d.clone())) || (d == one && pure(n))
}

/// `r0 > r_1 > ... > r_n > r0 / 2`.
fn valid_radii(rng: &mut ChaCha8Rng, n: usize) -> Vec<Radius> {
    let r0 = BigRational::new(rng.gen_range(1..50).into(), rng.gen_range(1..50).into());
    let den = 4 * (n as i64 + 1) * rng.gen_range(1..5);
    let mut ts: Vec<i64> = (1..den / 2).collect();
    ts.shuffle(rng);
    let mut ts = ts[..n].to_vec();
    ts.sort_by(|a, b| b.cmp(a));
    let mut out = vec![Radius::new(r0.clone()).unwrap()];
    for t in ts {
        let f = BigRational::new(1.into(), 2.into()) + BigRational::new(t.into(), den.into());
        out.push(Radius::new(&r0 * f).unwrap());
    }
    out
}

proptest! {
    #[test]
    fn diameter_is_the_largest_norm_below_the_radius(p in prime(), e in 1u32..8, r in radius()) {
        let d = ball_diameter(p, e, &r).unwrap();
        prop_assert_ne!(cmp_norm_radius(&d, &r).unwrap(), Ordering::Greater);
        let q = match &d.v {
            Valuation::Finite(q) => q.clone(),
            Valuation::Infinite => unreachable!(),
        };
        let k: i64 = (&q * BigRational::from_integer(e.into())).to_integer().try_into().unwrap();
        prop_assert_eq!(common::cmp_power(p, k, e, r.value()), cmp_norm_radius(&d, &r).unwrap());
        prop_assert_eq!(common::cmp_power(p, k - 1, e, r.value()), Ordering::Greater);
        let equal = cmp_norm_radius(&d, &r).unwrap() == Ordering::Equal;
        prop_assert_eq!(equal, is_power_of(p, r.value()));
    }

    #[test]
    fn avoid_step_separates_and_excludes(p in prime(), seed in any::<u64>(), a in radius(), b in radius()) {
        prop_assume!(a < b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = TowerSpace { p, prec: PREC, level_cap: CAP };
        let c0 = gen::tower_integral(&mut rng, p, &[1, 2, 4], PREC, CAP);
        // half the time z sits right next to c0
        let z = if rng.gen_bool(0.5) {
            c0.arith(ArithOp::Add, &TowerElement::monomial(p, 1, 12, PREC, CAP).unwrap()).unwrap()
        } else {
            gen::tower_integral(&mut rng, p, &[1, 3], PREC, CAP)
        };
        let st = avoid_ball_step(&c0, &b, &a, &z, PREC).unwrap();
        let w = st.offset.norm().unwrap();
        prop_assert_eq!(cmp_norm_radius(&w, &a).unwrap(), Ordering::Greater);
        prop_assert_ne!(cmp_norm_radius(&w, &b).unwrap(), Ordering::Greater);
        prop_assert!(!s.within(&st.center, &z, &a).unwrap());
        prop_assert!(s.within(&st.center, &c0, &b).unwrap());
    }

    #[test]
    fn chains_with_random_valid_radii_hold(p in prime(), n in 1usize..=10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let radii = valid_radii(&mut rng, n);
        let mut seq = default_dense_sequence(p, 3 * n, PREC, CAP).unwrap();
        seq.shuffle(&mut rng);
        seq.truncate(n);
        let c0 = gen::tower_integral(&mut rng, p, &[1, 2], PREC, CAP);
        // unrelated radii can push the lcm of the offset levels past the cap
        let ch = match schikhof_chain(&seq, &radii, &c0, PREC) {
            Err(Error::LevelCapExceeded { level, .. }) => {
                prop_assert!(level > u64::from(CAP));
                return Ok(());
            }
            r => r.unwrap(),
        };
        prop_assert!(ch.all_hold(), "{:?}", ch.certificates);
        prop_assert_eq!(ch.steps.len(), n);
        prop_assert!(ch.max_level <= CAP);
    }
}

#[test]
fn default_five_step_chain_stays_at_small_levels() {
    let seq = default_dense_sequence(2, 5, PREC, CAP).unwrap();
    let c0 = TowerElement::from_rational(2, &BigRational::from_integer(0.into()), PREC, CAP);
    let ch = schikhof_chain(&seq, &default_radii(5), &c0, PREC).unwrap();
    assert!(ch.all_hold());
    assert!(ch.max_level <= 16, "max level {}", ch.max_level);
}
