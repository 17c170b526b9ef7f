//! Random instances for the verification sweeps.
//!
//! Every generator draws from a caller-supplied RNG, so a seeded RNG gives
//! reproducible instances. Values are exact rationals of moderate height
//! with denominators that are small powers of `p` times small units.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::eisenstein::{EisElement, TowerElement};
use crate::linalg::residue_rank;
use crate::padic::PadicNumber;
use crate::polynomial::Poly;
use crate::seqmodel::SeqRep;
use crate::valcore::Radius;

fn ipow(p: u64, k: u32) -> i64 {
    (p as i64).pow(k)
}

/// `u * p^k` with `u` a small rational and `k` in `-2..=3`; zero with
/// probability 1/16.
pub fn rational<R: Rng>(rng: &mut R, p: u64) -> BigRational {
    if rng.gen_ratio(1, 16) {
        return BigRational::from_integer(0.into());
    }
    let num = rng.gen_range(-60i64..=60);
    let num = if num == 0 { 1 } else { num };
    let den = rng.gen_range(1i64..=9);
    let k = rng.gen_range(-2i32..=3);
    let pk = BigRational::from_integer(BigInt::from(ipow(p, k.unsigned_abs())));
    let base = BigRational::new(num.into(), den.into());
    if k >= 0 {
        base * pk
    } else {
        base / pk
    }
}

/// An integer in `[-bound, bound]`.
pub fn small_int<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    BigRational::from_integer(rng.gen_range(-bound..=bound).into())
}

pub fn padic<R: Rng>(rng: &mut R, p: u64, prec: u32) -> PadicNumber {
    PadicNumber::from_rational(p, &rational(rng, p), prec)
}

/// `Σ c_i π^i` at level `e`, each coefficient drawn like [`rational`] with
/// half of them zero.
pub fn eis<R: Rng>(rng: &mut R, p: u64, e: u32, prec: u32) -> EisElement {
    let coeffs = (0..e)
        .map(|_| {
            let q = if rng.gen_bool(0.5) { rational(rng, p) } else { BigRational::from_integer(0.into()) };
            PadicNumber::from_rational(p, &q, prec)
        })
        .collect();
    EisElement::new(p, coeffs).expect("level >= 1")
}

/// An integral element at a level drawn from `levels`.
pub fn tower_integral<R: Rng>(rng: &mut R, p: u64, levels: &[u32], prec: u32, level_cap: u32) -> TowerElement {
    let e = *levels.choose(rng).expect("levels");
    let coeffs = (0..e)
        .map(|_| {
            let c = if rng.gen_bool(0.6) { rng.gen_range(0..p as i64 * p as i64) } else { 0 };
            PadicNumber::from_int(p, c, prec)
        })
        .collect();
    TowerElement::new(EisElement::new(p, coeffs).unwrap(), level_cap).expect("level within cap")
}

/// Roots of `f` and of a perturbation `g`, both monic of degree `n`.
///
/// Each root of `g` is the matching root of `f` plus `p^k · t` with `t`
/// integral and `k` in `0..=3`, occasionally unchanged.
pub fn factored_pair<R: Rng>(
    rng: &mut R,
    p: u64,
    max_degree: usize,
    levels: &[u32],
    prec: u32,
    level_cap: u32,
) -> (Vec<TowerElement>, Vec<TowerElement>) {
    let n = rng.gen_range(1..=max_degree);
    let f: Vec<TowerElement> = (0..n).map(|_| tower_integral(rng, p, levels, prec, level_cap)).collect();
    let g = f
        .iter()
        .map(|r| {
            if rng.gen_ratio(1, 5) {
                return r.clone();
            }
            let k = rng.gen_range(0..=3u32);
            let t = tower_integral(rng, p, levels, prec, level_cap);
            let s = TowerElement::from_rational(p, &BigRational::from_integer(ipow(p, k).into()), prec, level_cap);
            let shift = crate::scalar::Scalar::try_mul(&t, &s).expect("integral product");
            crate::scalar::Scalar::try_add(r, &shift).expect("levels within cap")
        })
        .collect();
    (f, g)
}

/// A Hensel instance `(f, a0)` with integral coefficients and
/// `v(f(a0)) > 2 v(f'(a0))`, built from `f = (X - r) h + p^m c`.
pub fn hensel_instance<R: Rng>(rng: &mut R, p: u64, prec: u32) -> (Poly<PadicNumber>, PadicNumber) {
    let t = PadicNumber::zero(p, prec);
    loop {
        let r = rng.gen_range(0..ipow(p, 3));
        let hdeg = rng.gen_range(1..=3);
        let mut h: Vec<PadicNumber> = (0..hdeg).map(|_| PadicNumber::from_int(p, rng.gen_range(-20..=20), prec)).collect();
        h.push(PadicNumber::one(p, prec));
        let h = Poly::new(h, &t);
        let lin = Poly::linear_root(&PadicNumber::from_int(p, r, prec));
        let m = rng.gen_range(1..=4u32);
        let c = PadicNumber::from_int(p, rng.gen_range(-9..=9) * ipow(p, m), prec);
        let f = lin.mul(&h).unwrap().add(&Poly::constant(c)).unwrap();
        let a0 = PadicNumber::from_int(p, r + rng.gen_range(0..4) * ipow(p, m), prec);
        let (fa, dfa) = f.eval_and_derivative(&a0).unwrap();
        let (Ok(vf), Ok(vd)) = (fa.valuation(), dfa.valuation()) else { continue };
        if vd.is_infinite() {
            continue;
        }
        if vf > &vd + &vd {
            return (f, a0);
        }
    }
}

/// `a < b` in `(0, 4)` with denominators up to 40.
pub fn interval<R: Rng>(rng: &mut R) -> (Radius, Radius) {
    loop {
        let d1 = rng.gen_range(1..=40i64);
        let d2 = rng.gen_range(1..=40i64);
        let a = Radius::frac(rng.gen_range(1..4 * d1), d1);
        let b = Radius::frac(rng.gen_range(1..4 * d2), d2);
        if a < b {
            return (a, b);
        } else if b < a {
            return (b, a);
        }
    }
}

pub fn vector<R: Rng>(rng: &mut R, p: u64, n: usize, prec: u32) -> Vec<PadicNumber> {
    (0..n).map(|_| padic(rng, p, prec)).collect()
}

/// `dim` spanning vectors in `K^n`, possibly dependent.
pub fn span<R: Rng>(rng: &mut R, p: u64, n: usize, dim: usize, prec: u32) -> Vec<Vec<PadicNumber>> {
    (0..dim).map(|_| vector(rng, p, n, prec)).collect()
}

pub fn seqrep<R: Rng>(rng: &mut R, p: u64, m: usize, prec: u32) -> SeqRep<PadicNumber> {
    let len = rng.gen_range(0..=4);
    let prefix = (0..len).map(|_| vector(rng, p, m, prec)).collect();
    let tail = if rng.gen_ratio(1, 4) { vec![PadicNumber::zero(p, prec); m] } else { vector(rng, p, m, prec) };
    SeqRep::new(prefix, tail).expect("dimensions agree")
}

/// A null sequence: random prefix, zero tail.
pub fn c0_seqrep<R: Rng>(rng: &mut R, p: u64, m: usize, prec: u32) -> SeqRep<PadicNumber> {
    let len = rng.gen_range(1..=4);
    let prefix = (0..len).map(|_| vector(rng, p, m, prec)).collect();
    SeqRep::new(prefix, vec![PadicNumber::zero(p, prec); m]).expect("dimensions agree")
}

/// An `n x k` integral matrix whose reduction mod `p` has rank `k`: an
/// isometric embedding `K^k -> K^n`.
pub fn isometric_embedding<R: Rng>(rng: &mut R, p: u64, n: usize, k: usize, prec: u32) -> Vec<Vec<PadicNumber>> {
    let hi = ipow(p, 2);
    loop {
        let a: Vec<Vec<PadicNumber>> =
            (0..n).map(|_| (0..k).map(|_| PadicNumber::from_int(p, rng.gen_range(-hi..=hi), prec)).collect()).collect();
        if residue_rank(p, &a).unwrap() == k {
            return a;
        }
    }
}
