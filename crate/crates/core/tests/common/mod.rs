//! Oracles that work directly on rationals and integers, without the
//! library's p-adic types.

#![allow(dead_code)]

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ultrametric::padic::PadicNumber;
use ultrametric::Valuation;

/// `v_p(n)` for a nonzero integer.
pub fn int_val(n: &BigInt, p: u64) -> i64 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    while n.is_multiple_of(&pb) {
        n /= &pb;
        k += 1;
    }
    k
}

/// `v_p(q)`, `None` for zero.
pub fn rat_val(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        None
    } else {
        Some(int_val(q.numer(), p) - int_val(q.denom(), p))
    }
}

/// `max_j v_p`-norm of a rational vector as a valuation, `None` for zero.
pub fn vec_val(x: &[BigRational], p: u64) -> Option<i64> {
    x.iter().filter_map(|c| rat_val(c, p)).min()
}

pub fn to_valuation(v: Option<i64>) -> Valuation {
    match v {
        Some(k) => Valuation::int(k),
        None => Valuation::Infinite,
    }
}

pub fn exact(x: &PadicNumber) -> BigRational {
    x.exact_value().expect("generated values are exact")
}

pub fn exact_vec(x: &[PadicNumber]) -> Vec<BigRational> {
    x.iter().map(exact).collect()
}

fn axpy(x: &[BigRational], l: &BigRational, y: &[BigRational]) -> Vec<BigRational> {
    x.iter().zip(y).map(|(a, b)| a - l * b).collect()
}

/// Larger valuation means smaller norm; `None` is the zero vector.
fn better(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, _) | (_, None) => None,
        (Some(a), Some(b)) => Some(a.max(b)),
    }
}

/// `min_λ |x - λ y|` by trying `λ = 0` and every `λ = x_j / y_j`.
pub fn dist1(x: &[BigRational], y: &[BigRational], p: u64) -> Option<i64> {
    let mut best = vec_val(x, p);
    for (a, b) in x.iter().zip(y) {
        if !b.is_zero() {
            best = better(best, vec_val(&axpy(x, &(a / b), y), p));
        }
    }
    best
}

/// `min_{λ,μ} |x - λ y - μ z|`: the `μ = 0` case, plus for each coordinate
/// `j` with `y_j != 0` the one-dimensional problem left after eliminating
/// `λ` through coordinate `j`.
pub fn dist2(x: &[BigRational], y: &[BigRational], z: &[BigRational], p: u64) -> Option<i64> {
    let mut best = dist1(x, y, p);
    best = better(best, dist1(x, z, p));
    for j in 0..x.len() {
        if y[j].is_zero() {
            continue;
        }
        let xs = axpy(x, &(&x[j] / &y[j]), y);
        let zs = axpy(z, &(&z[j] / &y[j]), y);
        best = better(best, dist1(&xs, &zs, p));
    }
    best
}

/// Distance from `x` to the span of at most two vectors.
pub fn dist_oracle(x: &[BigRational], span: &[Vec<BigRational>], p: u64) -> Option<i64> {
    match span {
        [] => vec_val(x, p),
        [y] => dist1(x, y, p),
        [y, z] => dist2(x, y, z, p),
        _ => panic!("oracle handles at most two spanning vectors"),
    }
}

/// `f(a) mod m` by Horner's rule on integer coefficients.
pub fn eval_mod(coeffs: &[BigInt], a: &BigInt, m: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in coeffs.iter().rev() {
        acc = (acc * a + c).mod_floor(m);
    }
    acc
}

pub fn ppow(p: u64, k: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Compares `p^(-u/v)` with a positive rational `r`, by raising both to
/// the `v`-th power.
pub fn cmp_power(p: u64, u: i64, v: u32, r: &BigRational) -> Ordering {
    let rv = num_traits::pow(r.clone(), v as usize);
    let pu = num_traits::pow(BigRational::from_integer(BigInt::from(p)), u.unsigned_abs() as usize);
    let lhs = if u >= 0 { pu.recip() } else { pu };
    lhs.cmp(&rv)
}

/// Integer value of an integral exact rational.
pub fn as_int(q: &BigRational) -> BigInt {
    assert!(q.denom().is_one(), "expected an integer, got {q}");
    q.numer().clone()
}
