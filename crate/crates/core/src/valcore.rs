//! Exact norm values `p^(-v)` with rational exponent `v`, and exact
//! comparison of such values against rational radii.
//!
//! No floating point is used in any decision. A norm value is kept as its
//! exponent; comparing `p^(-a/b)` with `c/d` is reduced to a comparison of
//! integers after raising both sides to the `b`-th power.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Exponent and denominator bound for fractional-power comparisons.
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Natural logarithm of `|n|`, approximate. Only used to seed exact searches.
pub(crate) fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(60);
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub(crate) fn ln_rational(q: &BigRational) -> f64 {
    ln_abs(q.numer()) - ln_abs(q.denom())
}

/// The exponent of a norm: a rational or `+inf` (the norm of zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn int(n: i64) -> Self {
        Valuation::Finite(int_rat(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Valuation::Finite(rat(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(q) => Some(q),
            Valuation::Infinite => None,
        }
    }

    /// Scales a valuation by a non-negative rational (`v * k`); `inf * 0` is 0.
    pub fn scale(&self, k: &BigRational) -> Valuation {
        assert!(!k.is_negative(), "valuation scaling by a negative factor");
        match self {
            Valuation::Finite(q) => Valuation::Finite(q * k),
            Valuation::Infinite if k.is_zero() => Valuation::Finite(BigRational::zero()),
            Valuation::Infinite => Valuation::Infinite,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            Ok(Valuation::Infinite)
        } else {
            parse_rational(t).map(Valuation::Finite)
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
            (Valuation::Infinite, _) => Ordering::Greater,
            (_, Valuation::Infinite) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Valuation {
    type Output = Valuation;
    fn add(self, rhs: &Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        &self + &rhs
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => f.write_str(&fmt_rational(q)),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// What is known about a valuation when some digits are unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValBound {
    /// The valuation is known exactly (`Infinite` for a certified zero).
    Exact(Valuation),
    /// The element is indistinguishable from zero; its valuation is `>= k`.
    AtLeast(BigRational),
}

impl ValBound {
    pub fn shift(&self, by: &BigRational) -> ValBound {
        match self {
            ValBound::Exact(Valuation::Finite(q)) => ValBound::Exact(Valuation::Finite(q + by)),
            ValBound::Exact(Valuation::Infinite) => ValBound::Exact(Valuation::Infinite),
            ValBound::AtLeast(k) => ValBound::AtLeast(k + by),
        }
    }

    /// The best lower bound on the valuation.
    pub fn lower(&self) -> Valuation {
        match self {
            ValBound::Exact(v) => v.clone(),
            ValBound::AtLeast(k) => Valuation::Finite(k.clone()),
        }
    }

    /// Bound on the minimum of several valuations (the valuation of a sum
    /// of orthogonal parts, or of the max norm of a vector).
    pub fn min_of<'a>(bounds: impl IntoIterator<Item = &'a ValBound>) -> ValBound {
        let mut exact: Option<BigRational> = None;
        let mut loose: Option<BigRational> = None;
        for b in bounds {
            match b {
                ValBound::Exact(Valuation::Infinite) => {}
                ValBound::Exact(Valuation::Finite(q)) => {
                    if exact.as_ref().is_none_or(|m| q < m) {
                        exact = Some(q.clone());
                    }
                }
                ValBound::AtLeast(k) => {
                    if loose.as_ref().is_none_or(|m| k < m) {
                        loose = Some(k.clone());
                    }
                }
            }
        }
        match (exact, loose) {
            (None, None) => ValBound::Exact(Valuation::Infinite),
            (None, Some(k)) => ValBound::AtLeast(k),
            (Some(m), None) => ValBound::Exact(Valuation::Finite(m)),
            (Some(m), Some(k)) if k >= m => ValBound::Exact(Valuation::Finite(m)),
            (Some(_), Some(k)) => ValBound::AtLeast(k),
        }
    }

    /// Exact valuation or `PrecisionLoss`.
    pub fn certified(self, what: &str) -> Result<Valuation> {
        match self {
            ValBound::Exact(v) => Ok(v),
            ValBound::AtLeast(k) => Err(Error::PrecisionLoss(format!(
                "{what} is indistinguishable from zero (valuation >= {})",
                fmt_rational(&k)
            ))),
        }
    }

    /// Valuation of a vector-like quantity: entries that are zero at
    /// precision count as zero, but they must not be able to change the
    /// maximum norm of the certified entries.
    pub fn vector_norm(self, what: &str) -> Result<Valuation> {
        match self {
            ValBound::Exact(v) => Ok(v),
            ValBound::AtLeast(_) => Err(Error::PrecisionLoss(format!(
                "{what}: an entry indistinguishable from zero could change the maximum"
            ))),
        }
    }
}

/// The real number `p^(-v)`, kept symbolically.
///
/// Ordering is reversed with respect to the exponent: a larger valuation
/// means a smaller norm. Values with different primes are not comparable;
/// comparing them is a logic error and panics in debug builds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormValue {
    pub p: u64,
    pub v: Valuation,
}

impl NormValue {
    pub fn new(p: u64, v: Valuation) -> Self {
        NormValue { p, v }
    }

    pub fn zero(p: u64) -> Self {
        NormValue { p, v: Valuation::Infinite }
    }

    pub fn one(p: u64) -> Self {
        NormValue { p, v: Valuation::int(0) }
    }

    /// `p^(-q)`.
    pub fn pow_p(p: u64, q: BigRational) -> Self {
        NormValue { p, v: Valuation::Finite(q) }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_infinite()
    }

    pub fn mul(&self, other: &NormValue) -> NormValue {
        debug_assert_eq!(self.p, other.p);
        NormValue { p: self.p, v: &self.v + &other.v }
    }

    /// `self / other`; `other` must be nonzero.
    pub fn div(&self, other: &NormValue) -> Result<NormValue> {
        debug_assert_eq!(self.p, other.p);
        match (&self.v, &other.v) {
            (_, Valuation::Infinite) => Err(Error::DivisionByZero),
            (Valuation::Infinite, _) => Ok(NormValue::zero(self.p)),
            (Valuation::Finite(a), Valuation::Finite(b)) => Ok(NormValue::pow_p(self.p, a - b)),
        }
    }

    /// `self^k` for a non-negative rational `k` (`0^0 = 1`).
    pub fn pow(&self, k: &BigRational) -> NormValue {
        NormValue { p: self.p, v: self.v.scale(k) }
    }

    pub fn le_radius(&self, r: &Radius) -> Result<bool> {
        Ok(cmp_norm_radius(self, r)? != Ordering::Greater)
    }

    pub fn lt_radius(&self, r: &Radius) -> Result<bool> {
        Ok(cmp_norm_radius(self, r)? == Ordering::Less)
    }

    pub fn gt_radius(&self, r: &Radius) -> Result<bool> {
        Ok(cmp_norm_radius(self, r)? == Ordering::Greater)
    }

    /// Approximate real value, for human-readable reports only.
    pub fn approx(&self) -> f64 {
        match &self.v {
            Valuation::Infinite => 0.0,
            Valuation::Finite(q) => (-(q.to_f64().unwrap_or(f64::NAN)) * (self.p as f64).ln()).exp(),
        }
    }

    /// Parses `p^(e)` or `0` (the latter needs the prime from context).
    pub fn parse(s: &str, p_hint: Option<u64>) -> Result<Self> {
        let t = s.trim();
        if t == "0" {
            let p = p_hint.ok_or_else(|| Error::Parse("norm 0 needs a prime".into()))?;
            return Ok(NormValue::zero(p));
        }
        let (base, rest) = t
            .split_once('^')
            .ok_or_else(|| Error::Parse(format!("bad norm value {t:?}")))?;
        let p: u64 = base
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in {t:?}")))?;
        let exp = rest.trim().trim_start_matches('(').trim_end_matches(')');
        let e = parse_rational(exp)?;
        Ok(NormValue::pow_p(p, -e))
    }
}

impl Ord for NormValue {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.p, other.p, "comparing norms over different primes");
        other.v.cmp(&self.v)
    }
}

impl PartialOrd for NormValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.v {
            Valuation::Infinite => f.write_str("0"),
            Valuation::Finite(q) => write!(f, "{}^({})", self.p, fmt_rational(&q.clone().neg())),
        }
    }
}

impl Serialize for NormValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A non-negative exact rational radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Radius(BigRational);

impl Radius {
    pub fn new(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            return Err(Error::InvalidArgument(format!("negative radius {}", fmt_rational(&r))));
        }
        Ok(Radius(r))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Radius::new(rat(n, d)).expect("non-negative radius")
    }

    pub fn int(n: i64) -> Self {
        Radius::frac(n, 1)
    }

    pub fn zero() -> Self {
        Radius(BigRational::zero())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn parse(s: &str) -> Result<Self> {
        Radius::new(parse_rational(s)?)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl Serialize for Radius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for &Radius {
    type Output = Radius;
    fn add(self, rhs: &Radius) -> Radius {
        Radius(&self.0 + &rhs.0)
    }
}

impl Sub for &Radius {
    type Output = Radius;
    fn sub(self, rhs: &Radius) -> Radius {
        Radius::new(&self.0 - &rhs.0).expect("radius subtraction went negative")
    }
}

fn check_cap(x: &BigInt, what: &str) -> Result<u64> {
    match x.abs().to_u64() {
        Some(v) if v <= DEFAULT_DENOMINATOR_CAP => Ok(v),
        _ => Err(Error::DenominatorCapExceeded(format!("{what} {x}"))),
    }
}

/// Exact three-way comparison of `p^(-v)` against a rational radius.
///
/// With `v = a/b` (b > 0) and `r = c/d`, both sides are raised to the
/// `b`-th power: `p^(-a)` vs `c^b / d^b`, then cleared of denominators.
pub fn cmp_norm_radius(n: &NormValue, r: &Radius) -> Result<Ordering> {
    let q = match &n.v {
        Valuation::Infinite => {
            return Ok(if r.is_zero() { Ordering::Equal } else { Ordering::Less });
        }
        Valuation::Finite(q) => q,
    };
    if r.is_zero() {
        return Ok(Ordering::Greater);
    }
    let b = check_cap(q.denom(), "valuation denominator")?;
    let a = q.numer();
    check_cap(a, "valuation numerator")?;
    let b = b as u32;
    let c = r.value().numer();
    let d = r.value().denom();
    let pb = BigInt::from(n.p);
    let a_pos = if a.is_positive() { a.to_u32().unwrap() } else { 0 };
    let a_neg = if a.is_negative() { (-a).to_u32().unwrap() } else { 0 };
    let lhs = num_traits::pow(d.clone(), b as usize) * num_traits::pow(pb.clone(), a_neg as usize);
    let rhs = num_traits::pow(c.clone(), b as usize) * num_traits::pow(pb, a_pos as usize);
    Ok(lhs.cmp(&rhs))
}

/// `p^(-v) <= r`, decided exactly.
pub fn norm_le_radius(n: &NormValue, r: &Radius) -> Result<bool> {
    n.le_radius(r)
}

/// The smallest `q` in `(1/e)Z` with `p^(-q) <= r`, i.e. the largest norm
/// of the value group `p^((1/e)Z)` not exceeding `r`.
pub fn floor_to_value_group(p: u64, e: u32, r: &Radius) -> Result<Valuation> {
    if r.is_zero() {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if e == 0 {
        return Err(Error::InvalidArgument("ramification index must be >= 1".into()));
    }
    let fits = |k: &BigInt| -> Result<bool> {
        let q = BigRational::new(k.clone(), BigInt::from(e));
        NormValue::pow_p(p, q).le_radius(r)
    };
    // -e * log_p(r) seeds the search; exact predicates settle it.
    let est = -(e as f64) * ln_rational(r.value()) / (p as f64).ln();
    let mut k = BigInt::from(est.ceil() as i64);
    while !fits(&k)? {
        k += 1;
    }
    loop {
        let prev = &k - 1;
        if fits(&prev)? {
            k = prev;
        } else {
            break;
        }
    }
    Ok(Valuation::Finite(BigRational::new(k, BigInt::from(e))))
}
