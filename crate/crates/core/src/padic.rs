//! `Q_p` arithmetic with capped relative precision.
//!
//! A [`PadicNumber`] is one of four states:
//!
//! * an exact rational (values built from rational inputs stay exact under
//!   field operations, so cancellations among them are decided exactly);
//! * the exact zero;
//! * `p^val * unit` with `unit` known modulo `p^rel` and `unit` prime to `p`;
//! * a value indistinguishable from zero, known only to be `0 mod p^abs`.
//!
//! Mixed operations fall back to digit arithmetic. Additions propagate
//! absolute precision, multiplications and divisions propagate relative
//! precision, and every relative precision is capped at the value's `cap`.
//! A sum whose known digits all cancel becomes the "indistinguishable"
//! state; [`arith`] reports that as `PrecisionLoss` rather than a zero.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{precision_loss, Error, Result};
use crate::valcore::{fmt_rational, int_rat, parse_rational, NormValue, ValBound, Valuation};

pub const DEFAULT_PREC: u32 = 64;

#[derive(Clone, Debug)]
pub struct PadicNumber {
    p: u64,
    cap: u32,
    repr: Repr,
}

#[derive(Clone, Debug)]
enum Repr {
    Zero,
    Exact { q: BigRational, val: i64 },
    Approx { val: i64, unit: BigInt, rel: u32 },
    Bounded { abs: i64 },
}

/// Outcome of comparing two p-adic numbers at their common precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    Distinct,
    Indistinguishable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl std::str::FromStr for ArithOp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "add" => Ok(ArithOp::Add),
            "sub" => Ok(ArithOp::Sub),
            "mul" => Ok(ArithOp::Mul),
            "div" => Ok(ArithOp::Div),
            other => Err(Error::Parse(format!("unknown operation {other:?}"))),
        }
    }
}

pub(crate) fn ppow(p: u64, n: u32) -> BigInt {
    num_traits::pow(BigInt::from(p), n as usize)
}

/// Splits off the p-part: `n = p^k * m` with `p ∤ m`. `n` must be nonzero.
pub(crate) fn strip_p(n: &BigInt, p: u64) -> (u32, BigInt) {
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (k, m);
        }
        m = q;
        k += 1;
    }
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.mod_floor(m).extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn rational_val(q: &BigRational, p: u64) -> i64 {
    let (a, _) = strip_p(q.numer(), p);
    let (b, _) = strip_p(q.denom(), p);
    a as i64 - b as i64
}

/// Unit digits of a nonzero rational of valuation `val`, modulo `p^rel`.
fn exact_unit(q: &BigRational, p: u64, rel: u32) -> BigInt {
    let (_, num) = strip_p(q.numer(), p);
    let (_, den) = strip_p(q.denom(), p);
    let m = ppow(p, rel);
    let inv = mod_inverse(&den, &m).expect("p-free denominator is invertible");
    (num * inv).mod_floor(&m)
}

impl PadicNumber {
    /// Exact embedding of a rational; digits are produced up to `prec`
    /// relative digits whenever they are needed.
    pub fn from_rational(p: u64, q: &BigRational, prec: u32) -> Self {
        assert!(prec >= 1, "precision must be at least 1");
        assert!(p >= 2, "p must be prime");
        if q.is_zero() {
            return PadicNumber { p, cap: prec, repr: Repr::Zero };
        }
        let val = rational_val(q, p);
        PadicNumber { p, cap: prec, repr: Repr::Exact { q: q.clone(), val } }
    }

    pub fn from_int(p: u64, n: i64, prec: u32) -> Self {
        PadicNumber::from_rational(p, &int_rat(n), prec)
    }

    pub fn zero(p: u64, prec: u32) -> Self {
        PadicNumber { p, cap: prec, repr: Repr::Zero }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        PadicNumber::from_int(p, 1, prec)
    }

    /// `p^val * unit` with `unit` known modulo `p^prec` (an inexact value).
    /// Factors of `p` in `unit` are moved into the valuation.
    pub fn from_digits(p: u64, val: i64, unit: &BigInt, prec: u32) -> Self {
        assert!(prec >= 1, "precision must be at least 1");
        let m = ppow(p, prec);
        let u = unit.mod_floor(&m);
        if u.is_zero() {
            return PadicNumber { p, cap: prec, repr: Repr::Bounded { abs: val + prec as i64 } };
        }
        let (k, u) = strip_p(&u, p);
        let rel = prec - k;
        PadicNumber { p, cap: prec, repr: Repr::Approx { val: val + k as i64, unit: u, rel } }
    }

    /// A value known only to be `0 mod p^abs`.
    pub fn zero_at(p: u64, abs: i64, prec: u32) -> Self {
        PadicNumber { p, cap: prec, repr: Repr::Bounded { abs } }
    }

    fn with_repr(&self, cap: u32, repr: Repr) -> Self {
        PadicNumber { p: self.p, cap, repr }
    }

    fn from_exact(p: u64, cap: u32, q: BigRational) -> Self {
        PadicNumber::from_rational(p, &q, cap)
    }

    fn make_approx(p: u64, cap: u32, val: i64, unit: BigInt, rel: u32) -> Self {
        let rel = rel.min(cap);
        let unit = unit.mod_floor(&ppow(p, rel));
        debug_assert!(!(&unit % p).is_zero());
        PadicNumber { p, cap, repr: Repr::Approx { val, unit, rel } }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// The relative precision cap `N`.
    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact { .. } | Repr::Zero)
    }

    pub fn exact_value(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Zero => Some(BigRational::zero()),
            Repr::Exact { q, .. } => Some(q.clone()),
            _ => None,
        }
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True when no known digit is nonzero (exact zero or indistinguishable).
    pub fn is_zero_at_precision(&self) -> bool {
        matches!(self.repr, Repr::Zero | Repr::Bounded { .. })
    }

    pub fn val_bound(&self) -> ValBound {
        match &self.repr {
            Repr::Zero => ValBound::Exact(Valuation::Infinite),
            Repr::Exact { val, .. } | Repr::Approx { val, .. } => ValBound::Exact(Valuation::int(*val)),
            Repr::Bounded { abs } => ValBound::AtLeast(int_rat(*abs)),
        }
    }

    /// Exact valuation; `PrecisionLoss` if the value is indistinguishable from zero.
    pub fn valuation(&self) -> Result<Valuation> {
        self.val_bound().certified("p-adic value")
    }

    /// Integer valuation of a nonzero value, if certified.
    pub fn val_int(&self) -> Option<i64> {
        match &self.repr {
            Repr::Exact { val, .. } | Repr::Approx { val, .. } => Some(*val),
            _ => None,
        }
    }

    pub fn norm(&self) -> Result<NormValue> {
        Ok(NormValue::new(self.p, self.valuation()?))
    }

    /// Relative precision: the number of certified unit digits.
    pub fn precision(&self) -> u32 {
        match &self.repr {
            Repr::Approx { rel, .. } => *rel,
            _ => self.cap,
        }
    }

    /// Absolute precision (`None` for exact values).
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero | Repr::Exact { .. } => None,
            Repr::Approx { val, rel, .. } => Some(val + *rel as i64),
            Repr::Bounded { abs } => Some(*abs),
        }
    }

    /// Unit digits modulo `p^precision()`; `None` for (near-)zero values.
    pub fn unit(&self) -> Option<BigInt> {
        match &self.repr {
            Repr::Exact { q, .. } => Some(exact_unit(q, self.p, self.cap)),
            Repr::Approx { unit, .. } => Some(unit.clone()),
            _ => None,
        }
    }

    /// `(val, unit mod p^(abs - val))`, everything below absolute precision
    /// `abs`; `None` when the value contributes nothing there.
    fn view(&self, abs: i64) -> Option<(i64, BigInt)> {
        match &self.repr {
            Repr::Zero | Repr::Bounded { .. } => None,
            Repr::Exact { q, val } => {
                if *val >= abs {
                    return None;
                }
                Some((*val, exact_unit(q, self.p, (abs - val) as u32)))
            }
            Repr::Approx { val, unit, rel } => {
                if *val >= abs {
                    return None;
                }
                let r = (*rel as i64).min(abs - val) as u32;
                Some((*val, unit.mod_floor(&ppow(self.p, r))))
            }
        }
    }

    /// The p-adic digits at absolute positions `lo..hi`.
    pub fn digits(&self, lo: i64, hi: i64) -> Result<Vec<u64>> {
        if let Some(a) = self.abs_precision() {
            if hi > a {
                return Err(precision_loss(format!("digit {} requested, known below {a}", hi - 1)));
            }
        }
        let mut out = vec![0u64; (hi - lo).max(0) as usize];
        if let Some((val, unit)) = self.view(hi) {
            let pb = BigInt::from(self.p);
            let mut u = unit;
            let mut pos = val;
            while pos < hi && !u.is_zero() {
                let (q, r) = u.div_rem(&pb);
                if pos >= lo {
                    out[(pos - lo) as usize] = r.to_u64().unwrap();
                }
                u = q;
                pos += 1;
            }
        }
        Ok(out)
    }

    fn check_prime(&self, other: &PadicNumber) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    fn add_impl(&self, other: &PadicNumber) -> PadicNumber {
        let p = self.p;
        let cap = self.cap.min(other.cap);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) => return other.with_repr(cap, other.repr.clone()),
            (_, Repr::Zero) => return self.with_repr(cap, self.repr.clone()),
            (Repr::Exact { q: a, .. }, Repr::Exact { q: b, .. }) => {
                return PadicNumber::from_exact(p, cap, a + b);
            }
            _ => {}
        }
        let abs = match (self.abs_precision(), other.abs_precision()) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("exact pairs handled above"),
        };
        match (self.view(abs), other.view(abs)) {
            (None, None) => PadicNumber::zero_at(p, abs, cap),
            (Some((v, u)), None) | (None, Some((v, u))) => {
                PadicNumber::make_approx(p, cap, v, u, (abs - v) as u32)
            }
            (Some((v1, u1)), Some((v2, u2))) => {
                let m = v1.min(v2);
                let modulus = ppow(p, (abs - m) as u32);
                let s = (u1 * ppow(p, (v1 - m) as u32) + u2 * ppow(p, (v2 - m) as u32))
                    .mod_floor(&modulus);
                if s.is_zero() {
                    return PadicNumber::zero_at(p, abs, cap);
                }
                let (k, u) = strip_p(&s, p);
                let val = m + k as i64;
                PadicNumber::make_approx(p, cap, val, u, (abs - val) as u32)
            }
        }
    }

    fn mul_impl(&self, other: &PadicNumber) -> PadicNumber {
        let p = self.p;
        let cap = self.cap.min(other.cap);
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => PadicNumber::zero(p, cap),
            (Repr::Exact { q: a, .. }, Repr::Exact { q: b, .. }) => PadicNumber::from_exact(p, cap, a * b),
            (Repr::Bounded { abs: k }, Repr::Bounded { abs: j }) => PadicNumber::zero_at(p, k + j, cap),
            (Repr::Bounded { abs: k }, x) | (x, Repr::Bounded { abs: k }) => {
                let v = match x {
                    Repr::Exact { val, .. } | Repr::Approx { val, .. } => *val,
                    _ => unreachable!(),
                };
                PadicNumber::zero_at(p, k + v, cap)
            }
            (Repr::Approx { val: v1, unit: u1, rel: r1 }, Repr::Approx { val: v2, unit: u2, rel: r2 }) => {
                PadicNumber::make_approx(p, cap, v1 + v2, u1 * u2, *r1.min(r2))
            }
            (Repr::Exact { q, val: v1 }, Repr::Approx { val: v2, unit: u2, rel: r2 })
            | (Repr::Approx { val: v2, unit: u2, rel: r2 }, Repr::Exact { q, val: v1 }) => {
                let u1 = exact_unit(q, p, *r2);
                PadicNumber::make_approx(p, cap, v1 + v2, u1 * u2, *r2)
            }
        }
    }

    fn div_impl(&self, other: &PadicNumber) -> Result<PadicNumber> {
        let p = self.p;
        let cap = self.cap.min(other.cap);
        let inv = |u: &BigInt, rel: u32| {
            mod_inverse(u, &ppow(p, rel)).expect("units are invertible")
        };
        Ok(match (&self.repr, &other.repr) {
            (_, Repr::Zero) => return Err(Error::DivisionByZero),
            (_, Repr::Bounded { .. }) => {
                return Err(precision_loss("divisor is indistinguishable from zero"))
            }
            (Repr::Zero, _) => PadicNumber::zero(p, cap),
            (Repr::Exact { q: a, .. }, Repr::Exact { q: b, .. }) => PadicNumber::from_exact(p, cap, a / b),
            (Repr::Bounded { abs }, Repr::Exact { val, .. } | Repr::Approx { val, .. }) => {
                PadicNumber::zero_at(p, abs - val, cap)
            }
            (Repr::Approx { val: v1, unit: u1, rel: r1 }, Repr::Approx { val: v2, unit: u2, rel: r2 }) => {
                let r = *r1.min(r2);
                PadicNumber::make_approx(p, cap, v1 - v2, u1 * inv(u2, r), r)
            }
            (Repr::Exact { q, val: v1 }, Repr::Approx { val: v2, unit: u2, rel: r2 }) => {
                let u1 = exact_unit(q, p, *r2);
                PadicNumber::make_approx(p, cap, v1 - v2, u1 * inv(u2, *r2), *r2)
            }
            (Repr::Approx { val: v1, unit: u1, rel: r1 }, Repr::Exact { q, val: v2 }) => {
                let u2 = exact_unit(q, p, *r1);
                PadicNumber::make_approx(p, cap, v1 - v2, u1 * inv(&u2, *r1), *r1)
            }
        })
    }

    pub fn try_add(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        Ok(self.add_impl(other))
    }

    pub fn try_sub(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        Ok(self.add_impl(&other.neg_impl()))
    }

    pub fn try_mul(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        Ok(self.mul_impl(other))
    }

    pub fn try_div(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_prime(other)?;
        self.div_impl(other)
    }

    fn neg_impl(&self) -> PadicNumber {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Exact { q, val } => Repr::Exact { q: -q, val: *val },
            Repr::Approx { val, unit, rel } => {
                let m = ppow(self.p, *rel);
                Repr::Approx { val: *val, unit: (m - unit).mod_floor(&ppow(self.p, *rel)), rel: *rel }
            }
            Repr::Bounded { abs } => Repr::Bounded { abs: *abs },
        };
        self.with_repr(self.cap, repr)
    }

    /// Multiplies by `p^k`.
    pub fn shift(&self, k: i64) -> PadicNumber {
        let repr = match &self.repr {
            Repr::Zero => Repr::Zero,
            Repr::Exact { q, val } => {
                let f = if k >= 0 {
                    BigRational::from_integer(ppow(self.p, k as u32))
                } else {
                    BigRational::new(BigInt::one(), ppow(self.p, (-k) as u32))
                };
                Repr::Exact { q: q * f, val: val + k }
            }
            Repr::Approx { val, unit, rel } => Repr::Approx { val: val + k, unit: unit.clone(), rel: *rel },
            Repr::Bounded { abs } => Repr::Bounded { abs: abs + k },
        };
        self.with_repr(self.cap, repr)
    }

    pub fn pow(&self, n: u32) -> PadicNumber {
        let mut acc = PadicNumber::one(self.p, self.cap);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_impl(&base);
            }
            base = base.mul_impl(&base);
            e >>= 1;
        }
        acc
    }

    /// Three-valued equality at the common guaranteed precision.
    pub fn compare(&self, other: &PadicNumber) -> Comparison {
        if self.p != other.p {
            return Comparison::Distinct;
        }
        match self.add_impl(&other.neg_impl()).repr {
            Repr::Zero => Comparison::Equal,
            Repr::Bounded { .. } => Comparison::Indistinguishable,
            _ => Comparison::Distinct,
        }
    }

    /// Not distinguishable from `other` at the common precision.
    pub fn agrees_with(&self, other: &PadicNumber) -> bool {
        self.compare(other) != Comparison::Distinct
    }

    /// Forgets digits beyond `rel` relative digits (exact values become
    /// digit expansions).
    pub fn truncate(&self, rel: u32) -> PadicNumber {
        assert!(rel >= 1);
        match &self.repr {
            Repr::Zero | Repr::Bounded { .. } => self.clone(),
            Repr::Exact { q, val } => {
                let r = rel.min(self.cap);
                PadicNumber::make_approx(self.p, self.cap, *val, exact_unit(q, self.p, r), r)
            }
            Repr::Approx { val, unit, rel: r } => {
                PadicNumber::make_approx(self.p, self.cap, *val, unit.clone(), rel.min(*r))
            }
        }
    }

    /// Treats the known digits as an exact value (pads with zero digits).
    pub fn to_exact(&self) -> PadicNumber {
        match &self.repr {
            Repr::Zero | Repr::Exact { .. } => self.clone(),
            Repr::Bounded { .. } => PadicNumber::zero(self.p, self.cap),
            Repr::Approx { val, unit, .. } => {
                let q = BigRational::from_integer(unit.clone());
                PadicNumber::from_exact(self.p, self.cap, q).shift(*val)
            }
        }
    }

    /// Residue class modulo `p` of an integral value.
    pub fn residue(&self) -> Result<u64> {
        match self.val_bound() {
            ValBound::Exact(Valuation::Infinite) => Ok(0),
            ValBound::Exact(Valuation::Finite(v)) if v.is_negative() => {
                Err(Error::PreconditionFailed(format!("{self} is not integral")))
            }
            ValBound::Exact(Valuation::Finite(v)) if v.is_positive() => Ok(0),
            ValBound::Exact(_) => Ok((self.unit().unwrap() % self.p).to_u64().unwrap()),
            ValBound::AtLeast(k) if k.is_positive() => Ok(0),
            ValBound::AtLeast(_) => Err(precision_loss("residue of a value known only mod 1")),
        }
    }

    /// Integer representative in `[0, p^k)` of an integral value mod `p^k`.
    pub fn residue_mod(&self, k: u32) -> Result<BigInt> {
        if let Some(v) = self.val_int() {
            if v < 0 {
                return Err(Error::PreconditionFailed(format!("{self} is not integral")));
            }
        }
        if let Some(a) = self.abs_precision() {
            if a < k as i64 {
                return Err(precision_loss(format!("{self} is known only modulo {}^{a}", self.p)));
            }
        }
        Ok(match self.view(k as i64) {
            None => BigInt::zero(),
            Some((val, unit)) => unit * ppow(self.p, val as u32),
        })
    }

    /// Parses a rational literal `a/b`, a digit literal
    /// `p^v * (d0 + d1*p + d2*p^2) [prec N]`, or `O(p^k)`.
    pub fn parse(s: &str, p: u64, prec: u32) -> Result<PadicNumber> {
        let t = s.trim();
        if let Some(inner) = t.strip_prefix("O(").and_then(|r| r.strip_suffix(')')) {
            let (base, k) = split_power(inner)?;
            check_base(base, p)?;
            return Ok(PadicNumber::zero_at(p, k, prec));
        }
        if let Some((body, tail)) = t.split_once('[') {
            let n: u32 = tail
                .trim()
                .trim_end_matches(']')
                .trim()
                .strip_prefix("prec")
                .ok_or_else(|| Error::Parse(format!("expected [prec N] in {t:?}")))?
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad precision in {t:?}")))?;
            let (head, digits) = body
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("expected p^v * (...) in {t:?}")))?;
            let (base, val) = split_power(head.trim())?;
            check_base(base, p)?;
            let digits = digits.trim().trim_start_matches('(').trim_end_matches(')');
            let mut unit = BigInt::zero();
            for term in digits.split('+') {
                let term = term.trim();
                let (d, pos) = match term.split_once('*') {
                    None => (term, 0u32),
                    Some((d, pw)) => {
                        let pw = pw.trim();
                        let pos = if pw == "p" || pw == p.to_string() {
                            1
                        } else {
                            let (b, k) = split_power(pw)?;
                            check_base(b, p)?;
                            k as u32
                        };
                        (d.trim(), pos)
                    }
                };
                let d: BigInt = d.parse().map_err(|_| Error::Parse(format!("bad digit {d:?}")))?;
                unit += d * ppow(p, pos);
            }
            return Ok(PadicNumber::from_digits(p, val, &unit, n));
        }
        Ok(PadicNumber::from_rational(p, &parse_rational(t)?, prec))
    }
}

fn split_power(s: &str) -> Result<(&str, i64)> {
    let (b, k) = s
        .split_once('^')
        .ok_or_else(|| Error::Parse(format!("expected base^exponent, got {s:?}")))?;
    let k = k.trim().trim_start_matches('(').trim_end_matches(')');
    let k: i64 = k.parse().map_err(|_| Error::Parse(format!("bad exponent {k:?}")))?;
    Ok((b.trim(), k))
}

fn check_base(b: &str, p: u64) -> Result<()> {
    if b == "p" || b == p.to_string() {
        Ok(())
    } else {
        Err(Error::Parse(format!("base {b:?} does not match prime {p}")))
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match &self.repr {
            Repr::Zero => f.write_str("0"),
            Repr::Exact { q, .. } => f.write_str(&fmt_rational(q)),
            Repr::Bounded { abs } => write!(f, "O({p}^{abs})"),
            Repr::Approx { val, unit, rel } => {
                let pb = BigInt::from(p);
                let mut terms = Vec::new();
                let mut u = unit.clone();
                let mut i = 0u32;
                while !u.is_zero() {
                    let (q, r) = u.div_rem(&pb);
                    if !r.is_zero() {
                        terms.push(match i {
                            0 => r.to_string(),
                            1 => format!("{r}*{p}"),
                            _ => format!("{r}*{p}^{i}"),
                        });
                    }
                    u = q;
                    i += 1;
                }
                write!(f, "{p}^{val} * ({}) [prec {rel}]", terms.join(" + "))
            }
        }
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;
    fn neg(self) -> PadicNumber {
        self.neg_impl()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&PadicNumber> for &PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: &PadicNumber) -> PadicNumber {
                assert_eq!(self.p, rhs.p, "prime mismatch");
                self.$imp(rhs)
            }
        }
        impl $tr for PadicNumber {
            type Output = PadicNumber;
            fn $m(self, rhs: PadicNumber) -> PadicNumber {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, add_impl);
binop!(Mul, mul, mul_impl);

impl Sub<&PadicNumber> for &PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: &PadicNumber) -> PadicNumber {
        assert_eq!(self.p, rhs.p, "prime mismatch");
        self.add_impl(&rhs.neg_impl())
    }
}

impl Sub for PadicNumber {
    type Output = PadicNumber;
    fn sub(self, rhs: PadicNumber) -> PadicNumber {
        &self - &rhs
    }
}

/// Strict arithmetic: a sum that cancels every known digit is reported as
/// `PrecisionLoss` instead of an indistinguishable-from-zero value.
pub fn arith(op: ArithOp, a: &PadicNumber, b: &PadicNumber) -> Result<PadicNumber> {
    let r = match op {
        ArithOp::Add => a.try_add(b)?,
        ArithOp::Sub => a.try_sub(b)?,
        ArithOp::Mul => a.try_mul(b)?,
        ArithOp::Div => a.try_div(b)?,
    };
    if let Repr::Bounded { abs } = r.repr {
        return Err(precision_loss(format!("all known digits cancelled (result is O({}^{abs}))", r.p)));
    }
    Ok(r)
}

/// Convenience constructor bundling a prime and a precision cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Qp {
    pub p: u64,
    pub prec: u32,
}

impl Qp {
    pub fn new(p: u64, prec: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        if prec == 0 {
            return Err(Error::InvalidArgument("precision must be at least 1".into()));
        }
        Ok(Qp { p, prec })
    }

    pub fn rat(&self, n: i64, d: i64) -> PadicNumber {
        PadicNumber::from_rational(self.p, &BigRational::new(n.into(), d.into()), self.prec)
    }

    pub fn int(&self, n: i64) -> PadicNumber {
        PadicNumber::from_int(self.p, n, self.prec)
    }

    pub fn from_rational(&self, q: &BigRational) -> PadicNumber {
        PadicNumber::from_rational(self.p, q, self.prec)
    }

    pub fn zero(&self) -> PadicNumber {
        PadicNumber::zero(self.p, self.prec)
    }

    pub fn one(&self) -> PadicNumber {
        PadicNumber::one(self.p, self.prec)
    }

    pub fn parse(&self, s: &str) -> Result<PadicNumber> {
        PadicNumber::parse(s, self.p, self.prec)
    }
}
