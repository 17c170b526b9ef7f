//! The pure Eisenstein tower `Q_p(π)`, `π^e = p`, and norm-density witnesses.
//!
//! Elements at level `e` are `Σ a_i π^i` for `i < e` with `a_i ∈ Q_p`.
//! Because `{π^i}` is an orthogonal basis, `v(Σ a_i π^i) = min(v(a_i) + i/e)`.
//! A [`TowerElement`] lifts operands to the lcm of their levels before each
//! operation, which models a finitely presented piece of the densely valued
//! field `∪_e Q_p(p^{1/e})`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{precision_loss, Error, Result};
use crate::padic::{ArithOp, Comparison, PadicNumber};
use crate::scalar::Scalar;
use crate::text::{split_terms, strip_parens};
use crate::valcore::{cmp_norm_radius, fmt_rational, NormValue, Radius, ValBound, Valuation};

pub const DEFAULT_LEVEL_CAP: u32 = 1024;

#[derive(Clone, Debug)]
pub struct EisElement {
    p: u64,
    prec: u32,
    coeffs: Vec<PadicNumber>,
}

impl EisElement {
    pub fn new(p: u64, coeffs: Vec<PadicNumber>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("ramification index must be >= 1".into()));
        }
        for c in &coeffs {
            if c.prime() != p {
                return Err(Error::PrimeMismatch(p, c.prime()));
            }
        }
        let prec = coeffs.iter().map(|c| c.cap()).min().unwrap();
        Ok(EisElement { p, prec, coeffs })
    }

    pub fn zero(p: u64, e: u32, prec: u32) -> Self {
        EisElement { p, prec, coeffs: vec![PadicNumber::zero(p, prec); e as usize] }
    }

    pub fn from_padic(a: &PadicNumber, e: u32) -> Self {
        let mut z = EisElement::zero(a.prime(), e, a.cap());
        z.coeffs[0] = a.clone();
        z
    }

    pub fn from_rational(p: u64, q: &BigRational, e: u32, prec: u32) -> Self {
        EisElement::from_padic(&PadicNumber::from_rational(p, q, prec), e)
    }

    /// `π^u` at level `e` for any integer `u`: `p^(u div e) π^(u mod e)`.
    pub fn monomial(p: u64, e: u32, u: i64, prec: u32) -> Self {
        let (q, r) = u.div_mod_floor(&(e as i64));
        let mut z = EisElement::zero(p, e, prec);
        z.coeffs[r as usize] = PadicNumber::one(p, prec).shift(q);
        z
    }

    pub fn pi(p: u64, e: u32, prec: u32) -> Self {
        EisElement::monomial(p, e, 1, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn level(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    pub fn val_bound(&self) -> ValBound {
        let e = self.level() as i64;
        let bounds: Vec<ValBound> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.val_bound().shift(&BigRational::new(BigInt::from(i), BigInt::from(e))))
            .collect();
        ValBound::min_of(&bounds)
    }

    pub fn valuation(&self) -> Result<Valuation> {
        self.val_bound().certified("Eisenstein element")
    }

    pub fn norm(&self) -> Result<NormValue> {
        Ok(NormValue::new(self.p, self.valuation()?))
    }

    fn same_level(&self, other: &EisElement) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        if self.level() != other.level() {
            return Err(Error::LevelMismatch(self.level(), other.level()));
        }
        Ok(())
    }

    fn is_structural_zero(c: &PadicNumber) -> bool {
        c.is_exact_zero()
    }

    pub fn add(&self, other: &EisElement) -> Result<EisElement> {
        self.same_level(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        EisElement::new(self.p, coeffs)
    }

    pub fn sub(&self, other: &EisElement) -> Result<EisElement> {
        self.same_level(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        EisElement::new(self.p, coeffs)
    }

    pub fn neg(&self) -> EisElement {
        EisElement { p: self.p, prec: self.prec, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Product in `Q_p[X]/(X^e - p)`; terms of degree `k >= e` fold into
    /// `p * π^(k-e)`.
    pub fn mul(&self, other: &EisElement) -> Result<EisElement> {
        self.same_level(other)?;
        let e = self.coeffs.len();
        let prec = self.prec.min(other.prec);
        let mut out = vec![PadicNumber::zero(self.p, prec); e];
        let lhs: Vec<(usize, &PadicNumber)> =
            self.coeffs.iter().enumerate().filter(|(_, c)| !Self::is_structural_zero(c)).collect();
        let rhs: Vec<(usize, &PadicNumber)> =
            other.coeffs.iter().enumerate().filter(|(_, c)| !Self::is_structural_zero(c)).collect();
        for &(i, a) in &lhs {
            for &(j, b) in &rhs {
                let t = a * b;
                let k = i + j;
                if k >= e {
                    out[k - e] = &out[k - e] + &t.shift(1);
                } else {
                    out[k] = &out[k] + &t;
                }
            }
        }
        EisElement::new(self.p, out)
    }

    pub fn scale(&self, c: &PadicNumber) -> EisElement {
        EisElement {
            p: self.p,
            prec: self.prec.min(c.cap()),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Result<EisElement> {
        let mut acc = EisElement::from_padic(&PadicNumber::one(self.p, self.prec), self.level());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Quotient `self / other`.
    ///
    /// A monomial divisor is inverted directly; otherwise the linear system
    /// `other * x = self` over `Q_p` is solved by elimination with
    /// largest-norm pivots, which keeps exact inputs exact.
    pub fn div(&self, other: &EisElement) -> Result<EisElement> {
        self.same_level(other)?;
        let e = self.coeffs.len();
        let nonzero: Vec<usize> = (0..e).filter(|&i| !other.coeffs[i].is_exact_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if nonzero.len() == 1 {
            let i = nonzero[0];
            let a = &other.coeffs[i];
            if a.is_zero_at_precision() {
                return Err(precision_loss("divisor is indistinguishable from zero"));
            }
            let inv = PadicNumber::one(self.p, self.prec).try_div(a)?;
            let mono = EisElement::monomial(self.p, e as u32, -(i as i64), self.prec);
            return self.mul(&mono.scale(&inv));
        }
        // Column j of the matrix is other * π^j.
        let mut cols = Vec::with_capacity(e);
        for j in 0..e {
            cols.push(other.mul(&EisElement::monomial(self.p, e as u32, j as i64, self.prec))?);
        }
        let mut m: Vec<Vec<PadicNumber>> =
            (0..e).map(|r| (0..e).map(|c| cols[c].coeffs[r].clone()).collect()).collect();
        let mut rhs: Vec<PadicNumber> = self.coeffs.clone();
        let mut order: Vec<usize> = Vec::with_capacity(e);
        let mut used = vec![false; e];
        for col in 0..e {
            let mut best: Option<(usize, Valuation)> = None;
            for (r, row) in m.iter().enumerate() {
                if used[r] {
                    continue;
                }
                if let Some(v) = row[col].val_int() {
                    let v = Valuation::int(v);
                    if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                        best = Some((r, v));
                    }
                }
            }
            let (pr, _) = best.ok_or_else(|| precision_loss("singular pivot while dividing"))?;
            used[pr] = true;
            order.push(pr);
            let piv = m[pr][col].clone();
            for r in 0..e {
                if r == pr || m[r][col].is_exact_zero() {
                    continue;
                }
                let f = m[r][col].try_div(&piv)?;
                for c in col..e {
                    let t = &m[pr][c] * &f;
                    m[r][c] = &m[r][c] - &t;
                }
                let t = &rhs[pr] * &f;
                rhs[r] = &rhs[r] - &t;
            }
        }
        let mut x = Vec::with_capacity(e);
        for (col, &r) in order.iter().enumerate() {
            x.push(rhs[r].try_div(&m[r][col])?);
        }
        EisElement::new(self.p, x)
    }

    pub fn arith(&self, op: ArithOp, other: &EisElement) -> Result<EisElement> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            ArithOp::Mul => self.mul(other),
            ArithOp::Div => self.div(other),
        }
    }

    /// Embeds into level `big` via `π_e ↦ π_big^(big/e)`.
    pub fn lift(&self, big: u32, level_cap: u32) -> Result<EisElement> {
        let e = self.level();
        if big > level_cap {
            return Err(Error::LevelCapExceeded { level: big as u64, cap: level_cap });
        }
        if big == 0 || big % e != 0 {
            return Err(Error::InvalidArgument(format!("level {big} is not a multiple of {e}")));
        }
        let step = (big / e) as usize;
        let mut z = EisElement::zero(self.p, big, self.prec);
        for (i, c) in self.coeffs.iter().enumerate() {
            z.coeffs[i * step] = c.clone();
        }
        Ok(z)
    }

    pub fn compare(&self, other: &EisElement) -> Comparison {
        if self.p != other.p || self.level() != other.level() {
            return Comparison::Distinct;
        }
        let mut out = Comparison::Equal;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            match a.compare(b) {
                Comparison::Distinct => return Comparison::Distinct,
                Comparison::Indistinguishable => out = Comparison::Indistinguishable,
                Comparison::Equal => {}
            }
        }
        out
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_at_precision())
    }

    pub fn residue(&self) -> Result<u64> {
        match self.val_bound().lower() {
            Valuation::Finite(v) if v.is_negative() => {
                Err(Error::PreconditionFailed(format!("{self} is not integral")))
            }
            _ => self.coeffs[0].residue(),
        }
    }

    /// Parses `a0 + a1*pi + a2*pi^2 @ level e`; coefficients are p-adic
    /// literals, parenthesized when they contain operators.
    pub fn parse(s: &str, p: u64, prec: u32) -> Result<EisElement> {
        let (body, lvl) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::Parse(format!("expected '@ level e' in {s:?}")))?;
        let e: u32 = lvl
            .trim()
            .strip_prefix("level")
            .ok_or_else(|| Error::Parse(format!("expected '@ level e' in {s:?}")))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad level in {s:?}")))?;
        if e == 0 {
            return Err(Error::Parse("level must be >= 1".into()));
        }
        let mut z = EisElement::zero(p, e, prec);
        for (neg, term) in split_terms(body)? {
            let (coef, power) = split_pi_power(&term)?;
            let c = match coef {
                None => PadicNumber::one(p, prec),
                Some(c) => PadicNumber::parse(strip_parens(&c), p, prec)?,
            };
            let c = if neg { -c } else { c };
            let mono = EisElement::monomial(p, e, power as i64, prec).scale(&c);
            z = z.add(&mono)?;
        }
        Ok(z)
    }
}

fn split_pi_power(term: &str) -> Result<(Option<String>, u32)> {
    let t = term.trim();
    let parse_pow = |rest: &str| -> Result<u32> {
        if rest.is_empty() {
            return Ok(1);
        }
        rest.strip_prefix('^')
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad power of pi in {t:?}")))
    };
    if let Some(rest) = t.strip_prefix("pi") {
        return Ok((None, parse_pow(rest.trim())?));
    }
    if let Some(idx) = t.rfind("*pi") {
        let rest = t[idx + 3..].trim();
        if rest.is_empty() || rest.starts_with('^') {
            return Ok((Some(t[..idx].to_string()), parse_pow(rest)?));
        }
    }
    Ok((Some(t.to_string()), 0))
}

impl fmt::Display for EisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            let cs = c.to_string();
            let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
            terms.push(match i {
                0 => cs,
                1 => format!("{cs}*pi"),
                _ => format!("{cs}*pi^{i}"),
            });
        }
        let body = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{body} @ level {}", self.level())
    }
}

fn lcm(a: u32, b: u32) -> u64 {
    (a as u64).lcm(&(b as u64))
}

/// An element of the tower, lifted on demand to a common level.
#[derive(Clone, Debug)]
pub struct TowerElement {
    inner: EisElement,
    level_cap: u32,
}

impl TowerElement {
    pub fn new(inner: EisElement, level_cap: u32) -> Result<Self> {
        if inner.level() > level_cap {
            return Err(Error::LevelCapExceeded { level: inner.level() as u64, cap: level_cap });
        }
        Ok(TowerElement { inner, level_cap })
    }

    pub fn from_rational(p: u64, q: &BigRational, prec: u32, level_cap: u32) -> Self {
        TowerElement { inner: EisElement::from_rational(p, q, 1, prec), level_cap }
    }

    /// `π_e^u`, the element `p^(u/e)`.
    pub fn monomial(p: u64, e: u32, u: i64, prec: u32, level_cap: u32) -> Result<Self> {
        TowerElement::new(EisElement::monomial(p, e, u, prec), level_cap)
    }

    pub fn inner(&self) -> &EisElement {
        &self.inner
    }

    pub fn level(&self) -> u32 {
        self.inner.level()
    }

    pub fn level_cap(&self) -> u32 {
        self.level_cap
    }

    pub fn lift_to(&self, level: u32) -> Result<TowerElement> {
        Ok(TowerElement { inner: self.inner.lift(level, self.level_cap)?, level_cap: self.level_cap })
    }

    /// Both operands at the lcm of their levels.
    pub fn common(&self, other: &TowerElement) -> Result<(EisElement, EisElement, u32)> {
        if self.inner.p != other.inner.p {
            return Err(Error::PrimeMismatch(self.inner.p, other.inner.p));
        }
        let cap = self.level_cap.min(other.level_cap);
        let l = lcm(self.level(), other.level());
        if l > cap as u64 {
            return Err(Error::LevelCapExceeded { level: l, cap });
        }
        let l = l as u32;
        Ok((self.inner.lift(l, cap)?, other.inner.lift(l, cap)?, cap))
    }

    pub fn arith(&self, op: ArithOp, other: &TowerElement) -> Result<TowerElement> {
        let (a, b, cap) = self.common(other)?;
        Ok(TowerElement { inner: a.arith(op, &b)?, level_cap: cap })
    }

    pub fn pow(&self, n: u32) -> Result<TowerElement> {
        Ok(TowerElement { inner: self.inner.pow(n)?, level_cap: self.level_cap })
    }

    pub fn valuation(&self) -> Result<Valuation> {
        self.inner.valuation()
    }

    pub fn compare(&self, other: &TowerElement) -> Result<Comparison> {
        let (a, b, _) = self.common(other)?;
        Ok(a.compare(&b))
    }

    /// Re-expresses the element at the smallest level that holds it.
    pub fn reduce_level(&self) -> TowerElement {
        let e = self.level();
        let mut g = e;
        for (i, c) in self.inner.coeffs.iter().enumerate() {
            if !c.is_exact_zero() {
                g = g.gcd(&(i as u32));
            }
        }
        if g <= 1 {
            return self.clone();
        }
        let small = e / g;
        let coeffs = (0..small as usize).map(|i| self.inner.coeffs[i * g as usize].clone()).collect();
        TowerElement { inner: EisElement::new(self.inner.p, coeffs).unwrap(), level_cap: self.level_cap }
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.inner.fmt(f)
    }
}

impl Scalar for TowerElement {
    fn prime(&self) -> u64 {
        self.inner.p
    }
    fn zero_like(&self) -> Self {
        TowerElement { inner: EisElement::zero(self.inner.p, 1, self.inner.prec), level_cap: self.level_cap }
    }
    fn one_like(&self) -> Self {
        self.from_rational_like(&BigRational::one())
    }
    fn from_rational_like(&self, q: &BigRational) -> Self {
        TowerElement::from_rational(self.inner.p, q, self.inner.prec, self.level_cap)
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        self.arith(ArithOp::Add, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        self.arith(ArithOp::Sub, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        self.arith(ArithOp::Mul, other)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        self.arith(ArithOp::Div, other)
    }
    fn negate(&self) -> Self {
        TowerElement { inner: self.inner.neg(), level_cap: self.level_cap }
    }
    fn val_bound(&self) -> ValBound {
        self.inner.val_bound()
    }
    fn residue(&self) -> Result<u64> {
        self.inner.residue()
    }
    fn is_zero_at_precision(&self) -> bool {
        self.inner.is_zero_at_precision()
    }
}

/// Where `p^(-c)` lies relative to an interval with endpoints `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    /// Beyond the upper endpoint: the exponent is too small.
    Below,
    Inside,
    /// Beyond the lower endpoint: the exponent is too large.
    Above,
}

/// An interval of norms `(a, b)`, `[a, b)`, `(a, b]` or `[a, b]`.
#[derive(Clone, Debug)]
pub struct NormInterval {
    pub lo: Radius,
    pub hi: Radius,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl NormInterval {
    pub fn open(lo: Radius, hi: Radius) -> Self {
        NormInterval { lo, hi, lo_closed: false, hi_closed: false }
    }

    /// `(lo, hi]`.
    pub fn open_closed(lo: Radius, hi: Radius) -> Self {
        NormInterval { lo, hi, lo_closed: false, hi_closed: true }
    }

    fn contains_cmp(&self, lo: Ordering, hi: Ordering) -> Side {
        let above_hi = hi == Ordering::Greater || (hi == Ordering::Equal && !self.hi_closed);
        let below_lo = lo == Ordering::Less || (lo == Ordering::Equal && !self.lo_closed);
        if above_hi {
            Side::Below
        } else if below_lo {
            Side::Above
        } else {
            Side::Inside
        }
    }

    fn classify(&self, p: u64, u: &BigInt, v: &BigInt) -> Result<Side> {
        let n = NormValue::pow_p(p, BigRational::new(u.clone(), v.clone()));
        let hi = cmp_norm_radius(&n, &self.hi)?;
        let lo = cmp_norm_radius(&n, &self.lo)?;
        Ok(self.contains_cmp(lo, hi))
    }

    fn contains_one(&self) -> bool {
        let one = BigRational::one();
        self.contains_cmp(one.cmp(self.lo.value()), one.cmp(self.hi.value())) == Side::Inside
    }

    fn mirrored(&self) -> NormInterval {
        let inv = |r: &Radius| Radius::new(r.value().recip()).unwrap();
        NormInterval { lo: inv(&self.hi), hi: inv(&self.lo), lo_closed: self.hi_closed, hi_closed: self.lo_closed }
    }
}

/// Largest `k >= 1` such that `side(k) == want`, given `side(1) == want`
/// and monotonicity in `k`.
fn gallop(mut side: impl FnMut(&BigInt) -> Result<Side>, want: Side) -> Result<BigInt> {
    let mut lo = BigInt::one();
    let mut hi = BigInt::from(2);
    while side(&hi)? == want {
        lo = hi.clone();
        hi *= 2;
    }
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi) / 2;
        if side(&mid)? == want {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Simplest positive `u/v` with `p^(-u/v)` in the interval, which lies
/// below 1.
fn simplest_positive(p: u64, iv: &NormInterval) -> Result<(BigInt, BigInt)> {
    let (mut ln, mut ld) = (BigInt::zero(), BigInt::one());
    let (mut rn, mut rd) = (BigInt::one(), BigInt::zero());
    loop {
        let (mn, md) = (&ln + &rn, &ld + &rd);
        match iv.classify(p, &mn, &md)? {
            Side::Inside => return Ok((mn, md)),
            Side::Below => {
                let k = gallop(|k| iv.classify(p, &(&ln + k * &rn), &(&ld + k * &rd)), Side::Below)?;
                ln += &k * &rn;
                ld += &k * &rd;
            }
            Side::Above => {
                let k = gallop(|k| iv.classify(p, &(k * &ln + &rn), &(k * &ld + &rd)), Side::Above)?;
                rn += &k * &ln;
                rd += &k * &ld;
            }
        }
    }
}

/// Coprime `(u, v)`, `v >= 1`, with `p^(-u/v)` in the interval and `v` as
/// small as possible (Stern-Brocot descent with exact predicates).
pub fn find_rational_power_in(p: u64, iv: &NormInterval) -> Result<(i64, u32)> {
    if iv.lo >= iv.hi {
        return Err(Error::InvalidArgument(format!("need a < b, got a = {}, b = {}", iv.lo, iv.hi)));
    }
    let one = Radius::int(1);
    let (u, v) = if iv.contains_one() {
        (BigInt::zero(), BigInt::one())
    } else if iv.hi <= one {
        simplest_positive(p, iv)?
    } else {
        // the interval lies above 1: mirror c -> -c
        let (u, v) = simplest_positive(p, &iv.mirrored())?;
        (-u, v)
    };
    let u = u.to_i64().ok_or_else(|| Error::DenominatorCapExceeded(format!("exponent numerator {u}")))?;
    let v = v.to_u32().ok_or_else(|| Error::DenominatorCapExceeded(format!("exponent denominator {v}")))?;
    Ok((u, v))
}

/// Coprime `(u, v)` with `a < p^(-u/v) < b` and `v` minimal.
pub fn find_rational_power(p: u64, a: &Radius, b: &Radius) -> Result<(i64, u32)> {
    find_rational_power_in(p, &NormInterval::open(a.clone(), b.clone()))
}

/// An element `z = π_v^u` with `a < |z| < b`; `z` is a root of `X^v - p^u`.
pub fn norm_dense_witness(p: u64, a: &Radius, b: &Radius, prec: u32, level_cap: u32) -> Result<TowerElement> {
    let (u, v) = find_rational_power(p, a, b)?;
    let z = TowerElement::monomial(p, v, u, prec, level_cap)?;
    let expected = Valuation::Finite(BigRational::new(BigInt::from(u), BigInt::from(v)));
    let val = z.valuation()?;
    let n = NormValue::new(p, val.clone());
    if val != expected || !(n.gt_radius(a)? && n.lt_radius(b)?) {
        return Err(Error::PreconditionFailed(format!(
            "witness check failed for exponent {}",
            fmt_rational(expected.finite().unwrap())
        )));
    }
    Ok(z)
}

/// `z^v == p^u` exactly, as elements of level `z.level()`.
pub fn is_root_of_pure_power(z: &TowerElement, u: i64, v: u32) -> Result<bool> {
    let lhs = z.pow(v)?;
    let p = z.inner.p;
    let prec = z.inner.prec;
    let rhs = PadicNumber::one(p, prec).shift(u);
    let rhs = EisElement::from_padic(&rhs, z.level());
    Ok(lhs.inner.compare(&rhs) == Comparison::Equal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valcore::rat;

    fn eis(p: u64, c: &[i64]) -> EisElement {
        EisElement::new(p, c.iter().map(|&x| PadicNumber::from_int(p, x, 32)).collect()).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let a = eis(2, &[1, 1]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.compare(&eis(2, &[3, 2])), Comparison::Equal);
        let pi = EisElement::pi(2, 2, 32);
        assert_eq!(pi.mul(&pi).unwrap().compare(&eis(2, &[2, 0])), Comparison::Equal);
        let one = eis(2, &[1, 0]);
        assert_eq!(a.mul(&one).unwrap().compare(&a), Comparison::Equal);
        assert!(matches!(a.add(&eis(2, &[1, 0, 0])), Err(Error::LevelMismatch(2, 3))));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(eis(2, &[3, 2]).valuation().unwrap(), Valuation::int(0));
        assert_eq!(EisElement::monomial(2, 2, 3, 32).valuation().unwrap(), Valuation::frac(3, 2));
        assert_eq!(EisElement::zero(2, 2, 32).valuation().unwrap(), Valuation::Infinite);
        let fuzzy = EisElement::new(5, vec![PadicNumber::zero_at(5, 0, 8), PadicNumber::from_int(5, 1, 8)]).unwrap();
        assert!(matches!(fuzzy.valuation(), Err(Error::PrecisionLoss(_))));
        let fine = EisElement::new(5, vec![PadicNumber::zero_at(5, 3, 8), PadicNumber::from_int(5, 1, 8)]).unwrap();
        assert_eq!(fine.valuation().unwrap(), Valuation::frac(1, 2));
    }

    #[test]
    fn lift_examples() {
        let pi = EisElement::pi(2, 2, 32);
        let l = pi.lift(4, DEFAULT_LEVEL_CAP).unwrap();
        assert_eq!(l.compare(&EisElement::monomial(2, 4, 2, 32)), Comparison::Equal);
        assert_eq!(l.valuation().unwrap(), Valuation::frac(1, 2));
        assert_eq!(pi.lift(2, DEFAULT_LEVEL_CAP).unwrap().compare(&pi), Comparison::Equal);
        let x = eis(2, &[3, 2]).lift(4, DEFAULT_LEVEL_CAP).unwrap();
        assert_eq!(x.compare(&eis(2, &[3, 0, 2, 0])), Comparison::Equal);
        assert_eq!(x.valuation().unwrap(), Valuation::int(0));
        assert!(pi.lift(3, DEFAULT_LEVEL_CAP).is_err());
        assert!(matches!(pi.lift(2048, DEFAULT_LEVEL_CAP), Err(Error::LevelCapExceeded { .. })));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = eis(3, &[1, 2, -1]);
        let b = eis(3, &[2, 0, 5]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c.div(&b).unwrap().compare(&a), Comparison::Equal);
        let pi = EisElement::pi(3, 3, 32);
        assert_eq!(a.mul(&pi).unwrap().div(&pi).unwrap().compare(&a), Comparison::Equal);
        assert!(matches!(a.div(&EisElement::zero(3, 3, 32)), Err(Error::DivisionByZero)));
    }

    #[test]
    fn tower_operands_meet_at_lcm() {
        let x = TowerElement::monomial(2, 2, 1, 32, 1024).unwrap();
        let y = TowerElement::monomial(2, 3, 1, 32, 1024).unwrap();
        let s = x.arith(ArithOp::Mul, &y).unwrap();
        assert_eq!(s.level(), 6);
        assert_eq!(s.valuation().unwrap(), Valuation::frac(5, 6));
        let small = TowerElement::monomial(2, 4, 2, 32, 1024).unwrap().reduce_level();
        assert_eq!(small.level(), 2);
        let capped = TowerElement::monomial(2, 7, 1, 32, 10).unwrap();
        assert!(matches!(x.arith(ArithOp::Add, &capped), Err(Error::LevelCapExceeded { .. })));
    }

    #[test]
    fn rational_power_examples() {
        assert_eq!(find_rational_power(2, &Radius::frac(1, 3), &Radius::frac(1, 2)).unwrap(), (3, 2));
        // 2^(-1/4) ~ 0.8409 < 17/20, so the simplest exponent is 1/5
        assert_eq!(find_rational_power(2, &Radius::frac(17, 20), &Radius::int(1)).unwrap(), (1, 5));
        assert_eq!(find_rational_power(5, &Radius::frac(1, 5), &Radius::int(1)).unwrap(), (1, 2));
        assert_eq!(find_rational_power(2, &Radius::frac(1, 2), &Radius::int(2)).unwrap(), (0, 1));
        assert_eq!(find_rational_power(3, &Radius::int(2), &Radius::frac(5, 2)).unwrap().0.signum(), -1);
        assert_eq!(find_rational_power(2, &Radius::zero(), &Radius::frac(1, 1000)).unwrap(), (10, 1));
        assert!(find_rational_power(2, &Radius::int(1), &Radius::int(1)).is_err());
        let half_open = NormInterval::open_closed(Radius::frac(1, 2), Radius::int(1));
        assert_eq!(find_rational_power_in(2, &half_open).unwrap(), (0, 1));
        let iv = NormInterval::open_closed(Radius::frac(4, 5), Radius::frac(9, 10));
        assert_eq!(find_rational_power_in(2, &iv).unwrap(), (1, 4));
        let above = NormInterval::open_closed(Radius::int(2), Radius::int(4));
        assert_eq!(find_rational_power_in(2, &above).unwrap(), (-2, 1));
    }

    #[test]
    fn witness_examples() {
        let z = norm_dense_witness(2, &Radius::frac(1, 3), &Radius::frac(1, 2), 32, 1024).unwrap();
        assert_eq!(z.level(), 2);
        assert_eq!(z.valuation().unwrap(), Valuation::frac(3, 2));
        assert!(is_root_of_pure_power(&z, 3, 2).unwrap());
        let w = norm_dense_witness(2, &Radius::frac(1, 2), &Radius::int(2), 32, 1024).unwrap();
        assert_eq!(w.valuation().unwrap(), Valuation::int(0));
        let big = norm_dense_witness(3, &Radius::int(2), &Radius::frac(5, 2), 32, 1024).unwrap();
        let n = big.inner().norm().unwrap();
        assert!(n.gt_radius(&Radius::int(2)).unwrap() && n.lt_radius(&Radius::frac(5, 2)).unwrap());
        assert_eq!(rat(1, 2), rat(2, 4));
    }

    #[test]
    fn render_and_parse() {
        let x = eis(5, &[3, 0, -2]);
        let s = x.to_string();
        assert_eq!(s, "3 + -2*pi^2 @ level 3");
        assert_eq!(EisElement::parse(&s, 5, 32).unwrap().compare(&x), Comparison::Equal);
        let y = EisElement::parse("1 - pi + 1/5*pi^2 @ level 4", 5, 32).unwrap();
        assert_eq!(y.valuation().unwrap(), Valuation::frac(-1, 2));
        let d = PadicNumber::from_rational(5, &rat(1, 3), 4).truncate(4);
        let z = EisElement::new(5, vec![d.clone(), d]).unwrap();
        let back = EisElement::parse(&z.to_string(), 5, 4).unwrap();
        assert_ne!(back.compare(&z), Comparison::Distinct);
        assert_eq!(EisElement::zero(5, 2, 4).to_string(), "0 @ level 2");
    }
}
