//! Polynomials over `Q_p` or the tower: Gauss norm, evaluation, Hensel
//! lifting and the continuity-of-roots certificates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{precision_loss, Error, Result};
use crate::padic::{mod_inverse, ppow, strip_p, Comparison, PadicNumber};
use crate::report::Certificate;
use crate::scalar::Scalar;
use crate::text::{split_terms, strip_parens};
use crate::valcore::{NormValue, ValBound, Valuation};

/// Coefficients from degree 0 upward; trailing coefficients that are zero
/// at precision are dropped, so a nonempty list has a distinguishable
/// leading coefficient.
#[derive(Clone, Debug)]
pub struct Poly<F: Scalar> {
    coeffs: Vec<F>,
    zero: F,
}

impl<F: Scalar> Poly<F> {
    pub fn new(coeffs: Vec<F>, template: &F) -> Self {
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(|c| c.is_zero_at_precision()) {
            coeffs.pop();
        }
        Poly { coeffs, zero: template.zero_like() }
    }

    pub fn zero(template: &F) -> Self {
        Poly::new(Vec::new(), template)
    }

    pub fn constant(c: F) -> Self {
        let t = c.clone();
        Poly::new(vec![c], &t)
    }

    /// `X - r`.
    pub fn linear_root(r: &F) -> Self {
        Poly::new(vec![r.negate(), r.one_like()], r)
    }

    /// `Π (X - r)` over the given roots; the empty product is `1`.
    pub fn from_roots(roots: &[F], template: &F) -> Result<Self> {
        let mut acc = Poly::constant(template.one_like());
        for r in roots {
            acc = acc.mul(&Poly::linear_root(r))?;
        }
        Ok(acc)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn prime(&self) -> u64 {
        self.zero.prime()
    }

    pub fn template(&self) -> &F {
        &self.zero
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        match self.coeffs.last() {
            None => false,
            Some(c) => c.try_sub(&c.one_like()).map(|d| d.is_zero_at_precision()).unwrap_or(false),
        }
    }

    fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.zero.clone())
    }

    pub fn add(&self, other: &Poly<F>) -> Result<Poly<F>> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).try_add(&other.coeff(i))).collect::<Result<_>>()?;
        Ok(Poly::new(c, &self.zero))
    }

    pub fn sub(&self, other: &Poly<F>) -> Result<Poly<F>> {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| self.coeff(i).try_sub(&other.coeff(i))).collect::<Result<_>>()?;
        Ok(Poly::new(c, &self.zero))
    }

    pub fn mul(&self, other: &Poly<F>) -> Result<Poly<F>> {
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.zero));
        }
        let mut out = vec![self.zero.clone(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].try_add(&a.try_mul(b)?)?;
            }
        }
        Ok(Poly::new(out, &self.zero))
    }

    pub fn derivative(&self) -> Poly<F> {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.try_mul(&a.from_rational_like(&BigRational::from_integer(i.into()))).unwrap())
            .collect();
        Poly::new(c, &self.zero)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &F) -> Result<F> {
        let mut acc = x.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.try_mul(x)?.try_add(c)?;
        }
        Ok(acc)
    }

    /// `(f(x), f'(x))` in one Horner pass.
    pub fn eval_and_derivative(&self, x: &F) -> Result<(F, F)> {
        let mut v = x.zero_like();
        let mut d = x.zero_like();
        for c in self.coeffs.iter().rev() {
            d = d.try_mul(x)?.try_add(&v)?;
            v = v.try_mul(x)?.try_add(c)?;
        }
        Ok((v, d))
    }

    /// `min_i v(a_i)`; the zero polynomial has valuation `inf`.
    pub fn gauss_valuation(&self) -> Result<Valuation> {
        let bounds: Vec<ValBound> = self.coeffs.iter().map(|c| c.val_bound()).collect();
        ValBound::min_of(&bounds).vector_norm("Gauss norm")
    }

    /// `max_i |a_i|`.
    pub fn gauss_norm(&self) -> Result<NormValue> {
        Ok(NormValue::new(self.prime(), self.gauss_valuation()?))
    }

    /// Parses `X^2 - 1/5*X + 25` with a coefficient parser; coefficients
    /// containing operators go in parentheses.
    pub fn parse(s: &str, template: &F, parse_coef: impl Fn(&str) -> Result<F>) -> Result<Poly<F>> {
        let mut acc = Poly::zero(template);
        if s.trim() == "0" {
            return Ok(acc);
        }
        for (neg, term) in split_terms(s)? {
            let (coef, k) = split_x_power(&term)?;
            let mut c = match coef.as_deref() {
                None => template.one_like(),
                Some("-") => template.one_like().negate(),
                Some(c) => parse_coef(strip_parens(c))?,
            };
            if neg {
                c = c.negate();
            }
            let mut mono = vec![template.zero_like(); k];
            mono.push(c);
            acc = acc.add(&Poly::new(mono, template))?;
        }
        Ok(acc)
    }
}

fn split_x_power(term: &str) -> Result<(Option<String>, usize)> {
    let t = term.trim();
    let pow = |rest: &str| -> Result<usize> {
        let rest = rest.trim();
        if rest.is_empty() {
            return Ok(1);
        }
        rest.strip_prefix('^')
            .and_then(|k| k.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad power of X in {t:?}")))
    };
    if let Some(rest) = t.strip_prefix('X') {
        return Ok((None, pow(rest)?));
    }
    if let Some(rest) = t.strip_prefix("-X") {
        return Ok((Some("-".into()), pow(rest)?));
    }
    if let Some(idx) = t.rfind("*X") {
        let rest = &t[idx + 2..];
        if rest.trim().is_empty() || rest.trim_start().starts_with('^') {
            return Ok((Some(t[..idx].trim().to_string()), pow(rest)?));
        }
    }
    Ok((Some(t.to_string()), 0))
}

impl<F: Scalar> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero_at_precision() {
                continue;
            }
            let mut cs = c.to_string();
            let negative = cs.starts_with('-') && !cs.contains(' ');
            if negative {
                cs.remove(0);
            }
            if cs.contains(' ') {
                cs = format!("({cs})");
            }
            let body = match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (1, "1") => "X".to_string(),
                (_, "1") => format!("X^{i}"),
                (1, _) => format!("{cs}*X"),
                _ => format!("{cs}*X^{i}"),
            };
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        f.write_str(&out)
    }
}

impl Poly<PadicNumber> {
    pub fn parse_padic(s: &str, p: u64, prec: u32) -> Result<Self> {
        let t = PadicNumber::zero(p, prec);
        Poly::parse(s, &t, |c| PadicNumber::parse(c, p, prec))
    }
}

/// Trace of a Newton iteration modulo `p^target`.
#[derive(Clone, Debug)]
pub struct HenselLift {
    pub root: PadicNumber,
    /// `v(f'(a0))`.
    pub delta: u32,
    /// `v(f(a_k))` for each iterate, capped at the target.
    pub residual_vals: Vec<u32>,
    pub target: u32,
}

fn int_val(x: &BigInt, p: u64, cap: u32) -> u32 {
    if x.is_zero() {
        return cap;
    }
    strip_p(x, p).0.min(cap)
}

/// Newton lifting of a simple root of an integral polynomial.
///
/// Requires `v(f(a0)) > 2 v(f'(a0))`. Iterates modulo `p^target`; the root
/// is returned with absolute precision `target - v(f'(a0))` and satisfies
/// `f(root) ≡ 0 mod p^target`.
pub fn hensel_lift(f: &Poly<PadicNumber>, a0: &PadicNumber, target: u32) -> Result<HenselLift> {
    let p = f.prime();
    let fail = |m: String| Error::HenselConditionFailed(m);
    if f.is_zero() || f.degree() == Some(0) {
        return Err(fail("polynomial must have positive degree".into()));
    }
    for c in f.coeffs() {
        if c.val_bound().lower() < Valuation::int(0) {
            return Err(fail(format!("coefficient {c} is not integral")));
        }
    }
    if a0.val_bound().lower() < Valuation::int(0) {
        return Err(fail(format!("starting point {a0} is not integral")));
    }
    let (fa, dfa) = f.eval_and_derivative(a0)?;
    let delta = match dfa.valuation()? {
        Valuation::Infinite => return Err(fail("f'(a0) = 0".into())),
        Valuation::Finite(v) => v.to_integer(),
    };
    let eps = fa.valuation()?;
    let two_delta = Valuation::Finite(BigRational::from_integer(&delta * 2));
    if eps <= two_delta {
        return Err(fail(format!("v(f(a0)) = {eps} is not greater than 2 v(f'(a0)) = {two_delta}")));
    }
    let delta: u32 = delta.try_into().map_err(|_| fail("derivative valuation out of range".into()))?;
    if target <= delta {
        return Err(precision_loss(format!("target {target} does not exceed v(f'(a0)) = {delta}")));
    }
    let m = ppow(p, target);
    let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| c.residue_mod(target)).collect::<Result<_>>()?;
    let a0_int = a0.residue_mod(target)?;
    let eval = |x: &BigInt| -> (BigInt, BigInt) {
        let mut v = BigInt::zero();
        let mut d = BigInt::zero();
        for c in coeffs.iter().rev() {
            d = (&d * x + &v).mod_floor(&m);
            v = (&v * x + c).mod_floor(&m);
        }
        (v, d)
    };
    let mut a = a0_int.clone();
    let mut vals: Vec<u32> = Vec::new();
    loop {
        let (fv, dv) = eval(&a);
        let t = int_val(&fv, p, target);
        if let Some(&prev) = vals.last() {
            let want = (2 * prev).saturating_sub(2 * delta).min(target);
            if t < want {
                return Err(Error::PreconditionFailed(format!(
                    "Newton step reached valuation {t}, expected at least {want}"
                )));
            }
        }
        vals.push(t);
        if t >= target {
            break;
        }
        let (dk, du) = strip_p(&dv, p);
        if dk != delta {
            return Err(Error::PreconditionFailed("derivative valuation changed".into()));
        }
        // f(a)/f'(a) = p^(t - delta) * u1 / u2
        let (tk, u1) = strip_p(&fv, p);
        let rel = target - delta;
        let inv = mod_inverse(&du, &ppow(p, rel)).expect("unit");
        let step = (u1 * inv * ppow(p, tk - delta)).mod_floor(&m);
        a = (a - step).mod_floor(&m);
    }
    let abs = target - delta;
    let root = PadicNumber::from_digits(p, 0, &a, abs);
    // |a - a0| <= |f(a0)| / |f'(a0)|
    let moved = int_val(&(&a - &a0_int).mod_floor(&ppow(p, abs)), p, abs);
    let need = match eps {
        Valuation::Finite(e) => (e.to_integer() - BigInt::from(delta)).min(BigInt::from(abs)),
        Valuation::Infinite => BigInt::from(abs),
    };
    if BigInt::from(moved) < need {
        return Err(Error::PreconditionFailed("root moved further than |f(a0)/f'(a0)|".into()));
    }
    Ok(HenselLift { root, delta, residual_vals: vals, target })
}

/// Valuation of a value, treating "zero at precision" as zero.
fn val_at_precision<F: Scalar>(x: &F) -> Result<Valuation> {
    if x.is_zero_at_precision() {
        return Ok(Valuation::Infinite);
    }
    x.val_bound().certified("value")
}

fn check_pair<F: Scalar>(f: &Poly<F>, g: &Poly<F>) -> Result<usize> {
    if !f.is_monic() || !g.is_monic() {
        return Err(Error::NotMonic);
    }
    let n = f.degree().unwrap();
    let m = g.degree().unwrap();
    if n != m {
        return Err(Error::DegreeMismatch(n, m));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    Ok(n)
}

/// For monic `f, g` of degree `n` and a root `α` of `f`:
/// `|g(α)| <= |f - g|_G · |f|_G^(n-1)`.
pub fn roots_bound_part1<F: Scalar>(f: &Poly<F>, g: &Poly<F>, alpha: &F) -> Result<Certificate> {
    let n = check_pair(f, g)?;
    let fa = f.eval(alpha)?;
    if !fa.is_zero_at_precision() {
        return Err(Error::RootCheckFailed(fa.to_string()));
    }
    let p = f.prime();
    let lhs = val_at_precision(&g.eval(alpha)?)?;
    let vd = f.sub(g)?.gauss_valuation()?;
    let vf = f.gauss_valuation()?;
    let k = BigRational::from_integer(BigInt::from(n - 1));
    let rhs = &vd + &vf.scale(&k);
    let holds = lhs >= rhs;
    Ok(Certificate::new(
        "continuity-of-roots/eval-bound",
        NormValue::new(p, lhs),
        "<=",
        NormValue::new(p, rhs),
        holds,
    ))
}

/// For `f = Π(X - r)`, `g = Π(X - s)` of degree `n` and `α` among the `r`:
/// some `β` among the `s` has `|β - α| <= |f - g|_G^(1/n) · |f|_G`.
pub fn roots_bound_part2<F: Scalar>(f_roots: &[F], g_roots: &[F], alpha: &F) -> Result<Certificate> {
    if f_roots.is_empty() {
        return Err(Error::InvalidArgument("root lists must be nonempty".into()));
    }
    if f_roots.len() != g_roots.len() {
        return Err(Error::DegreeMismatch(f_roots.len(), g_roots.len()));
    }
    let in_f = f_roots
        .iter()
        .any(|r| r.try_sub(alpha).map(|d| d.is_zero_at_precision()).unwrap_or(false));
    if !in_f {
        return Err(Error::RootCheckFailed(format!("{alpha} is not among the roots of f")));
    }
    let t = &f_roots[0];
    let f = Poly::from_roots(f_roots, t)?;
    let g = Poly::from_roots(g_roots, t)?;
    let n = f_roots.len();
    let p = t.prime();
    let mut best: Option<(Valuation, &F)> = None;
    for b in g_roots {
        let v = val_at_precision(&b.try_sub(alpha)?)?;
        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
            best = Some((v, b));
        }
    }
    let (lhs, beta) = best.unwrap();
    let vd = f.sub(&g)?.gauss_valuation()?;
    let vf = f.gauss_valuation()?;
    let rhs = &vd.scale(&BigRational::new(BigInt::one(), BigInt::from(n))) + &vf;
    let holds = lhs >= rhs;
    Ok(Certificate::new(
        "continuity-of-roots/root-distance",
        NormValue::new(p, lhs),
        "<=",
        NormValue::new(p, rhs),
        holds,
    )
    .with_witness(beta))
}

/// `|f(α)| <= |f|_G` for `|α| <= 1`, as a certificate.
pub fn gauss_dominates_eval<F: Scalar>(f: &Poly<F>, alpha: &F) -> Result<Certificate> {
    let lhs = val_at_precision(&f.eval(alpha)?)?;
    let rhs = f.gauss_valuation()?;
    let p = f.prime();
    Ok(Certificate::new("gauss-norm/eval-on-unit-ball", NormValue::new(p, lhs.clone()), "<=", NormValue::new(p, rhs.clone()), lhs >= rhs))
}

/// True when the two values agree at their common precision.
pub fn agrees(a: &PadicNumber, b: &PadicNumber) -> bool {
    a.compare(b) != Comparison::Distinct
}
