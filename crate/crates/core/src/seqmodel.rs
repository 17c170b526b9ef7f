//! Eventually constant sequences in `K^m` as a model of `ℓ∞(E)/c0(E)`.
//!
//! A sequence is stored as a finite prefix followed by a constant tail. The
//! sup norm is the max over prefix and tail; modulo null sequences the norm
//! is `limsup |f_n|`, which for these sequences is the tail norm.

use std::cmp::Ordering;
use std::fmt;

use crate::ballcalc::UltraSpace;
use crate::error::{Error, Result};
use crate::linalg::{fmt_vector, is_zero_vec, parse_vector, vec_add, vec_agree, vec_norm, vec_scale, vec_sub};
use crate::padic::{ArithOp, PadicNumber};
use crate::scalar::Scalar;
use crate::text::strip_parens;
use crate::valcore::{cmp_norm_radius, NormValue, Radius};

#[derive(Clone, Debug)]
pub struct SeqRep<F> {
    prefix: Vec<Vec<F>>,
    tail: Vec<F>,
}

impl<F: Scalar> SeqRep<F> {
    /// Canonical form: prefix entries equal to the tail are trimmed from
    /// the end.
    pub fn new(prefix: Vec<Vec<F>>, tail: Vec<F>) -> Result<Self> {
        if tail.is_empty() {
            return Err(Error::InvalidArgument("entries must have dimension >= 1".into()));
        }
        if let Some(i) = prefix.iter().position(|v| v.len() != tail.len()) {
            return Err(Error::InvalidArgument(format!(
                "entry {i} has dimension {}, tail has {}",
                prefix[i].len(),
                tail.len()
            )));
        }
        let mut s = SeqRep { prefix, tail };
        while let Some(last) = s.prefix.last() {
            if vec_agree(last, &s.tail)? {
                s.prefix.pop();
            } else {
                break;
            }
        }
        Ok(s)
    }

    pub fn constant(x: Vec<F>) -> Result<Self> {
        SeqRep::new(Vec::new(), x)
    }

    pub fn prefix(&self) -> &[Vec<F>] {
        &self.prefix
    }

    pub fn tail(&self) -> &[F] {
        &self.tail
    }

    pub fn dim(&self) -> usize {
        self.tail.len()
    }

    /// Entry `n` of the sequence.
    pub fn at(&self, n: usize) -> &[F] {
        self.prefix.get(n).unwrap_or(&self.tail)
    }

    fn check_dim(&self, other: &SeqRep<F>) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidArgument(format!("dimension {} vs {}", self.dim(), other.dim())));
        }
        Ok(())
    }

    fn zip_with(&self, other: &SeqRep<F>, f: impl Fn(&[F], &[F]) -> Result<Vec<F>>) -> Result<SeqRep<F>> {
        self.check_dim(other)?;
        let len = self.prefix.len().max(other.prefix.len());
        let prefix = (0..len).map(|n| f(self.at(n), other.at(n))).collect::<Result<_>>()?;
        SeqRep::new(prefix, f(&self.tail, &other.tail)?)
    }

    pub fn add(&self, other: &SeqRep<F>) -> Result<SeqRep<F>> {
        self.zip_with(other, |a, b| vec_add(a, b))
    }

    pub fn sub(&self, other: &SeqRep<F>) -> Result<SeqRep<F>> {
        self.zip_with(other, |a, b| vec_sub(a, b))
    }

    pub fn scale(&self, c: &F) -> Result<SeqRep<F>> {
        let prefix = self.prefix.iter().map(|v| vec_scale(c, v)).collect::<Result<_>>()?;
        SeqRep::new(prefix, vec_scale(c, &self.tail)?)
    }

    /// Pointwise `+` or `-`; the other operations are not module operations.
    pub fn arith(&self, op: ArithOp, other: &SeqRep<F>) -> Result<SeqRep<F>> {
        match op {
            ArithOp::Add => self.add(other),
            ArithOp::Sub => self.sub(other),
            _ => Err(Error::InvalidArgument(format!("{op:?} is not defined on sequences"))),
        }
    }

    fn p(&self) -> u64 {
        self.tail[0].prime()
    }

    pub fn sup_norm(&self) -> Result<NormValue> {
        let mut best = vec_norm(self.p(), &self.tail)?;
        for v in &self.prefix {
            best = best.max(vec_norm(self.p(), v)?);
        }
        Ok(best)
    }

    /// Null sequence: the tail vanishes.
    pub fn in_c0(&self) -> bool {
        is_zero_vec(&self.tail)
    }

    /// `limsup |f_n|`, the norm of the class modulo null sequences.
    pub fn quotient_norm(&self) -> Result<NormValue> {
        vec_norm(self.p(), &self.tail)
    }

    /// Equality as sequences at precision.
    pub fn agrees(&self, other: &SeqRep<F>) -> Result<bool> {
        self.check_dim(other)?;
        let len = self.prefix.len().max(other.prefix.len());
        for n in 0..len {
            if !vec_agree(self.at(n), other.at(n))? {
                return Ok(false);
            }
        }
        vec_agree(&self.tail, &other.tail)
    }

    /// Equality modulo null sequences.
    pub fn agrees_mod_c0(&self, other: &SeqRep<F>) -> Result<bool> {
        self.check_dim(other)?;
        vec_agree(&self.tail, &other.tail)
    }
}

/// The constant sequence `x, x, x, ...`.
pub fn diagonal_embed<F: Scalar>(x: Vec<F>) -> Result<SeqRep<F>> {
    SeqRep::constant(x)
}

pub fn quotient_norm_seq<F: Scalar>(a: &SeqRep<F>) -> Result<NormValue> {
    a.quotient_norm()
}

/// Splits at commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

impl<F: Scalar> SeqRep<F> {
    /// Parses `[v1, v2 | tail]`; entries are vectors `(a, b)` or bare scalars.
    pub fn parse(s: &str, parse: &impl Fn(&str) -> Result<F>) -> Result<SeqRep<F>> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [prefix | tail], got {t:?}")))?;
        let (pre, tail) = inner
            .rsplit_once('|')
            .ok_or_else(|| Error::Parse(format!("missing '|' in {t:?}")))?;
        let entry = |e: &str| -> Result<Vec<F>> {
            let e = e.trim();
            if e.starts_with('(') {
                parse_vector(e, parse)
            } else {
                Ok(vec![parse(strip_parens(e))?])
            }
        };
        let prefix = if pre.trim().is_empty() {
            Vec::new()
        } else {
            split_top(pre).into_iter().map(entry).collect::<Result<_>>()?
        };
        SeqRep::new(prefix, entry(tail)?)
    }
}

impl<F: Scalar> fmt::Display for SeqRep<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[F]| if v.len() == 1 { v[0].to_string() } else { fmt_vector(v) };
        let pre: Vec<String> = self.prefix.iter().map(|v| show(v)).collect();
        if pre.is_empty() {
            write!(f, "[| {}]", show(&self.tail))
        } else {
            write!(f, "[{} | {}]", pre.join(", "), show(&self.tail))
        }
    }
}

/// Classes of eventually constant sequences in `Q_p^m` with the quotient
/// norm as distance.
#[derive(Clone, Copy, Debug)]
pub struct QuotientSpace {
    pub p: u64,
    pub prec: u32,
}

impl UltraSpace for QuotientSpace {
    type Point = SeqRep<PadicNumber>;
    type Dist = NormValue;

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> Result<NormValue> {
        x.sub(y)?.quotient_norm()
    }
    fn cmp_dist_radius(&self, d: &NormValue, r: &Radius) -> Result<Ordering> {
        cmp_norm_radius(d, r)
    }
    fn render(&self, x: &Self::Point) -> String {
        x.to_string()
    }
    fn parse_point(&self, s: &str) -> Result<Self::Point> {
        SeqRep::parse(s, &|e| PadicNumber::parse(e, self.p, self.prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ballcalc::{check_antitone_chain, Ball};
    use crate::padic::Qp;
    use crate::valcore::Valuation;

    fn seq(s: &str) -> SeqRep<PadicNumber> {
        QuotientSpace { p: 5, prec: 32 }.parse_point(s).unwrap()
    }

    #[test]
    fn norms() {
        let k = Qp::new(5, 32).unwrap();
        let x = seq("[| (5, 25)]");
        assert_eq!(x.sup_norm().unwrap(), NormValue::new(5, Valuation::int(1)));
        let y = seq("[(1/5, 0) | (0, 0)]");
        assert_eq!(y.sup_norm().unwrap(), NormValue::new(5, Valuation::int(-1)));
        assert!(y.in_c0());
        assert!(y.quotient_norm().unwrap().is_zero());
        let z = y.add(&y.scale(&k.int(-1)).unwrap()).unwrap();
        assert!(z.prefix().is_empty() && z.in_c0());
        assert_eq!(z.sup_norm().unwrap(), NormValue::zero(5));
    }

    #[test]
    fn c0_membership() {
        assert!(seq("[7, 1/25 | 0]").in_c0());
        assert!(!seq("[| 3]").in_c0());
        assert!(!seq("[3 | 3]").in_c0());
        assert!(seq("[3 | 3]").prefix().is_empty());
    }

    #[test]
    fn quotient_examples() {
        let junk = seq("[1/625, 1/125 | 5]");
        assert_eq!(junk.quotient_norm().unwrap(), NormValue::new(5, Valuation::int(1)));
        assert_eq!(junk.sup_norm().unwrap(), NormValue::new(5, Valuation::int(-4)));
        let diag = diagonal_embed(vec![Qp::new(5, 32).unwrap().int(5)]).unwrap();
        let fix = diag.sub(&junk).unwrap();
        assert!(fix.in_c0());
        assert!(junk.add(&fix).unwrap().agrees(&diag).unwrap());
        assert!(diag.agrees_mod_c0(&junk).unwrap());
    }

    #[test]
    fn display_roundtrip() {
        for s in ["[1, 2 | 3]", "[| (1, 5)]", "[(1, 2) | (0, 0)]"] {
            let a = seq(s);
            assert!(seq(&a.to_string()).agrees(&a).unwrap(), "{s}");
        }
        assert!(SeqRep::<PadicNumber>::parse("[1, 2]", &|e| PadicNumber::parse(e, 5, 8)).is_err());
        assert!(SeqRep::<PadicNumber>::parse("[(1, 2) | 3]", &|e| PadicNumber::parse(e, 5, 8)).is_err());
    }

    #[test]
    fn nested_quotient_balls() {
        let s = QuotientSpace { p: 5, prec: 32 };
        let chain = vec![
            Ball::new(seq("[9 | 0]"), Radius::int(1)),
            Ball::new(seq("[| 5]"), Radius::frac(1, 5)),
            Ball::new(seq("[1 | 30]"), Radius::frac(1, 25)),
        ];
        let c = check_antitone_chain(&s, &chain).unwrap();
        assert!(c.certificate.holds);
    }
}
