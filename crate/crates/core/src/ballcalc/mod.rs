//! Closed balls in ultrametric spaces and finite checks of the nested-ball
//! properties.

mod tree;

pub use tree::TreeSpace;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::eisenstein::{EisElement, TowerElement};
use crate::error::{precision_loss, Error, Result};
use crate::padic::PadicNumber;
use crate::report::Certificate;
use crate::scalar::Scalar;
use crate::valcore::{cmp_norm_radius, floor_to_value_group, NormValue, Radius, ValBound, Valuation};

pub trait UltraSpace {
    type Point: Clone + std::fmt::Debug;
    type Dist: Ord + Clone + std::fmt::Debug + std::fmt::Display;

    fn dist(&self, x: &Self::Point, y: &Self::Point) -> Result<Self::Dist>;
    fn cmp_dist_radius(&self, d: &Self::Dist, r: &Radius) -> Result<Ordering>;
    fn render(&self, x: &Self::Point) -> String;
    fn parse_point(&self, s: &str) -> Result<Self::Point>;

    /// `d(x, y) <= r`.
    fn within(&self, x: &Self::Point, y: &Self::Point, r: &Radius) -> Result<bool> {
        Ok(self.cmp_dist_radius(&self.dist(x, y)?, r)? != Ordering::Greater)
    }
}

/// `|x - y| <= r` from what is known about `v(x - y)`.
fn within_bound(p: u64, b: ValBound, r: &Radius) -> Result<bool> {
    match b {
        ValBound::Exact(v) => NormValue::new(p, v).le_radius(r),
        ValBound::AtLeast(k) => {
            if NormValue::pow_p(p, k).le_radius(r)? {
                Ok(true)
            } else {
                Err(precision_loss("distance is indistinguishable around the radius"))
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PadicSpace {
    pub p: u64,
    pub prec: u32,
}

impl UltraSpace for PadicSpace {
    type Point = PadicNumber;
    type Dist = NormValue;

    fn dist(&self, x: &PadicNumber, y: &PadicNumber) -> Result<NormValue> {
        x.try_sub(y)?.norm()
    }
    fn cmp_dist_radius(&self, d: &NormValue, r: &Radius) -> Result<Ordering> {
        cmp_norm_radius(d, r)
    }
    fn render(&self, x: &PadicNumber) -> String {
        x.to_string()
    }
    fn parse_point(&self, s: &str) -> Result<PadicNumber> {
        PadicNumber::parse(s, self.p, self.prec)
    }
    fn within(&self, x: &PadicNumber, y: &PadicNumber, r: &Radius) -> Result<bool> {
        within_bound(self.p, x.try_sub(y)?.val_bound(), r)
    }
}

/// A single level `Q_p(p^(1/e))`.
#[derive(Clone, Copy, Debug)]
pub struct EisSpace {
    pub p: u64,
    pub e: u32,
    pub prec: u32,
}

impl UltraSpace for EisSpace {
    type Point = EisElement;
    type Dist = NormValue;

    fn dist(&self, x: &EisElement, y: &EisElement) -> Result<NormValue> {
        x.sub(y)?.norm()
    }
    fn cmp_dist_radius(&self, d: &NormValue, r: &Radius) -> Result<Ordering> {
        cmp_norm_radius(d, r)
    }
    fn render(&self, x: &EisElement) -> String {
        x.to_string()
    }
    fn parse_point(&self, s: &str) -> Result<EisElement> {
        let x = EisElement::parse(s, self.p, self.prec)?;
        if x.level() != self.e {
            return Err(Error::LevelMismatch(x.level(), self.e));
        }
        Ok(x)
    }
    fn within(&self, x: &EisElement, y: &EisElement, r: &Radius) -> Result<bool> {
        within_bound(self.p, x.sub(y)?.val_bound(), r)
    }
}

/// The union of all levels up to a cap.
#[derive(Clone, Copy, Debug)]
pub struct TowerSpace {
    pub p: u64,
    pub prec: u32,
    pub level_cap: u32,
}

impl UltraSpace for TowerSpace {
    type Point = TowerElement;
    type Dist = NormValue;

    fn dist(&self, x: &TowerElement, y: &TowerElement) -> Result<NormValue> {
        Scalar::norm(&x.try_sub(y)?)
    }
    fn cmp_dist_radius(&self, d: &NormValue, r: &Radius) -> Result<Ordering> {
        cmp_norm_radius(d, r)
    }
    fn render(&self, x: &TowerElement) -> String {
        x.to_string()
    }
    fn parse_point(&self, s: &str) -> Result<TowerElement> {
        TowerElement::new(EisElement::parse(s, self.p, self.prec)?, self.level_cap)
    }
    fn within(&self, x: &TowerElement, y: &TowerElement, r: &Radius) -> Result<bool> {
        within_bound(self.p, x.try_sub(y)?.val_bound(), r)
    }
}

#[derive(Clone, Debug)]
pub struct Ball<P> {
    pub center: P,
    pub radius: Radius,
}

impl<P> Ball<P> {
    pub fn new(center: P, radius: Radius) -> Self {
        Ball { center, radius }
    }
}

pub fn contains<S: UltraSpace>(s: &S, b: &Ball<S::Point>, x: &S::Point) -> Result<bool> {
    s.within(&b.center, x, &b.radius)
}

/// `r1 <= r2` and `d(c1, c2) <= r2`.
pub fn formal_subset<S: UltraSpace>(s: &S, b1: &Ball<S::Point>, b2: &Ball<S::Point>) -> Result<bool> {
    Ok(b1.radius <= b2.radius && s.within(&b1.center, &b2.center, &b2.radius)?)
}

/// Ultrametric criterion: two balls meet iff `d(c1, c2) <= max(r1, r2)`.
pub fn intersects<S: UltraSpace>(s: &S, b1: &Ball<S::Point>, b2: &Ball<S::Point>) -> Result<bool> {
    let r = if b1.radius >= b2.radius { &b1.radius } else { &b2.radius };
    s.within(&b1.center, &b2.center, r)
}

/// Two balls that meet are nested.
pub fn dichotomy_check<S: UltraSpace>(s: &S, b1: &Ball<S::Point>, b2: &Ball<S::Point>) -> Result<Certificate> {
    let meet = intersects(s, b1, b2)?;
    let nested = formal_subset(s, b1, b2)? || formal_subset(s, b2, b1)?;
    let lhs = if meet { "intersecting" } else { "disjoint" };
    let rhs = if nested { "nested" } else { "not nested" };
    Ok(Certificate::new("balls/meet-implies-nested", lhs, "implies", rhs, !meet || nested))
}

#[derive(Clone, Debug)]
pub struct ChainCheck<P> {
    pub point: P,
    pub strictly_decreasing: bool,
    pub certificate: Certificate,
}

/// Verifies `B_{i+1} ⊆ B_i` formally and returns the last center, checked
/// to lie in every ball.
pub fn check_antitone_chain<S: UltraSpace>(s: &S, chain: &[Ball<S::Point>]) -> Result<ChainCheck<S::Point>> {
    let last = chain.last().ok_or_else(|| Error::InvalidArgument("empty chain".into()))?;
    let mut strict = true;
    for i in 1..chain.len() {
        if !formal_subset(s, &chain[i], &chain[i - 1])? {
            return Err(Error::NotAChain(i));
        }
        strict &= chain[i].radius < chain[i - 1].radius;
    }
    let mut inside = 0;
    for b in chain {
        if contains(s, b, &last.center)? {
            inside += 1;
        }
    }
    let cert = Certificate::new(
        "balls/nested-chain-has-common-point",
        format!("{inside} of {} balls contain the point", chain.len()),
        "==",
        format!("{} balls", chain.len()),
        inside == chain.len(),
    )
    .with_witness(s.render(&last.center));
    Ok(ChainCheck { point: last.center.clone(), strictly_decreasing: strict, certificate: cert })
}

/// Limit of a nested chain of balls in `Q_p` with radii shrinking to zero.
///
/// Ball `j` equals `c_j + p^(m_j) Z_p` with `m_j` the least integer with
/// `p^(-m_j) <= r_j`. Digit `k` of the limit is read from the first center
/// whose ball pins it down (`m_j > k`); the result is known modulo
/// `p^(m_last)` and is re-checked against every ball.
pub fn shrink_to_limit(p: u64, centers: &[PadicNumber], radii: &[Radius]) -> Result<PadicNumber> {
    if centers.is_empty() || centers.len() != radii.len() {
        return Err(Error::InvalidArgument("need equally many centers and radii".into()));
    }
    let space = PadicSpace { p, prec: centers[0].cap() };
    let balls: Vec<Ball<PadicNumber>> =
        centers.iter().zip(radii).map(|(c, r)| Ball::new(c.clone(), r.clone())).collect();
    for i in 1..balls.len() {
        if !(radii[i] < radii[i - 1]) || !formal_subset(&space, &balls[i], &balls[i - 1])? {
            return Err(Error::NotAChain(i));
        }
    }
    let mut m = Vec::with_capacity(radii.len());
    for r in radii {
        match floor_to_value_group(p, 1, r)? {
            Valuation::Finite(q) => m.push(i64::try_from(q.to_integer()).map_err(|_| precision_loss("radius exponent out of range"))?),
            Valuation::Infinite => unreachable!(),
        }
    }
    let last = *m.last().unwrap();
    let lo = centers
        .iter()
        .filter_map(|c| c.val_int())
        .chain(std::iter::once(0))
        .min()
        .unwrap()
        .min(last - 1);
    let mut unit = BigInt::from(0);
    let mut scale = BigInt::from(1);
    let pb = BigInt::from(p);
    for k in lo..last {
        let j = m.iter().position(|&mj| mj > k).unwrap();
        let d = centers[j].digits(k, k + 1)?[0];
        unit += &scale * d;
        scale *= &pb;
    }
    let x = PadicNumber::from_digits(p, lo, &unit, (last - lo) as u32);
    for b in &balls {
        if !contains(&space, b, &x)? {
            return Err(Error::PreconditionFailed("limit point left a ball".into()));
        }
    }
    Ok(x)
}

/// Radius `p^(-k)` as an exact rational.
pub fn p_power_radius(p: u64, k: i64) -> Radius {
    let pk = num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize);
    let q = if k >= 0 { BigRational::new(1.into(), pk) } else { BigRational::from_integer(pk) };
    Radius::new(q).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{Comparison, Qp};

    fn k5() -> (PadicSpace, Qp) {
        (PadicSpace { p: 5, prec: 16 }, Qp::new(5, 16).unwrap())
    }

    #[test]
    fn contains_examples() {
        let (s, k) = k5();
        let b = Ball::new(k.zero(), Radius::frac(1, 5));
        assert!(contains(&s, &b, &k.int(5)).unwrap());
        assert!(!contains(&s, &b, &k.int(1)).unwrap());
        assert!(contains(&s, &Ball::new(k.int(7), Radius::zero()), &k.int(7)).unwrap());
        let fuzzy = PadicNumber::zero_at(5, 1, 16);
        assert!(contains(&s, &b, &fuzzy).unwrap());
        assert!(contains(&s, &Ball::new(k.zero(), Radius::frac(1, 25)), &fuzzy).is_err());
    }

    #[test]
    fn subset_examples() {
        let (s, k) = k5();
        let small = Ball::new(k.zero(), Radius::frac(1, 5));
        let big = Ball::new(k.int(1), Radius::int(1));
        assert!(formal_subset(&s, &small, &big).unwrap());
        assert!(formal_subset(&s, &small, &small).unwrap());
        assert!(!formal_subset(&s, &Ball::new(k.zero(), Radius::int(1)), &Ball::new(k.zero(), Radius::frac(1, 5))).unwrap());
    }

    #[test]
    fn dichotomy_examples() {
        let (s, k) = k5();
        let c = dichotomy_check(&s, &Ball::new(k.zero(), Radius::frac(1, 5)), &Ball::new(k.int(1), Radius::frac(1, 5))).unwrap();
        assert!(c.holds && c.lhs == "disjoint");
        let c = dichotomy_check(&s, &Ball::new(k.zero(), Radius::frac(1, 5)), &Ball::new(k.int(5), Radius::frac(1, 25))).unwrap();
        assert!(c.holds && c.lhs == "intersecting");
        let b = Ball::new(k.int(3), Radius::frac(1, 5));
        assert!(dichotomy_check(&s, &b, &b).unwrap().holds);
    }

    #[test]
    fn chain_examples() {
        let (s, k) = k5();
        let chain = vec![
            Ball::new(k.zero(), Radius::int(1)),
            Ball::new(k.int(5), Radius::frac(1, 5)),
            Ball::new(k.int(5), Radius::frac(1, 25)),
        ];
        let c = check_antitone_chain(&s, &chain).unwrap();
        assert_eq!(c.point.compare(&k.int(5)), Comparison::Equal);
        assert!(c.strictly_decreasing && c.certificate.holds);
        let one = check_antitone_chain(&s, &chain[..1]).unwrap();
        assert_eq!(one.point.compare(&k.zero()), Comparison::Equal);
        let bad = vec![Ball::new(k.zero(), Radius::frac(1, 5)), Ball::new(k.int(1), Radius::frac(1, 5))];
        assert!(matches!(check_antitone_chain(&s, &bad), Err(Error::NotAChain(1))));
    }

    #[test]
    fn shrink_examples() {
        let p = 5;
        let k = Qp::new(p, 16).unwrap();
        let n = 8;
        let mut centers = Vec::new();
        let mut radii = Vec::new();
        let mut c = 0i64;
        for j in 0..n {
            c += 5i64.pow(j as u32);
            centers.push(k.int(c));
            radii.push(p_power_radius(p, j + 1));
        }
        let x = shrink_to_limit(p, &centers, &radii).unwrap();
        assert!(x.agrees_with(&k.rat(1, 1 - 5)));
        assert_eq!(x.abs_precision(), Some(n));

        let consts = vec![k.rat(2, 3); 5];
        let radii: Vec<Radius> = (0..5).map(|j| p_power_radius(p, j)).collect();
        assert!(shrink_to_limit(p, &consts, &radii).unwrap().agrees_with(&k.rat(2, 3)));
        let zeros = vec![k.zero(); 5];
        assert!(shrink_to_limit(p, &zeros, &radii).unwrap().is_zero_at_precision());
        let jump = vec![k.zero(), k.int(1)];
        assert!(matches!(shrink_to_limit(p, &jump, &radii[1..3]), Err(Error::NotAChain(1))));
    }

    #[test]
    fn tower_space_distances() {
        let s = TowerSpace { p: 2, prec: 16, level_cap: 1024 };
        let x = TowerElement::monomial(2, 2, 1, 16, 1024).unwrap();
        let y = TowerElement::monomial(2, 3, 1, 16, 1024).unwrap();
        assert_eq!(s.dist(&x, &y).unwrap(), NormValue::pow_p(2, BigRational::new(1.into(), 3.into())));
        assert!(s.within(&x, &y, &Radius::int(1)).unwrap());
    }
}
