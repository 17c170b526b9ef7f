//! Nested balls with empty intersection in the tower `Q_p(p^(1/e), e >= 1)`.
//!
//! A fixed level `Q_p(p^(1/e))` has discrete value group, so its balls have
//! diameters strictly below most radii. The tower has dense value group,
//! which lets every ball of radius `r0` contain two disjoint balls of any
//! smaller radius `r1`. Iterating that choice against a dense sequence
//! gives a chain of balls avoiding each listed point in turn.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::ballcalc::{check_antitone_chain, contains, formal_subset, Ball, TowerSpace, UltraSpace};
use crate::eisenstein::{find_rational_power_in, NormInterval, TowerElement};
use crate::error::{Error, Result};
use crate::padic::{ArithOp, Comparison};
use crate::report::Certificate;
use crate::scalar::Scalar;
use crate::valcore::{cmp_norm_radius, floor_to_value_group, fmt_rational, NormValue, Radius, Valuation};

/// Diameter of a closed ball of radius `r` at level `e`: the largest norm
/// `p^(-k/e)` not exceeding `r`.
pub fn ball_diameter(p: u64, e: u32, r: &Radius) -> Result<NormValue> {
    Ok(NormValue::new(p, floor_to_value_group(p, e, r)?))
}

#[derive(Clone, Debug, Serialize)]
pub struct GapSample {
    pub radius: Radius,
    pub diameter: NormValue,
    /// `(r - diam) / r`, present when the diameter is rational.
    pub gap: Option<String>,
    pub gap_approx: f64,
    pub has_gap: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GapProbe {
    pub p: u64,
    pub e: u32,
    pub samples: Vec<GapSample>,
    pub worst_gap: f64,
    pub any_gap: bool,
}

/// Exact `(r - p^(-q)) / r` when `q` is an integer.
fn rational_gap(p: u64, q: &BigRational, r: &Radius) -> Option<BigRational> {
    if !q.is_integer() {
        return None;
    }
    let k = q.to_integer().to_i64()?;
    let pk = BigRational::from_integer(num_traits::pow(BigInt::from(p), k.unsigned_abs() as usize));
    let diam = if k >= 0 { pk.recip() } else { pk };
    Some((r.value() - diam) / r.value())
}

/// Relative gaps between radius and diameter at a fixed level.
pub fn denseness_gap_probe(p: u64, e: u32, radii: &[Radius]) -> Result<GapProbe> {
    let mut samples = Vec::with_capacity(radii.len());
    for r in radii {
        let diameter = ball_diameter(p, e, r)?;
        let has_gap = cmp_norm_radius(&diameter, r)? == Ordering::Less;
        let q = diameter.v.finite().expect("diameter of a ball with positive radius is positive");
        let gap = rational_gap(p, q, r);
        let gap_approx = match &gap {
            Some(g) => g.to_f64().unwrap_or(f64::NAN),
            None => 1.0 - diameter.approx() / r.value().to_f64().unwrap_or(f64::NAN),
        };
        samples.push(GapSample { radius: r.clone(), diameter, gap: gap.as_ref().map(fmt_rational), gap_approx, has_gap });
    }
    let worst_gap = samples.iter().map(|s| s.gap_approx).fold(0.0, f64::max);
    let any_gap = samples.iter().any(|s| s.has_gap);
    Ok(GapProbe { p, e, samples, worst_gap, any_gap })
}

#[derive(Clone, Debug)]
pub struct GapFill {
    pub lo: Radius,
    pub hi: Radius,
    pub witness: TowerElement,
    pub norm: NormValue,
}

/// For each interval `(r1, r2)` an element of the tower with
/// `r1 < |z| < r2`, each re-checked exactly.
pub fn tower_gap_fill(p: u64, intervals: &[(Radius, Radius)], prec: u32, level_cap: u32) -> Result<Vec<GapFill>> {
    let mut out = Vec::with_capacity(intervals.len());
    for (lo, hi) in intervals {
        let witness = crate::eisenstein::norm_dense_witness(p, lo, hi, prec, level_cap)?;
        let norm = Scalar::norm(&witness)?;
        out.push(GapFill { lo: lo.clone(), hi: hi.clone(), witness, norm });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct AvoidStep {
    pub center: TowerElement,
    /// `w` with `r1 < |w| <= r0`; the two candidates are `c0` and `c0 + w`.
    pub offset: TowerElement,
    pub took_shifted: bool,
}

/// A ball `B(c1, r1) ⊆ B(c0, r0)` that misses `z`.
///
/// The candidates `B(c0, r1)` and `B(c0 + w, r1)` are disjoint because
/// `|w| > r1`, so `z` lies in at most one of them.
pub fn avoid_ball_step(
    c0: &TowerElement,
    r0: &Radius,
    r1: &Radius,
    z: &TowerElement,
    prec: u32,
) -> Result<AvoidStep> {
    if r1.is_zero() || r1 >= r0 {
        return Err(Error::RadiiInvalid(format!("need 0 < r1 < r0, got r0 = {r0}, r1 = {r1}")));
    }
    let p = c0.prime();
    let cap = c0.level_cap();
    let space = TowerSpace { p, prec, level_cap: cap };
    let (u, v) = find_rational_power_in(p, &NormInterval::open_closed(r1.clone(), r0.clone()))?;
    let w = TowerElement::monomial(p, v, u, prec, cap)?;
    let x2 = c0.arith(ArithOp::Add, &w)?.reduce_level();
    if space.within(c0, &x2, r1)? {
        return Err(Error::PreconditionFailed(format!("candidates at distance {} are not separated by {r1}", space.dist(c0, &x2)?)));
    }
    let took_shifted = space.within(c0, z, r1)?;
    let center = if took_shifted { x2 } else { c0.clone() };
    let small = Ball::new(center.clone(), r1.clone());
    if contains(&space, &small, z)? {
        return Err(Error::PreconditionFailed(format!("both candidate balls contain {}", space.render(z))));
    }
    if !formal_subset(&space, &small, &Ball::new(c0.clone(), r0.clone()))? {
        return Err(Error::PreconditionFailed("chosen ball leaves the enclosing ball".into()));
    }
    Ok(AvoidStep { center, offset: w, took_shifted })
}

/// Enumeration `i = Σ d_k p^k  ↦  Σ d_k π_4^k` of `Z[π_4]`, `π_4^4 = p`.
///
/// Digits lie in `0..p` and `π_4` is a uniformizer, so distinct indices
/// give distinct elements.
pub fn default_dense_sequence(p: u64, n: usize, prec: u32, level_cap: u32) -> Result<Vec<TowerElement>> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n as u64 {
        let mut acc = TowerElement::from_rational(p, &BigRational::zero(), prec, level_cap);
        let (mut rest, mut k) = (i, 0i64);
        while rest > 0 {
            let d = rest % p;
            if d != 0 {
                let term = TowerElement::monomial(p, 4, k, prec, level_cap)?
                    .arith(ArithOp::Mul, &TowerElement::from_rational(p, &BigRational::from_integer(d.into()), prec, level_cap))?;
                acc = acc.arith(ArithOp::Add, &term)?;
            }
            rest /= p;
            k += 1;
        }
        out.push(acc.reduce_level());
    }
    Ok(out)
}

/// `r_0 = 1`, `r_n = 1/2 + 1/(2(n+1))` for `1 <= n <= steps`.
pub fn default_radii(steps: usize) -> Vec<Radius> {
    (0..=steps as i64)
        .map(|n| if n == 0 { Radius::int(1) } else { Radius::frac(n + 2, 2 * (n + 1)) })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ChainStep {
    pub index: usize,
    pub center: TowerElement,
    pub radius: Radius,
    pub excluded: TowerElement,
}

#[derive(Clone, Debug)]
pub struct SchikhofChain {
    pub start: Ball<TowerElement>,
    pub steps: Vec<ChainStep>,
    pub certificates: Vec<Certificate>,
    pub max_level: u32,
}

impl SchikhofChain {
    pub fn all_hold(&self) -> bool {
        self.certificates.iter().all(|c| c.holds)
    }
}

fn check_radii(r: &[Radius]) -> Result<()> {
    let half = Radius::new(r[0].value() / BigRational::from_integer(2.into()))?;
    if r[0].is_zero() {
        return Err(Error::RadiiInvalid("r_0 must be positive".into()));
    }
    for n in 1..r.len() {
        if r[n] >= r[n - 1] {
            return Err(Error::RadiiInvalid(format!("r_{n} = {} is not below r_{} = {}", r[n], n - 1, r[n - 1])));
        }
        if r[n] <= half {
            return Err(Error::RadiiInvalid(format!("r_{n} = {} is not above r_0/2 = {half}", r[n])));
        }
    }
    Ok(())
}

/// Balls `B_0 ⊇ B_1 ⊇ ... ⊇ B_N` with `a_{n-1} ∉ B_n`, every invariant
/// re-checked on the finished chain.
pub fn schikhof_chain(
    dense_seq: &[TowerElement],
    radii: &[Radius],
    c0: &TowerElement,
    prec: u32,
) -> Result<SchikhofChain> {
    let n = dense_seq.len();
    if radii.len() != n + 1 {
        return Err(Error::RadiiInvalid(format!("need {} radii for {n} points, got {}", n + 1, radii.len())));
    }
    check_radii(radii)?;
    for i in 0..n {
        for j in 0..i {
            if dense_seq[i].compare(&dense_seq[j])? != Comparison::Distinct {
                return Err(Error::PreconditionFailed(format!("points {j} and {i} are not distinct at precision")));
            }
        }
    }
    let p = c0.prime();
    let space = TowerSpace { p, prec, level_cap: c0.level_cap() };
    let start = Ball::new(c0.clone(), radii[0].clone());
    let mut steps: Vec<ChainStep> = Vec::with_capacity(n);
    let mut center = c0.clone();
    for (i, a) in dense_seq.iter().enumerate() {
        let step = avoid_ball_step(&center, &radii[i], &radii[i + 1], a, prec)?;
        center = step.center;
        steps.push(ChainStep { index: i + 1, center: center.clone(), radius: radii[i + 1].clone(), excluded: a.clone() });
    }

    let mut balls = vec![start.clone()];
    balls.extend(steps.iter().map(|s| Ball::new(s.center.clone(), s.radius.clone())));
    let mut certs = Vec::new();
    let mut nested = 0;
    let mut excluded = 0;
    for s in &steps {
        if formal_subset(&space, &balls[s.index], &balls[s.index - 1])? {
            nested += 1;
        }
        if !contains(&space, &balls[s.index], &s.excluded)? {
            excluded += 1;
        }
    }
    certs.push(Certificate::new("chain/nested", nested, "==", n, nested == n));
    certs.push(Certificate::new("chain/excludes-previous-point", excluded, "==", n, excluded == n));
    let strict = radii.windows(2).all(|w| w[1] < w[0]);
    certs.push(Certificate::new("chain/radii-strictly-decreasing", strict, "==", true, strict));
    let half = Radius::new(radii[0].value() / BigRational::from_integer(2.into()))?;
    let min_r = radii.last().unwrap();
    certs.push(Certificate::new("chain/radii-above-half", min_r, ">", &half, *min_r > half));
    let check = check_antitone_chain(&space, &balls)?;
    certs.push(check.certificate);
    let last = balls.last().unwrap();
    let mut missed = 0;
    for a in dense_seq {
        if !contains(&space, last, a)? {
            missed += 1;
        }
    }
    certs.push(
        Certificate::new("chain/final-ball-avoids-sequence", missed, "==", n, missed == n)
            .with_witness(space.render(&last.center)),
    );
    let max_level = balls.iter().map(|b| b.center.level()).max().unwrap_or(1);
    Ok(SchikhofChain { start, steps, certificates: certs, max_level })
}

/// `true` when `q` is `1/v` times an integer, i.e. `p^(-q)` lies in the value
/// group of level `v`.
pub fn in_value_group(q: &Valuation, e: u32) -> bool {
    match q.finite() {
        Some(q) => (q * BigRational::from_integer(e.into())).is_integer(),
        None => true,
    }
}
