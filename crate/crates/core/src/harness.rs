//! Randomized verification sweeps, one per checked property family.
//!
//! Each sweep draws instances from [`crate::gen`], runs the library
//! operation and re-checks its contract. Failures and errors are counted;
//! the first one is kept as a diagnostic.

use std::fmt::Display;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::ballcalc::{check_antitone_chain, Ball, EisSpace, PadicSpace, TreeSpace, UltraSpace};
use crate::counterexample::{default_dense_sequence, default_radii, schikhof_chain};
use crate::eisenstein::{is_root_of_pure_power, norm_dense_witness, TowerElement};
use crate::error::{Error, Result};
use crate::gen;
use crate::linalg::{
    echelonize, hahn_banach_extend, is_immediate, is_morth, mat_mul, mat_vec, transpose, vec_agree, vec_norm, vec_scale,
    vec_sub,
};
use crate::padic::PadicNumber;
use crate::polynomial::{hensel_lift, roots_bound_part1, roots_bound_part2, Poly};
use crate::scalar::Scalar;
use crate::seqmodel::diagonal_embed;
use crate::valcore::{cmp_norm_radius, Radius, Valuation};

/// Tally of one sweep.
#[derive(Clone, Debug, Serialize)]
pub struct Sweep {
    pub name: String,
    pub trials: usize,
    pub checks: usize,
    pub failures: usize,
    pub errors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_problem: Option<String>,
}

impl Sweep {
    pub fn new(name: &str) -> Self {
        Sweep { name: name.to_string(), trials: 0, checks: 0, failures: 0, errors: 0, first_problem: None }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0 && self.errors == 0
    }

    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.first_problem.is_none() {
                self.first_problem = Some(format!("failed: {}", what()));
            }
        }
    }

    pub fn error(&mut self, e: &Error, ctx: impl Display) {
        self.errors += 1;
        if self.first_problem.is_none() {
            self.first_problem = Some(format!("error: {e} ({ctx})"));
        }
    }

    /// Runs one trial; an `Err` counts as an error.
    pub fn trial(&mut self, ctx: impl Display, f: impl FnOnce(&mut Sweep) -> Result<()>) {
        self.trials += 1;
        if let Err(e) = f(self) {
            self.error(&e, ctx);
        }
    }

    pub fn merge(&mut self, other: Sweep) {
        self.trials += other.trials;
        self.checks += other.checks;
        self.failures += other.failures;
        self.errors += other.errors;
        if self.first_problem.is_none() {
            self.first_problem = other.first_problem;
        }
    }
}

/// Strong triangle inequality and the isosceles property on one triple.
pub fn check_triple<S: UltraSpace>(sw: &mut Sweep, s: &S, x: &S::Point, y: &S::Point, z: &S::Point) -> Result<()> {
    let dxy = s.dist(x, y)?;
    let dyz = s.dist(y, z)?;
    let dxz = s.dist(x, z)?;
    let m = dxy.clone().max(dyz.clone());
    sw.check(dxz <= m, || format!("d(x,z) = {dxz} > max({dxy}, {dyz})"));
    if dxy != dyz {
        sw.check(dxz == m, || format!("isosceles: d(x,z) = {dxz}, max = {m}"));
    }
    Ok(())
}

pub fn ultrametric_padic<R: Rng>(rng: &mut R, p: u64, triples: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new(&format!("ultrametric/Q_{p}"));
    let s = PadicSpace { p, prec };
    for _ in 0..triples {
        let (x, y, z) = (gen::padic(rng, p, prec), gen::padic(rng, p, prec), gen::padic(rng, p, prec));
        sw.trial(format!("{x}, {y}, {z}"), |sw| check_triple(sw, &s, &x, &y, &z));
    }
    sw
}

pub fn ultrametric_eis<R: Rng>(rng: &mut R, p: u64, e: u32, triples: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new(&format!("ultrametric/Q_{p}(pi), pi^{e} = {p}"));
    let s = EisSpace { p, e, prec };
    for _ in 0..triples {
        let (x, y, z) = (gen::eis(rng, p, e, prec), gen::eis(rng, p, e, prec), gen::eis(rng, p, e, prec));
        sw.trial(format!("{x}, {y}, {z}"), |sw| check_triple(sw, &s, &x, &y, &z));
    }
    sw
}

pub fn ultrametric_trees<R: Rng>(rng: &mut R, trees: usize, triples: usize, max_leaves: usize) -> Sweep {
    let mut sw = Sweep::new("ultrametric/trees");
    for _ in 0..trees {
        let n = rng.gen_range(1..=max_leaves);
        let t = TreeSpace::random(rng, n);
        for _ in 0..triples {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            sw.trial(format!("leaves {x}, {y}, {z} of {t}"), |sw| check_triple(sw, &t, &x, &y, &z));
        }
    }
    sw
}

/// A random ball of the tree; with `focus` set, the ball contains it.
fn tree_ball<R: Rng>(rng: &mut R, t: &TreeSpace, focus: Option<usize>) -> Result<Ball<usize>> {
    let ds = t.distances();
    let r = Radius::new(ds.choose(rng).unwrap().clone())?;
    let c = match focus {
        None => rng.gen_range(0..t.len()),
        Some(f) => {
            let inside: Vec<usize> = t.ball_set(&Ball::new(f, r.clone())).ones().collect();
            *inside.choose(rng).unwrap()
        }
    };
    Ok(Ball::new(c, r))
}

/// Pairwise meeting ball families and antitone chains on random trees.
pub fn tree_families<R: Rng>(rng: &mut R, trees: usize, families: usize, max_leaves: usize, max_family: usize) -> Sweep {
    let mut sw = Sweep::new("balls/pairwise-to-total");
    let mut applicable = 0usize;
    for _ in 0..trees {
        let n = rng.gen_range(2..=max_leaves);
        let t = TreeSpace::random(rng, n);
        for k in 0..families {
            let size = rng.gen_range(1..=max_family);
            let focus = if k % 2 == 0 { Some(rng.gen_range(0..n)) } else { None };
            sw.trial(format!("family {k} on {t}"), |sw| {
                let fam: Vec<Ball<usize>> = (0..size).map(|_| tree_ball(rng, &t, focus)).collect::<Result<_>>()?;
                let fc = t.check_pairwise_to_total(&fam);
                if fc.applicable {
                    applicable += 1;
                }
                sw.check(fc.holds, || "pairwise meeting family has empty intersection".into());
                if let Some(c) = fc.common_point {
                    let all = fam.iter().all(|b| t.ball_set(b).contains(c));
                    sw.check(all, || format!("common point {c} misses a ball"));
                }
                Ok(())
            });
            sw.trial(format!("chain {k} on {t}"), |sw| {
                let mut chain = vec![tree_ball(rng, &t, None)?];
                for _ in 1..rng.gen_range(1..=10) {
                    let prev = chain.last().unwrap();
                    let smaller: Vec<&BigRational> = t.distances().iter().filter(|d| *d <= prev.radius.value()).collect();
                    let r = Radius::new((*smaller.choose(rng).unwrap()).clone())?;
                    let inside: Vec<usize> = t.ball_set(prev).ones().collect();
                    chain.push(Ball::new(*inside.choose(rng).unwrap(), r));
                }
                let cc = check_antitone_chain(&t, &chain)?;
                sw.check(cc.certificate.holds, || "chain center misses a ball".into());
                sw.check(t.chain_meets_at(&chain, cc.point), || "set intersection misses the chain point".into());
                Ok(())
            });
        }
    }
    sw.check(applicable > 0, || "no pairwise meeting family was generated".into());
    sw
}

fn small_coeffs<R: Rng>(rng: &mut R, p: u64, k: usize, prec: u32) -> Vec<PadicNumber> {
    (0..k).map(|_| gen::padic(rng, p, prec)).collect()
}

/// No sampled combination of the spanning vectors comes closer to `x`
/// than the computed distance, and the distance is attained.
pub fn dist_sampling<R: Rng>(rng: &mut R, instances: usize, samples: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new("linalg/distance-is-minimal");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let n = rng.gen_range(1..=4);
        let dim = rng.gen_range(0..=2);
        let span = gen::span(rng, p, n, dim, prec);
        let x = gen::vector(rng, p, n, prec);
        sw.trial(format!("p = {p}, n = {n}, dim = {dim}"), |sw| {
            let t = PadicNumber::zero(p, prec);
            let basis = echelonize(n, &span, &t)?;
            let (res, coeffs) = basis.reduce(&x)?;
            let d = vec_norm(p, &res)?;
            let attained = vec_sub(&x, &basis.combination(&coeffs)?)?;
            sw.check(vec_agree(&attained, &res)?, || "residual is not x minus a combination".into());
            sw.check(d <= vec_norm(p, &x)?, || "distance exceeds |x|".into());
            for _ in 0..samples {
                let l = small_coeffs(rng, p, span.len(), prec);
                let mut y = x.clone();
                for (c, v) in l.iter().zip(&span) {
                    y = vec_sub(&y, &vec_scale(c, v)?)?;
                }
                let got = vec_norm(p, &y)?;
                sw.check(got >= d, || format!("sample beats the distance: {got} < {d}"));
            }
            Ok(())
        });
    }
    sw
}

/// Projection and extension contracts on random subspaces.
pub fn projection_contracts<R: Rng>(rng: &mut R, instances: usize, samples: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new("linalg/projection-and-extension");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let n = rng.gen_range(1..=4);
        let dim = rng.gen_range(1..=n.min(3));
        let span = gen::span(rng, p, n, dim, prec);
        let m = rng.gen_range(1..=2);
        let map: Vec<Vec<PadicNumber>> = (0..m).map(|_| gen::vector(rng, p, n, prec)).collect();
        let xs: Vec<Vec<PadicNumber>> = (0..samples).map(|_| gen::vector(rng, p, n, prec)).collect();
        sw.trial(format!("p = {p}, n = {n}, dim = {dim}"), |sw| {
            let t = PadicNumber::zero(p, prec);
            let basis = echelonize(n, &span, &t)?;
            let proj = basis.projection()?;
            let sq = mat_mul(&proj, &proj)?;
            let idem = sq.iter().zip(&proj).all(|(a, b)| vec_agree(a, b).unwrap_or(false));
            sw.check(idem, || "P^2 != P".into());
            for v in &span {
                sw.check(vec_agree(&mat_vec(&proj, v)?, v)?, || "P v != v on the subspace".into());
            }
            for x in &xs {
                let px = mat_vec(&proj, x)?;
                sw.check(vec_norm(p, &px)? <= vec_norm(p, x)?, || "|Px| > |x|".into());
                let r = vec_sub(x, &px)?;
                sw.check(is_morth(&r, &span)?, || "x - Px is not orthogonal to the subspace".into());
            }
            let values: Vec<Vec<PadicNumber>> = span.iter().map(|v| mat_vec(&map, v)).collect::<Result<_>>()?;
            let hb = hahn_banach_extend(n, &span, &values, &t)?;
            let mut agree = hb.agrees_on_domain;
            for (v, fv) in span.iter().zip(&values) {
                agree &= vec_agree(&mat_vec(&hb.extension, v)?, fv)?;
            }
            sw.check(agree, || "extension disagrees on the subspace".into());
            sw.check(hb.extension_norm == hb.restricted_norm, || {
                format!("|F| = {} but |f| = {}", hb.extension_norm, hb.restricted_norm)
            });
            Ok(())
        });
    }
    sw
}

/// Both root-perturbation certificates on random factored pairs.
pub fn roots_sweep<R: Rng>(rng: &mut R, instances: usize, prec: u32, level_cap: u32) -> Sweep {
    let mut sw = Sweep::new("poly/continuity-of-roots");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let (fr, gr) = gen::factored_pair(rng, p, 5, &[1, 2, 3, 4, 8], prec, level_cap);
        let alpha = fr.choose(rng).unwrap().clone();
        sw.trial(format!("p = {p}, degree {}", fr.len()), |sw| {
            let f = Poly::from_roots(&fr, &alpha)?;
            let g = Poly::from_roots(&gr, &alpha)?;
            let c1 = roots_bound_part1(&f, &g, &alpha)?;
            sw.check(c1.holds, || format!("{} > {}", c1.lhs, c1.rhs));
            let c2 = roots_bound_part2(&fr, &gr, &alpha)?;
            sw.check(c2.holds, || format!("{} > {}", c2.lhs, c2.rhs));
            Ok(())
        });
    }
    sw
}

/// Newton lifting on random instances satisfying the Hensel condition.
pub fn hensel_sweep<R: Rng>(rng: &mut R, instances: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new("poly/hensel");
    for _ in 0..instances {
        let p = *[2u64, 3, 5, 7].choose(rng).unwrap();
        let (f, a0) = gen::hensel_instance(rng, p, prec);
        let target = rng.gen_range(8..=24u32);
        sw.trial(format!("f = {f}, a0 = {a0}, target {target}"), |sw| {
            let h = hensel_lift(&f, &a0, target)?;
            let last = *h.residual_vals.last().unwrap();
            sw.check(last >= target, || format!("residual valuation {last} < {target}"));
            for w in h.residual_vals.windows(2) {
                let want = (2 * w[0]).saturating_sub(2 * h.delta).min(target);
                sw.check(w[1] >= want, || format!("step from {} to {} (delta {})", w[0], w[1], h.delta));
            }
            let fr = f.eval(&h.root)?;
            let need = Valuation::int((target - h.delta) as i64);
            sw.check(fr.val_bound().lower() >= need, || format!("f(root) = {fr}"));
            Ok(())
        });
    }
    sw
}

/// Norm-density witnesses for random intervals in `(0, 4)`.
pub fn density_sweep<R: Rng>(rng: &mut R, instances: usize, prec: u32, level_cap: u32) -> Sweep {
    let mut sw = Sweep::new("eis/norm-density");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let (a, b) = gen::interval(rng);
        sw.trial(format!("p = {p}, ({a}, {b})"), |sw| {
            let z = norm_dense_witness(p, &a, &b, prec, level_cap)?;
            let n = Scalar::norm(&z)?;
            let inside = cmp_norm_radius(&n, &a)?.is_gt() && cmp_norm_radius(&n, &b)?.is_lt();
            sw.check(inside, || format!("|z| = {n} outside ({a}, {b})"));
            let (u, v) = exponent_pair(&z)?;
            sw.check(is_root_of_pure_power(&z, u, v)?, || format!("z^{v} != p^{u}"));
            Ok(())
        });
    }
    sw
}

/// `(u, v)` with `v(z) = u/v` in lowest terms.
pub fn exponent_pair(z: &TowerElement) -> Result<(i64, u32)> {
    let q = match z.valuation()? {
        Valuation::Finite(q) => q,
        Valuation::Infinite => return Err(Error::InvalidArgument("zero has no exponent".into())),
    };
    let u = q.numer().to_i64().ok_or_else(|| Error::InvalidArgument("exponent out of range".into()))?;
    let v = q.denom().to_u32().ok_or_else(|| Error::InvalidArgument("exponent out of range".into()))?;
    Ok((u, v))
}

/// The avoiding chain with the default radii and dense sequence.
pub fn schikhof_sweep(p: u64, steps: usize, prec: u32, level_cap: u32) -> Sweep {
    let mut sw = Sweep::new("witness/avoiding-chain");
    sw.trial(format!("p = {p}, {steps} steps"), |sw| {
        let seq = default_dense_sequence(p, steps, prec, level_cap)?;
        let c0 = TowerElement::from_rational(p, &BigRational::zero(), prec, level_cap);
        let chain = schikhof_chain(&seq, &default_radii(steps), &c0, prec)?;
        for c in &chain.certificates {
            sw.check(c.holds, || format!("{}: {} {} {}", c.claim, c.lhs, c.relation, c.rhs));
        }
        sw.check(chain.max_level <= level_cap, || format!("level {} above cap", chain.max_level));
        Ok(())
    });
    sw
}

/// Isometry, linearity and quotient-norm contracts on random sequences.
pub fn seq_sweep<R: Rng>(rng: &mut R, instances: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new("seq/quotient-model");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let m = rng.gen_range(1..=3);
        let a = gen::seqrep(rng, p, m, prec);
        let b = gen::seqrep(rng, p, m, prec);
        let z = gen::c0_seqrep(rng, p, m, prec);
        let x = gen::vector(rng, p, m, prec);
        let y = gen::vector(rng, p, m, prec);
        let c = gen::padic(rng, p, prec);
        sw.trial(format!("a = {a}, b = {b}"), |sw| {
            let ex = diagonal_embed(x.clone())?;
            sw.check(ex.quotient_norm()? == vec_norm(p, &x)?, || "embedding is not isometric".into());
            let sum = diagonal_embed(crate::linalg::vec_add(&x, &y)?)?;
            sw.check(sum.agrees(&ex.add(&diagonal_embed(y.clone())?)?)?, || "embedding is not additive".into());
            let sc = diagonal_embed(vec_scale(&c, &x)?)?;
            sw.check(sc.agrees(&ex.scale(&c)?)?, || "embedding is not homogeneous".into());
            let qa = a.quotient_norm()?;
            let qb = b.quotient_norm()?;
            let qs = a.add(&b)?.quotient_norm()?;
            sw.check(qs <= qa.clone().max(qb), || "quotient norm is not ultrametric".into());
            sw.check(a.add(&z)?.quotient_norm()? == qa, || "quotient norm changes under a null perturbation".into());
            let sup = a.sup_norm()?;
            sw.check(qa <= sup, || "quotient norm exceeds the sup norm".into());
            let prefix_small = a.prefix().iter().all(|v| vec_norm(p, v).map(|n| n <= qa).unwrap_or(false));
            sw.check((qa == sup) == prefix_small, || "equality case of quotient <= sup".into());
            sw.check(z.scale(&c)?.in_c0() && z.add(&z)?.in_c0(), || "null sequences are not an ideal".into());
            Ok(())
        });
    }
    sw
}

/// `is_immediate` against `k = n` on random isometric embeddings.
pub fn immediacy_sweep<R: Rng>(rng: &mut R, instances: usize, samples: usize, prec: u32) -> Sweep {
    let mut sw = Sweep::new("linalg/immediacy");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(rng).unwrap();
        let n = rng.gen_range(1..=4);
        let k = if rng.gen_bool(0.5) { n } else { rng.gen_range(1..=n) };
        let a = gen::isometric_embedding(rng, p, n, k, prec);
        let xs: Vec<Vec<PadicNumber>> = (0..samples).map(|_| gen::vector(rng, p, k, prec)).collect();
        sw.trial(format!("p = {p}, {n} x {k}"), |sw| {
            let t = PadicNumber::zero(p, prec);
            for x in &xs {
                sw.check(vec_norm(p, &mat_vec(&a, x)?)? == vec_norm(p, x)?, || "embedding is not isometric".into());
            }
            let im = is_immediate(&a, &t)?;
            sw.check(im.immediate == (k == n), || format!("immediate = {} for k = {k}, n = {n}", im.immediate));
            if let Some(w) = &im.witness {
                let cols = transpose(&a);
                let nonzero = !crate::linalg::is_zero_vec(w);
                sw.check(nonzero && is_morth(w, &cols)?, || "witness is zero or not orthogonal".into());
            }
            Ok(())
        });
    }
    sw
}

/// Every sweep at a common scale: `trials` instances each.
pub fn verify_all<R: Rng>(rng: &mut R, trials: usize, prec: u32, level_cap: u32) -> Vec<Sweep> {
    let mut out = Vec::new();
    let mut um = Sweep::new("ultrametric");
    for p in [2, 3, 5] {
        um.merge(ultrametric_padic(rng, p, trials, prec));
    }
    for e in [2, 3, 4] {
        um.merge(ultrametric_eis(rng, 2, e, trials, prec));
    }
    um.merge(ultrametric_trees(rng, 4, trials, 60));
    out.push(um);
    out.push(tree_families(rng, 4, trials.div_ceil(4), 60, 10));
    out.push(dist_sampling(rng, trials, 20, prec));
    out.push(projection_contracts(rng, trials, 5, prec));
    out.push(roots_sweep(rng, trials, prec, level_cap));
    out.push(hensel_sweep(rng, trials, prec));
    out.push(density_sweep(rng, trials, prec, level_cap));
    out.push(schikhof_sweep(2, 10, prec, level_cap));
    out.push(seq_sweep(rng, trials, prec));
    out.push(immediacy_sweep(rng, trials, 5, prec));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_verify_all_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for s in verify_all(&mut rng, 10, 32, 1024) {
            assert!(s.passed(), "{s:?}");
        }
    }
}
