//! Acceptance gate: ten pinned criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p ultrametric --test acceptance`. Each criterion
//! has a fixed seed, fixed instance counts and a wall-clock limit.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ultrametric::ballcalc::{PadicSpace, UltraSpace};
use ultrametric::eisenstein::norm_dense_witness;
use ultrametric::gen;
use ultrametric::harness::{self, exponent_pair, Sweep};
use ultrametric::linalg::{dist_to_subspace, is_immediate, transpose};
use ultrametric::padic::PadicNumber;
use ultrametric::polynomial::hensel_lift;

use common::{cmp_power, dist_oracle, eval_mod, exact, exact_vec, int_val, ppow, to_valuation, vec_val};

const PREC: u32 = 64;
const LEVEL_CAP: u32 = 1024;
const SEED: u64 = 0x5eed_2026;

struct Outcome {
    summary: String,
    sweeps: Vec<Sweep>,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.sweeps.iter().all(Sweep::passed)
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED + criterion)
}

fn ultrametric_axioms() -> Outcome {
    let mut r = rng(1);
    let mut sweeps = Vec::new();
    // distances in Q_p, cross-checked against valuations of the rational
    // differences
    for p in [2, 3, 5] {
        let mut sw = harness::ultrametric_padic(&mut r, p, 10_000, PREC);
        let mut oracle = Sweep::new(&format!("Q_{p} distance oracle"));
        let s = PadicSpace { p, prec: PREC };
        for _ in 0..1000 {
            let (x, y) = (gen::padic(&mut r, p, PREC), gen::padic(&mut r, p, PREC));
            oracle.trial(format!("{x}, {y}"), |o| {
                let want = to_valuation(common::rat_val(&(exact(&x) - exact(&y)), p));
                let got = s.dist(&x, &y)?.v;
                o.check(got == want, || format!("d = p^-({got}), oracle p^-({want})"));
                Ok(())
            });
        }
        sw.merge(oracle);
        sweeps.push(sw);
    }
    for (e, p) in [(2, 2), (3, 3), (4, 5)] {
        sweeps.push(harness::ultrametric_eis(&mut r, p, e, 10_000, PREC));
    }
    sweeps.push(harness::ultrametric_trees(&mut r, 20, 500, 200));
    let triples: usize = sweeps.iter().map(|s| s.checks).sum();
    Outcome { summary: format!("{triples} checks over Q_2, Q_3, Q_5, e = 2, 3, 4 and 20 trees"), sweeps }
}

fn finite_tree_harness() -> Outcome {
    let mut r = rng(2);
    let sw = harness::tree_families(&mut r, 100, 10, 200, 20);
    Outcome { summary: format!("{} families and chains on 100 trees", sw.trials), sweeps: vec![sw] }
}

fn distance_oracle() -> Outcome {
    let mut r = rng(3);
    let instances = 1000;
    let samples = (200_000 / instances).min(10_000);
    let mut oracle = Sweep::new("distance oracle");
    for _ in 0..instances {
        let p = *[2u64, 3, 5].choose(&mut r).unwrap();
        let n = r.gen_range(1..=4);
        let dim = r.gen_range(0..=2);
        let span = gen::span(&mut r, p, n, dim, 32);
        let x = gen::vector(&mut r, p, n, 32);
        oracle.trial(format!("p = {p}, n = {n}, dim = {dim}"), |o| {
            let got = dist_to_subspace(&x, &span)?.v;
            let span_q: Vec<_> = span.iter().map(|v| exact_vec(v)).collect();
            let want = to_valuation(dist_oracle(&exact_vec(&x), &span_q, p));
            o.check(got == want, || format!("valuation {got}, oracle {want}"));
            Ok(())
        });
    }
    let sampled = harness::dist_sampling(&mut r, instances, samples, 32);
    Outcome {
        summary: format!("{instances} oracle instances, {samples} samples per instance"),
        sweeps: vec![oracle, sampled],
    }
}

fn projection_contracts() -> Outcome {
    let mut r = rng(4);
    let sw = harness::projection_contracts(&mut r, 500, 20, 32);
    Outcome { summary: format!("{} subspaces, {} checks", sw.trials, sw.checks), sweeps: vec![sw] }
}

fn continuity_of_roots() -> Outcome {
    let mut r = rng(5);
    let sw = harness::roots_sweep(&mut r, 1000, 32, LEVEL_CAP);
    Outcome { summary: format!("{} factored pairs", sw.trials), sweeps: vec![sw] }
}

fn hensel_lifting() -> Outcome {
    let mut r = rng(6);
    let mut lib = harness::hensel_sweep(&mut r, 200, PREC);
    // the same kind of instances, with the lifted root checked by integer
    // arithmetic modulo p^target
    let mut oracle = Sweep::new("modular oracle");
    for _ in 0..200 {
        let p = *[2u64, 3, 5, 7].choose(&mut r).unwrap();
        let (f, a0) = gen::hensel_instance(&mut r, p, PREC);
        let target = r.gen_range(8..=24u32);
        oracle.trial(format!("f = {f}, a0 = {a0}"), |o| {
            let h = hensel_lift(&f, &a0, target)?;
            let coeffs: Vec<BigInt> = f.coeffs().iter().map(|c| common::as_int(&exact(c))).collect();
            let a0i = common::as_int(&exact(&a0));
            let m = ppow(p, target);
            let deriv: Vec<BigInt> = coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
            let val_mod = |c: &[BigInt]| {
                let v = eval_mod(c, &a0i, &ppow(p, PREC));
                if v.is_zero() { PREC } else { int_val(&v, p) as u32 }
            };
            let (delta, eps) = (val_mod(&deriv), val_mod(&coeffs));
            o.check(delta == h.delta, || format!("delta {} vs oracle {delta}", h.delta));
            let root = h.root.residue_mod(target - delta)?;
            o.check(eval_mod(&coeffs, &root, &m).is_zero(), || format!("f({root}) != 0 mod {p}^{target}"));
            let moved = (&root - &a0i).mod_floor(&ppow(p, target - delta));
            let need = eps.saturating_sub(delta).min(target - delta);
            let ok = moved.is_zero() || int_val(&moved, p) as u32 >= need;
            o.check(ok, || format!("root moved by {moved}, need valuation {need}"));
            Ok(())
        });
    }
    lib.merge(oracle);
    Outcome { summary: format!("{} lifts, {} checks", lib.trials, lib.checks), sweeps: vec![lib] }
}

fn norm_density() -> Outcome {
    let mut r = rng(7);
    let mut sw = harness::density_sweep(&mut r, 500, PREC, LEVEL_CAP);
    let mut oracle = Sweep::new("power comparison oracle");
    for _ in 0..500 {
        let p = *[2u64, 3, 5].choose(&mut r).unwrap();
        let (a, b) = gen::interval(&mut r);
        oracle.trial(format!("p = {p}, ({a}, {b})"), |o| {
            let z = norm_dense_witness(p, &a, &b, PREC, LEVEL_CAP)?;
            let (u, v) = exponent_pair(&z)?;
            let lo = cmp_power(p, u, v, a.value()).is_gt();
            let hi = cmp_power(p, u, v, b.value()).is_lt();
            o.check(lo && hi, || format!("p^(-{u}/{v}) outside ({a}, {b})"));
            Ok(())
        });
    }
    sw.merge(oracle);
    Outcome { summary: format!("{} intervals in (0, 4)", sw.trials / 2), sweeps: vec![sw] }
}

fn avoiding_chain() -> Outcome {
    let sw = harness::schikhof_sweep(2, 10, PREC, LEVEL_CAP);
    Outcome { summary: format!("p = 2, 10 steps, {} certified checks", sw.checks), sweeps: vec![sw] }
}

fn sequence_model() -> Outcome {
    let mut r = rng(9);
    let sw = harness::seq_sweep(&mut r, 10_000, 32);
    Outcome { summary: format!("{} sequence pairs", sw.trials), sweeps: vec![sw] }
}

fn immediacy() -> Outcome {
    let mut r = rng(10);
    let mut sw = harness::immediacy_sweep(&mut r, 200, 20, 32);
    let mut oracle = Sweep::new("witness oracle");
    for _ in 0..200 {
        let p = *[2u64, 3, 5].choose(&mut r).unwrap();
        let n = r.gen_range(2..=4);
        let k = r.gen_range(1..=2.min(n - 1));
        let a = gen::isometric_embedding(&mut r, p, n, k, 32);
        oracle.trial(format!("p = {p}, {n} x {k}"), |o| {
            let im = is_immediate(&a, &PadicNumber::zero(p, 32))?;
            o.check(!im.immediate, || "proper range reported immediate".into());
            let w = exact_vec(im.witness.as_ref().expect("witness"));
            let cols: Vec<_> = transpose(&a).iter().map(|c| exact_vec(c)).collect();
            let norm = vec_val(&w, p);
            o.check(norm.is_some() && dist_oracle(&w, &cols, p) == norm, || "witness is not orthogonal".into());
            Ok(())
        });
    }
    sw.merge(oracle);
    Outcome { summary: format!("{} embeddings", sw.trials), sweeps: vec![sw] }
}

type Criterion = (&'static str, u64, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("ultrametric axioms", 30, ultrametric_axioms),
        ("finite nested-ball harness", 60, finite_tree_harness),
        ("distance oracle equivalence", 120, distance_oracle),
        ("projection and extension contracts", 60, projection_contracts),
        ("continuity of roots", 120, continuity_of_roots),
        ("Hensel lifting", 30, hensel_lifting),
        ("norm density", 30, norm_density),
        ("avoiding chain", 60, avoiding_chain),
        ("sequence quotient model", 30, sequence_model),
        ("immediacy criterion", 30, immediacy),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = elapsed < Duration::from_secs(*limit);
        let ok = out.passed() && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}; {:.1}s of {}s)",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            out.summary,
            elapsed.as_secs_f64(),
            limit
        );
        for s in out.sweeps.iter().filter(|s| !s.passed()) {
            println!(
                "    {}: {} failures, {} errors; {}",
                s.name,
                s.failures,
                s.errors,
                s.first_problem.as_deref().unwrap_or("")
            );
        }
        if !in_time {
            println!("    over the time limit");
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
