//! One handler per subcommand. Each parses its inputs, records them in
//! canonical form, computes, and attaches the certificates that back the
//! answer.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use ultrametric::ballcalc::{
    check_antitone_chain, dichotomy_check, formal_subset, Ball, EisSpace, PadicSpace, TowerSpace, TreeSpace,
    UltraSpace,
};
use ultrametric::counterexample::{default_dense_sequence, default_radii, schikhof_chain};
use ultrametric::eisenstein::{is_root_of_pure_power, norm_dense_witness, EisElement, TowerElement};
use ultrametric::harness::{exponent_pair, verify_all};
use ultrametric::linalg::{
    echelonize, fmt_matrix, fmt_vector, hahn_banach_extend, is_immediate, is_morth, is_orth, mat_mul, mat_vec,
    operator_norm, parse_matrix, parse_vector, vec_agree, vec_norm, vec_sub,
};
use ultrametric::padic::{arith, ArithOp, Comparison, PadicNumber, Qp};
use ultrametric::polynomial::{gauss_dominates_eval, hensel_lift, roots_bound_part1, roots_bound_part2, Poly};
use ultrametric::report::Certificate;
use ultrametric::seqmodel::{diagonal_embed, SeqRep};
use ultrametric::valcore::cmp_norm_radius;
use ultrametric::{Error, NormValue, Radius, Result, Scalar};

use crate::report::Report;
use crate::{BallsCmd, Cli, Cmd, EisCmd, LinalgCmd, PadicCmd, PolyCmd, SeqCmd, SpaceKind, VerifyCmd, WitnessCmd};

pub fn run(cli: &Cli, rep: &mut Report) -> Result<()> {
    rep.input("prec", cli.prec);
    match &cli.cmd {
        Cmd::Padic(c) => padic(cli, c, rep),
        Cmd::Eis(c) => eis(cli, c, rep),
        Cmd::Poly(c) => poly(cli, c, rep),
        Cmd::Balls(c) => balls(cli, c, rep),
        Cmd::Linalg(c) => linalg(cli, c, rep),
        Cmd::Witness(c) => witness(cli, c, rep),
        Cmd::Seq(c) => seq(cli, c, rep),
        Cmd::Verify(c) => verify(cli, c, rep),
    }
}

fn field(cli: &Cli, rep: &mut Report) -> Result<Qp> {
    let p = cli.prime.ok_or_else(|| Error::InvalidArgument("--prime is required".into()))?;
    let q = Qp::new(p, cli.prec)?;
    rep.input("prime", p);
    Ok(q)
}

fn same(a: &PadicNumber, b: &PadicNumber) -> bool {
    a.compare(b) != Comparison::Distinct && a.val_int() == b.val_int()
}

fn round_trip_padic(rep: &mut Report, what: &str, x: &PadicNumber) {
    let s = x.to_string();
    let ok = PadicNumber::parse(&s, x.prime(), x.cap()).is_ok_and(|b| same(&b, x));
    rep.round_trip(what, &s, ok);
}

fn round_trip_norm(rep: &mut Report, what: &str, n: &NormValue) {
    let s = n.to_string();
    let ok = NormValue::parse(&s, Some(n.p)).is_ok_and(|b| &b == n);
    rep.round_trip(what, &s, ok);
}

/// `v_p(n)` for a nonzero integer, by repeated division.
fn int_valuation(n: &BigInt, p: u64) -> i64 {
    let p = BigInt::from(p);
    let zero = BigInt::from(0);
    let (mut n, mut v) = (n.clone(), 0);
    while &n % &p == zero {
        n /= &p;
        v += 1;
    }
    v
}

fn padic(cli: &Cli, c: &PadicCmd, rep: &mut Report) -> Result<()> {
    let q = field(cli, rep)?;
    match c {
        PadicCmd::Norm { value } => {
            let x = q.parse(value)?;
            rep.input("value", &x);
            let n = x.norm()?;
            rep.text("valuation", x.valuation()?);
            rep.text("norm", &n);
            if let Some(e) = x.exact_value() {
                let v = int_valuation(e.numer(), q.p) - int_valuation(e.denom(), q.p);
                let want = NormValue::new(q.p, ultrametric::Valuation::int(v));
                rep.certify(Certificate::new("padic/norm-of-rational", &n, "==", &want, n == want));
            } else {
                let want = NormValue::new(q.p, x.val_bound().certified("value")?);
                rep.certify(Certificate::new("padic/norm-from-digits", &n, "==", &want, n == want));
            }
            round_trip_norm(rep, "norm", &n);
            round_trip_padic(rep, "value", &x);
        }
        PadicCmd::Arith { op, a, b } => {
            let o: ArithOp = op.parse()?;
            let (x, y) = (q.parse(a)?, q.parse(b)?);
            rep.input("op", op);
            rep.input("a", &x);
            rep.input("b", &y);
            let z = arith(o, &x, &y)?;
            rep.text("value", &z);
            rep.text("precision", z.precision());
            certify_arith(rep, o, &x, &y, &z)?;
            round_trip_padic(rep, "value", &z);
        }
    }
    Ok(())
}

/// `|xy| = |x||y|` for products and quotients; the strong triangle
/// inequality for sums and differences.
fn certify_arith<F: Scalar>(rep: &mut Report, o: ArithOp, x: &F, y: &F, z: &F) -> Result<()> {
    let p = x.prime();
    match o {
        ArithOp::Mul | ArithOp::Div => {
            let (nx, ny) = (x.norm()?, y.norm()?);
            let want = if o == ArithOp::Mul { nx.mul(&ny) } else { nx.div(&ny)? };
            let got = if z.is_zero_at_precision() { NormValue::zero(p) } else { z.norm()? };
            rep.certify(Certificate::new("norm/multiplicative", &got, "==", &want, got == want));
        }
        ArithOp::Add | ArithOp::Sub => {
            let lo = z.val_bound().lower();
            let bound = x.val_bound().lower().min(y.val_bound().lower());
            let (l, r) = (NormValue::new(p, lo.clone()), NormValue::new(p, bound.clone()));
            rep.certify(Certificate::new("norm/strong-triangle", &l, "<=", &r, lo >= bound));
        }
    }
    Ok(())
}

fn eis(cli: &Cli, c: &EisCmd, rep: &mut Report) -> Result<()> {
    let q = field(cli, rep)?;
    let parse = |s: &str| EisElement::parse(s, q.p, q.prec);
    let round_trip = |rep: &mut Report, what: &str, z: &EisElement| {
        let s = z.to_string();
        let ok = parse(&s).is_ok_and(|b| b.level() == z.level() && b.compare(z) != Comparison::Distinct);
        rep.round_trip(what, &s, ok);
    };
    match c {
        EisCmd::Arith { op, a, b } => {
            let o: ArithOp = op.parse()?;
            let (x, y) = (parse(a)?, parse(b)?);
            rep.input("op", op);
            rep.input("a", &x);
            rep.input("b", &y);
            let z = x.arith(o, &y)?;
            rep.text("value", &z);
            rep.result("level", z.level());
            let (tx, ty, tz) = [&x, &y, &z].map(|v| TowerElement::new(v.clone(), cli.level_cap)).into();
            certify_arith(rep, o, &tx?, &ty?, &tz?)?;
            round_trip(rep, "value", &z);
        }
        EisCmd::Valuation { value } => {
            let x = parse(value)?;
            rep.input("value", &x);
            let v = x.valuation()?;
            rep.text("valuation", &v);
            rep.text("norm", x.norm()?);
            let e = x.level();
            let ok = ultrametric::counterexample::in_value_group(&v, e);
            rep.certify(Certificate::new("eis/valuation-in-value-group", &v, "in", format!("(1/{e})Z"), ok));
            round_trip(rep, "value", &x);
        }
        EisCmd::Lift { value, to } => {
            let x = parse(value)?;
            rep.input("value", &x);
            rep.input("to", to);
            let y = x.lift(*to, cli.level_cap)?;
            rep.text("value", &y);
            let (vx, vy) = (x.valuation()?, y.valuation()?);
            rep.certify(Certificate::new("eis/lift-is-isometric", &vy, "==", &vx, vx == vy));
            round_trip(rep, "value", &y);
        }
    }
    Ok(())
}

/// A tower element; plain p-adic literals are read at level 1.
fn tower(s: &str, q: &Qp, cap: u32) -> Result<TowerElement> {
    let inner = if s.contains('@') {
        EisElement::parse(s, q.p, q.prec)?
    } else {
        EisElement::from_padic(&q.parse(s)?, 1)
    };
    TowerElement::new(inner, cap)
}

fn tower_list(s: &str, q: &Qp, cap: u32) -> Result<Vec<TowerElement>> {
    s.split(';').map(|t| tower(t.trim(), q, cap)).collect()
}

fn poly(cli: &Cli, c: &PolyCmd, rep: &mut Report) -> Result<()> {
    let q = field(cli, rep)?;
    let parse_poly = |s: &str| Poly::parse_padic(s, q.p, q.prec);
    let round_trip = |rep: &mut Report, what: &str, f: &Poly<PadicNumber>| {
        let s = f.to_string();
        let ok = parse_poly(&s).and_then(|g| g.sub(f)).is_ok_and(|d| d.is_zero());
        rep.round_trip(what, &s, ok);
    };
    match c {
        PolyCmd::GaussNorm { f, alpha } => {
            let f = parse_poly(f)?;
            let a = q.parse(alpha)?;
            rep.input("f", &f);
            rep.input("alpha", &a);
            if a.norm()? > NormValue::one(q.p) {
                return Err(Error::PreconditionFailed(format!("|alpha| = {} exceeds 1", a.norm()?)));
            }
            let n = f.gauss_norm()?;
            rep.text("gauss_norm", &n);
            rep.certify(gauss_dominates_eval(&f, &a)?);
            round_trip(rep, "f", &f);
            round_trip_norm(rep, "gauss_norm", &n);
        }
        PolyCmd::Hensel { f, a0, target } => {
            let f = parse_poly(f)?;
            let a0 = q.parse(a0)?;
            rep.input("f", &f);
            rep.input("a0", &a0);
            rep.input("target", target);
            let h = hensel_lift(&f, &a0, *target)?;
            rep.text("root", &h.root);
            rep.result("delta", h.delta);
            rep.result("residual_valuations", json!(h.residual_vals));
            let last = *h.residual_vals.last().unwrap_or(&0);
            rep.certify(Certificate::new("hensel/residual-reaches-target", last, ">=", target, last >= *target));
            let slow = h
                .residual_vals
                .windows(2)
                .filter(|w| w[1] < (2 * w[0]).saturating_sub(2 * h.delta).min(*target))
                .count();
            rep.certify(Certificate::new(
                "hensel/quadratic-convergence",
                format!("{slow} slow steps"),
                "==",
                "0",
                slow == 0,
            ));
            // |root - a0| <= |f(a0)| / |f'(a0)|, up to the precision of the root
            let eps = f.eval(&a0)?.val_int().unwrap_or(i64::from(*target));
            let need = (eps - i64::from(h.delta)).min(i64::from(*target - h.delta));
            let moved = h.root.try_sub(&a0)?;
            let holds = moved.is_zero_at_precision() || moved.val_int().is_some_and(|v| v >= need);
            let lhs = moved.val_int().map_or("inf".to_string(), |v| v.to_string());
            rep.certify(Certificate::new("hensel/distance-bound", format!("v(root - a0) = {lhs}"), ">=", need, holds));
            round_trip_padic(rep, "root", &h.root);
        }
        PolyCmd::RootsBound { part, f, g, f_roots, g_roots, alpha } => {
            rep.input("part", part);
            if *part == 1 {
                let need = |o: &Option<String>, n: &str| {
                    o.clone().ok_or_else(|| Error::InvalidArgument(format!("--{n} is required for part 1")))
                };
                let f = parse_poly(&need(f, "f")?)?;
                let g = parse_poly(&need(g, "g")?)?;
                let a = q.parse(alpha)?;
                rep.input("f", &f);
                rep.input("g", &g);
                rep.input("alpha", &a);
                rep.certify(roots_bound_part1(&f, &g, &a)?);
                round_trip(rep, "f", &f);
                round_trip(rep, "g", &g);
            } else {
                let need = |o: &Option<String>, n: &str| {
                    o.clone().ok_or_else(|| Error::InvalidArgument(format!("--{n} is required for part 2")))
                };
                let fr = tower_list(&need(f_roots, "f-roots")?, &q, cli.level_cap)?;
                let gr = tower_list(&need(g_roots, "g-roots")?, &q, cli.level_cap)?;
                let a = tower(alpha, &q, cli.level_cap)?;
                let show = |v: &[TowerElement]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ");
                rep.input("f_roots", show(&fr));
                rep.input("g_roots", show(&gr));
                rep.input("alpha", &a);
                rep.certify(roots_bound_part2(&fr, &gr, &a)?);
            }
        }
    }
    Ok(())
}

fn balls(cli: &Cli, c: &BallsCmd, rep: &mut Report) -> Result<()> {
    let BallsCmd::Check { space, file } = c;
    let text = std::fs::read_to_string(file)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", file.display())))?;
    let mut tree = None;
    let mut specs = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(t) = line.strip_prefix("tree ") {
            tree = Some(TreeSpace::parse(t)?);
        } else if let Some(b) = line.strip_prefix("ball ") {
            let (r, center) = b
                .trim()
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("expected 'ball RADIUS CENTER', got {line:?}")))?;
            specs.push((Radius::parse(r)?, center.trim().to_string()));
        } else {
            return Err(Error::Parse(format!("unrecognized line {line:?}")));
        }
    }
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no balls in the file".into()));
    }
    rep.input("space", format!("{space:?}").to_lowercase());
    match space {
        SpaceKind::Qp => {
            let q = field(cli, rep)?;
            check_balls(&PadicSpace { p: q.p, prec: q.prec }, &specs, rep)?;
        }
        SpaceKind::Eis => {
            let q = field(cli, rep)?;
            let e = EisElement::parse(&specs[0].1, q.p, q.prec)?.level();
            check_balls(&EisSpace { p: q.p, e, prec: q.prec }, &specs, rep)?;
        }
        SpaceKind::Tower => {
            let q = field(cli, rep)?;
            check_balls(&TowerSpace { p: q.p, prec: q.prec, level_cap: cli.level_cap }, &specs, rep)?;
        }
        SpaceKind::Tree => {
            let t = tree.ok_or_else(|| Error::InvalidArgument("a tree space needs a 'tree ...' line".into()))?;
            rep.input("tree", &t);
            let balls = check_balls(&t, &specs, rep)?;
            let fam = t.check_pairwise_to_total(&balls);
            let common = fam.common_point.map_or("none".to_string(), |x| t.label(x).to_string());
            let lhs = if fam.applicable { "pairwise intersecting" } else { "not pairwise intersecting" };
            rep.certify(
                Certificate::new("balls/pairwise-meeting-family-has-common-point", lhs, "implies", "common point", fam.holds)
                    .with_witness(common),
            );
        }
    }
    Ok(())
}

/// Dichotomy for every pair, plus the chain check when the balls are nested.
fn check_balls<S: UltraSpace>(s: &S, specs: &[(Radius, String)], rep: &mut Report) -> Result<Vec<Ball<S::Point>>> {
    let balls: Vec<Ball<S::Point>> =
        specs.iter().map(|(r, c)| Ok(Ball::new(s.parse_point(c)?, r.clone()))).collect::<Result<_>>()?;
    let shown: Vec<String> = balls.iter().map(|b| format!("B({}, {})", s.render(&b.center), b.radius)).collect();
    rep.input("balls", shown.join("; "));
    for i in 0..balls.len() {
        for j in i + 1..balls.len() {
            rep.certify(dichotomy_check(s, &balls[i], &balls[j])?.with_witness(format!("balls {i} and {j}")));
        }
    }
    let mut order: Vec<usize> = (0..balls.len()).collect();
    order.sort_by(|&a, &b| balls[b].radius.cmp(&balls[a].radius));
    let chain: Vec<Ball<S::Point>> = order.iter().map(|&i| balls[i].clone()).collect();
    let mut nested = true;
    for w in chain.windows(2) {
        nested &= formal_subset(s, &w[1], &w[0])?;
    }
    rep.result("nested", nested);
    if nested && chain.len() > 1 {
        rep.certify(check_antitone_chain(s, &chain)?.certificate);
    }
    for (i, b) in balls.iter().enumerate() {
        let text = s.render(&b.center);
        let ok = s.parse_point(&text).and_then(|x| s.dist(&x, &b.center).map(|_| s.within(&x, &b.center, &Radius::zero())));
        rep.round_trip(&format!("center-{i}"), &text, matches!(ok, Ok(Ok(true))));
    }
    Ok(balls)
}

fn linalg(cli: &Cli, c: &LinalgCmd, rep: &mut Report) -> Result<()> {
    let q = field(cli, rep)?;
    let entry = |s: &str| q.parse(s);
    let vector = |s: &str| parse_vector(s, &entry);
    let matrix = |s: &str| parse_matrix(s, &entry);
    let p = q.p;
    match c {
        LinalgCmd::Dist { x, span } => {
            let x = vector(x)?;
            let span = match span {
                Some(s) => matrix(s)?,
                None => Vec::new(),
            };
            check_width(&span, x.len())?;
            rep.input("x", fmt_vector(&x));
            rep.input("span", fmt_matrix(&span));
            let b = echelonize(x.len(), &span, &q.zero())?;
            let d = b.dist(&x)?;
            let (r, _) = b.reduce(&x)?;
            rep.text("distance", &d);
            rep.text("residual", fmt_vector(&r));
            let nr = vec_norm(p, &r)?;
            rep.certify(Certificate::new("distance/attained-by-residual", &nr, "==", &d, nr == d));
            let orth = is_zero_vec_or(&r, || is_morth(&r, &span))?;
            rep.certify(Certificate::new("distance/residual-orthogonal", orth, "==", true, orth));
            let nx = vec_norm(p, &x)?;
            rep.certify(Certificate::new("distance/at-most-norm", &d, "<=", &nx, d <= nx));
            round_trip_norm(rep, "distance", &d);
        }
        LinalgCmd::Orth { x, y } => {
            let (x, y) = (vector(x)?, vector(y)?);
            if x.len() != y.len() {
                return Err(Error::DegreeMismatch(x.len(), y.len()));
            }
            rep.input("x", fmt_vector(&x));
            rep.input("y", fmt_vector(&y));
            let span = vec![y.clone()];
            let d = ultrametric::linalg::dist_to_subspace(&x, &span)?;
            let nx = vec_norm(p, &x)?;
            let xy = is_orth(&x, &y)?;
            let yx = is_orth(&y, &x)?;
            rep.result("orthogonal", xy);
            let rel = if xy { "==" } else { "<" };
            let decided = if xy { d == nx } else { d < nx };
            rep.certify(Certificate::new("orthogonality/decided", format!("d(x, span y) = {d}"), rel, format!("|x| = {nx}"), decided));
            rep.certify(Certificate::new("orthogonality/symmetric", format!("x _|_ y: {xy}"), "==", format!("y _|_ x: {yx}"), xy == yx));
        }
        LinalgCmd::Project { span, x } => {
            let span = matrix(span)?;
            let n = span[0].len();
            rep.input("span", fmt_matrix(&span));
            let b = echelonize(n, &span, &q.zero())?;
            let proj = b.projection()?;
            rep.text("projection", fmt_matrix(&proj));
            rep.result("rank", b.rank());
            let pp = mat_mul(&proj, &proj)?;
            let idem = rows_agree(&pp, &proj)?;
            rep.certify(Certificate::new("projection/idempotent", "P^2", "==", "P", idem));
            let mut fixed = 0;
            for v in &span {
                if vec_agree(&mat_vec(&proj, v)?, v)? {
                    fixed += 1;
                }
            }
            rep.certify(Certificate::new("projection/identity-on-span", fixed, "==", span.len(), fixed == span.len()));
            let on = operator_norm(p, &proj)?;
            let one = NormValue::one(p);
            rep.certify(Certificate::new("projection/contraction", &on, "<=", &one, on <= one));
            if let Some(x) = x {
                let x = vector(x)?;
                if x.len() != n {
                    return Err(Error::DegreeMismatch(x.len(), n));
                }
                rep.input("x", fmt_vector(&x));
                let px = mat_vec(&proj, &x)?;
                rep.text("image", fmt_vector(&px));
                let rest = vec_sub(&x, &px)?;
                let (dr, nr) = (b.dist(&rest)?, vec_norm(p, &rest)?);
                rep.certify(Certificate::new("projection/residual-orthogonal", &dr, "==", &nr, dr == nr));
            }
        }
        LinalgCmd::HahnBanach { span, values } => {
            let span = matrix(span)?;
            let values = matrix(values)?;
            if values.len() != span.len() {
                return Err(Error::InvalidArgument(format!("{} values for {} spanning vectors", values.len(), span.len())));
            }
            let n = span[0].len();
            rep.input("span", fmt_matrix(&span));
            rep.input("values", fmt_matrix(&values));
            let hb = hahn_banach_extend(n, &span, &values, &q.zero())?;
            rep.text("extension", fmt_matrix(&hb.extension));
            rep.certify(Certificate::new("hahn-banach/agrees-on-domain", hb.agrees_on_domain, "==", true, hb.agrees_on_domain));
            let same = hb.extension_norm == hb.restricted_norm;
            rep.certify(Certificate::new("hahn-banach/norm-preserved", &hb.extension_norm, "==", &hb.restricted_norm, same));
        }
        LinalgCmd::Immediate { matrix: a } => {
            let a = matrix(a)?;
            rep.input("matrix", fmt_matrix(&a));
            let (n, k) = (a.len(), a[0].len());
            let im = is_immediate(&a, &q.zero())?;
            rep.result("immediate", im.immediate);
            if let Some(w) = &im.witness {
                rep.text("witness", fmt_vector(w));
            }
            rep.certify(im.certificate.clone());
            let ok = im.immediate == (k == n);
            rep.certify(Certificate::new("immediacy/iff-square", format!("immediate: {}", im.immediate), "==", format!("k = n: {}", k == n), ok));
        }
    }
    Ok(())
}

fn check_width(span: &[Vec<PadicNumber>], n: usize) -> Result<()> {
    match span.iter().find(|v| v.len() != n) {
        Some(v) => Err(Error::DegreeMismatch(v.len(), n)),
        None => Ok(()),
    }
}

fn is_zero_vec_or(r: &[PadicNumber], f: impl FnOnce() -> Result<bool>) -> Result<bool> {
    if ultrametric::linalg::is_zero_vec(r) {
        Ok(true)
    } else {
        f()
    }
}

fn rows_agree(a: &[Vec<PadicNumber>], b: &[Vec<PadicNumber>]) -> Result<bool> {
    for (x, y) in a.iter().zip(b) {
        if !vec_agree(x, y)? {
            return Ok(false);
        }
    }
    Ok(a.len() == b.len())
}

fn witness(cli: &Cli, c: &WitnessCmd, rep: &mut Report) -> Result<()> {
    match c {
        WitnessCmd::NormDense { a, b } => {
            let q = field(cli, rep)?;
            let (a, b) = (Radius::parse(a)?, Radius::parse(b)?);
            rep.input("a", &a);
            rep.input("b", &b);
            rep.input("level_cap", cli.level_cap);
            let z = norm_dense_witness(q.p, &a, &b, q.prec, cli.level_cap)?;
            let n = Scalar::norm(&z)?;
            let (u, v) = exponent_pair(&z)?;
            rep.text("witness", &z);
            rep.text("norm", &n);
            rep.result("level", z.level());
            rep.text("exponent", format!("{u}/{v}"));
            rep.certify(Certificate::new("norm-density/above-lower-end", &n, ">", &a, cmp_norm_radius(&n, &a)?.is_gt()));
            rep.certify(Certificate::new("norm-density/below-upper-end", &n, "<", &b, cmp_norm_radius(&n, &b)?.is_lt()));
            let pure = is_root_of_pure_power(&z, u, v)?;
            rep.certify(Certificate::new("norm-density/pure-power", format!("z^{v}"), "==", format!("{}^{u}", q.p), pure));
            round_trip_norm(rep, "norm", &n);
        }
        WitnessCmd::Schikhof { steps, radii, center } => {
            let p = cli.prime.unwrap_or(2);
            let q = Qp::new(p, cli.prec)?;
            rep.input("prime", p);
            let radii = match radii {
                Some(s) => s.split(',').map(|r| Radius::parse(r.trim())).collect::<Result<Vec<_>>>()?,
                None => default_radii(*steps),
            };
            if radii.len() < 2 {
                return Err(Error::RadiiInvalid("need at least r0 and r1".into()));
            }
            let n = radii.len() - 1;
            let c0 = match center {
                Some(s) => tower(s, &q, cli.level_cap)?,
                None => TowerElement::from_rational(p, &BigRational::from_integer(0.into()), q.prec, cli.level_cap),
            };
            rep.input("radii", radii.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", "));
            rep.input("center", &c0);
            rep.input("level_cap", cli.level_cap);
            let seq = default_dense_sequence(p, n, q.prec, cli.level_cap)?;
            let chain = schikhof_chain(&seq, &radii, &c0, q.prec)?;
            let steps: Vec<Value> = chain
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "index": s.index,
                        "center": s.center.to_string(),
                        "radius": s.radius.to_string(),
                        "excluded": s.excluded.to_string(),
                    })
                })
                .collect();
            rep.result("steps", steps);
            rep.result("max_level", chain.max_level);
            for cert in &chain.certificates {
                rep.certify(cert.clone());
            }
            let space = TowerSpace { p, prec: q.prec, level_cap: cli.level_cap };
            if let Some(last) = chain.steps.last() {
                let s = last.center.to_string();
                let ok = space.parse_point(&s).and_then(|x| x.compare(&last.center)).is_ok_and(|c| c != Comparison::Distinct);
                rep.round_trip("last-center", &s, ok);
            }
        }
    }
    Ok(())
}

fn seq(cli: &Cli, c: &SeqCmd, rep: &mut Report) -> Result<()> {
    let q = field(cli, rep)?;
    let entry = |s: &str| q.parse(s);
    let p = q.p;
    match c {
        SeqCmd::QuotientNorm { seq } => {
            let a = SeqRep::parse(seq, &entry)?;
            rep.input("seq", &a);
            let (qn, sup) = (a.quotient_norm()?, a.sup_norm()?);
            rep.text("quotient_norm", &qn);
            rep.text("sup_norm", &sup);
            rep.result("null_sequence", a.in_c0());
            rep.certify(Certificate::new("sequence/quotient-at-most-sup", &qn, "<=", &sup, qn <= sup));
            let tail = SeqRep::constant(a.tail().to_vec())?.quotient_norm()?;
            rep.certify(Certificate::new("sequence/quotient-ignores-prefix", &qn, "==", &tail, qn == tail));
            let s = a.to_string();
            let ok = SeqRep::parse(&s, &entry).and_then(|b| b.agrees(&a)).unwrap_or(false);
            rep.round_trip("seq", &s, ok);
        }
        SeqCmd::Embed { x } => {
            let x = parse_vector(x, &entry)?;
            rep.input("x", fmt_vector(&x));
            let s = diagonal_embed(x.clone())?;
            rep.text("sequence", &s);
            let nx = vec_norm(p, &x)?;
            let sup = s.sup_norm()?;
            let qn = s.quotient_norm()?;
            rep.certify(Certificate::new("sequence/embedding-isometric", &sup, "==", &nx, sup == nx));
            rep.certify(Certificate::new("sequence/embedding-isometric-mod-c0", &qn, "==", &nx, qn == nx));
        }
    }
    Ok(())
}

fn verify(cli: &Cli, c: &VerifyCmd, rep: &mut Report) -> Result<()> {
    let VerifyCmd::All = c;
    rep.input("seed", cli.seed);
    rep.input("trials", cli.trials);
    rep.input("level_cap", cli.level_cap);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let sweeps = verify_all(&mut rng, cli.trials, cli.prec, cli.level_cap);
    for s in &sweeps {
        let mut cert = Certificate::new(
            &format!("verify/{}", s.name),
            format!("{} failures, {} errors", s.failures, s.errors),
            "==",
            format!("none in {} trials ({} checks)", s.trials, s.checks),
            s.passed(),
        );
        if let Some(w) = &s.first_problem {
            cert = cert.with_witness(w);
        }
        rep.certify(cert);
    }
    rep.result("sweeps", serde_json::to_value(&sweeps).expect("sweeps serialize"));
    Ok(())
}
