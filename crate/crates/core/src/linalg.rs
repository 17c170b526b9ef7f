//! Linear algebra on `(K^n, max norm)` for `K = Q_p` or a tower level.
//!
//! Subspaces are spanning lists. [`echelonize`] turns one into an
//! orthogonal basis by elimination with largest-norm pivots: each row's
//! pivot entry has the largest norm in the row and later rows vanish on
//! earlier pivot columns, which gives
//! `|Σ λ_i row_i| = max_i |λ_i|·|row_i|`. Reducing a vector against such a
//! basis leaves a residual that vanishes on every pivot column, and its
//! norm is exactly the distance to the subspace.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::error::{precision_loss, Error, Result};
use crate::report::Certificate;
use crate::scalar::Scalar;
use crate::valcore::{NormValue, ValBound, Valuation};

pub fn vec_valuation<F: Scalar>(x: &[F]) -> Result<Valuation> {
    let b: Vec<ValBound> = x.iter().map(|c| c.val_bound()).collect();
    if x.iter().all(|c| c.is_zero_at_precision()) {
        return Ok(Valuation::Infinite);
    }
    ValBound::min_of(&b).vector_norm("vector norm")
}

pub fn vec_norm<F: Scalar>(p: u64, x: &[F]) -> Result<NormValue> {
    Ok(NormValue::new(p, vec_valuation(x)?))
}

pub fn is_zero_vec<F: Scalar>(x: &[F]) -> bool {
    x.iter().all(|c| c.is_zero_at_precision())
}

/// Entrywise agreement at precision.
pub fn vec_agree<F: Scalar>(a: &[F], b: &[F]) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    for (x, y) in a.iter().zip(b) {
        if !x.try_sub(y)?.is_zero_at_precision() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn vec_add<F: Scalar>(a: &[F], b: &[F]) -> Result<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.try_add(y)).collect()
}

pub fn vec_sub<F: Scalar>(a: &[F], b: &[F]) -> Result<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(y)).collect()
}

pub fn vec_scale<F: Scalar>(c: &F, a: &[F]) -> Result<Vec<F>> {
    a.iter().map(|x| c.try_mul(x)).collect()
}

/// `a - c * b`.
fn axpy<F: Scalar>(a: &[F], c: &F, b: &[F]) -> Result<Vec<F>> {
    a.iter().zip(b).map(|(x, y)| x.try_sub(&c.try_mul(y)?)).collect()
}

pub fn unit_vector<F: Scalar>(template: &F, n: usize, i: usize) -> Vec<F> {
    (0..n).map(|k| if k == i { template.one_like() } else { template.zero_like() }).collect()
}

/// `A x` for `A` given by rows.
pub fn mat_vec<F: Scalar>(a: &[Vec<F>], x: &[F]) -> Result<Vec<F>> {
    a.iter()
        .map(|row| {
            let mut acc = x[0].zero_like();
            for (r, v) in row.iter().zip(x) {
                acc = acc.try_add(&r.try_mul(v)?)?;
            }
            Ok(acc)
        })
        .collect()
}

pub fn mat_mul<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Result<Vec<Vec<F>>> {
    let cols = b.first().map_or(0, |r| r.len());
    let bt: Vec<Vec<F>> = (0..cols).map(|j| b.iter().map(|r| r[j].clone()).collect()).collect();
    a.iter()
        .map(|row| bt.iter().map(|col| Ok(mat_vec(std::slice::from_ref(row), col)?.remove(0))).collect())
        .collect()
}

pub fn transpose<F: Clone>(a: &[Vec<F>]) -> Vec<Vec<F>> {
    let cols = a.first().map_or(0, |r| r.len());
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// For max norms the operator norm is the largest entry norm.
pub fn operator_norm<F: Scalar>(p: u64, a: &[Vec<F>]) -> Result<NormValue> {
    let flat: Vec<F> = a.iter().flatten().cloned().collect();
    vec_norm(p, &flat)
}

/// Orthogonal basis of a subspace, optionally carrying the values of a
/// linear map on each row.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F: Scalar> {
    pub n: usize,
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
    pub images: Vec<Vec<F>>,
    template: F,
}

/// Echelon form of `span{v_i}` in `K^n`; `template` supplies the field when
/// the span is empty.
pub fn echelonize<F: Scalar>(n: usize, span: &[Vec<F>], template: &F) -> Result<EchelonBasis<F>> {
    echelonize_with_images(n, span, &vec![Vec::new(); span.len()], template)
}

/// Echelonizes `[v_i | f(v_i)]`, choosing pivots among the first `n`
/// columns only. A row that vanishes on `K^n` but not on its image exposes
/// a map that is not linear.
pub fn echelonize_with_images<F: Scalar>(
    n: usize,
    span: &[Vec<F>],
    images: &[Vec<F>],
    template: &F,
) -> Result<EchelonBasis<F>> {
    for v in span {
        if v.len() != n {
            return Err(Error::DegreeMismatch(v.len(), n));
        }
    }
    if images.len() != span.len() {
        return Err(Error::InvalidArgument("one image per spanning vector is required".into()));
    }
    let mut rest: Vec<Vec<F>> = span.iter().zip(images).map(|(v, f)| [v.clone(), f.clone()].concat()).collect();
    let mut rows = Vec::new();
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(usize, usize, Valuation)> = None;
        let mut loose: Option<Valuation> = None;
        for (r, row) in rest.iter().enumerate() {
            for (c, x) in row[..n].iter().enumerate() {
                match x.val_bound() {
                    ValBound::Exact(Valuation::Infinite) => {}
                    ValBound::Exact(v) => {
                        if best.as_ref().is_none_or(|(_, _, bv)| v < *bv) {
                            best = Some((r, c, v));
                        }
                    }
                    ValBound::AtLeast(k) => {
                        let k = Valuation::Finite(k);
                        if loose.as_ref().is_none_or(|l| k < *l) {
                            loose = Some(k);
                        }
                    }
                }
            }
        }
        let Some((pr, pc, pv)) = best else { break };
        if loose.is_some_and(|l| l < pv) {
            return Err(precision_loss("an entry indistinguishable from zero could outweigh the pivot"));
        }
        let prow = rest.remove(pr);
        let piv = prow[pc].clone();
        for row in rest.iter_mut() {
            if row[pc].is_zero_at_precision() {
                row[pc] = piv.zero_like();
                continue;
            }
            let m = row[pc].try_div(&piv)?;
            *row = axpy(row, &m, &prow)?;
            row[pc] = piv.zero_like();
        }
        rows.push(prow);
        pivots.push(pc);
    }
    for row in &rest {
        if !is_zero_vec(&row[n..]) {
            return Err(Error::InconsistentMap(format!(
                "a combination of spanning vectors vanishes but its image is {}",
                fmt_vector(&row[n..])
            )));
        }
    }
    let images = rows.iter().map(|r| r[n..].to_vec()).collect();
    let rows = rows.into_iter().map(|mut r| {
        r.truncate(n);
        r
    });
    Ok(EchelonBasis { n, rows: rows.collect(), pivots, images, template: template.zero_like() })
}

impl<F: Scalar> EchelonBasis<F> {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn prime(&self) -> u64 {
        self.template.prime()
    }

    pub fn template(&self) -> &F {
        &self.template
    }

    /// Sequential reduction: residual `x - Σ λ_i row_i` (zero on every
    /// pivot column) and the coefficients `λ_i`.
    pub fn reduce(&self, x: &[F]) -> Result<(Vec<F>, Vec<F>)> {
        if x.len() != self.n {
            return Err(Error::DegreeMismatch(x.len(), self.n));
        }
        let mut r = x.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (row, &j) in self.rows.iter().zip(&self.pivots) {
            if r[j].is_zero_at_precision() {
                coeffs.push(self.template.zero_like());
                r[j] = self.template.zero_like();
                continue;
            }
            let l = r[j].try_div(&row[j])?;
            r = axpy(&r, &l, row)?;
            r[j] = self.template.zero_like();
            coeffs.push(l);
        }
        Ok((r, coeffs))
    }

    pub fn dist(&self, x: &[F]) -> Result<NormValue> {
        let (r, _) = self.reduce(x)?;
        vec_norm(self.prime(), &r)
    }

    /// `Σ λ_i row_i`.
    pub fn combination(&self, coeffs: &[F]) -> Result<Vec<F>> {
        let mut acc = vec![self.template.zero_like(); self.n];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            acc = vec_add(&acc, &vec_scale(c, row)?)?;
        }
        Ok(acc)
    }

    /// Orthogonal projection onto the span, as an `n x n` matrix by rows:
    /// column `c` is the footprint of `e_c` on the subspace.
    pub fn projection(&self) -> Result<Vec<Vec<F>>> {
        let mut cols = Vec::with_capacity(self.n);
        for c in 0..self.n {
            let e = unit_vector(&self.template, self.n, c);
            let (r, _) = self.reduce(&e)?;
            cols.push(vec_sub(&e, &r)?);
        }
        Ok(transpose(&cols))
    }

    /// Standard basis vectors off the pivot columns; they span the kernel
    /// of the projection and form an orthogonal complement.
    pub fn complement(&self) -> Vec<Vec<F>> {
        (0..self.n)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| unit_vector(&self.template, self.n, c))
            .collect()
    }

    /// A nonzero vector orthogonal to the subspace: `e_c - P e_c` for the
    /// first non-pivot column `c`.
    pub fn morth_vector(&self) -> Result<Vec<F>> {
        let c = (0..self.n).find(|c| !self.pivots.contains(c)).ok_or(Error::SubspaceIsFull)?;
        let e = unit_vector(&self.template, self.n, c);
        Ok(self.reduce(&e)?.0)
    }

    /// `max_i |f(row_i)| / |row_i|`, the norm of the carried map on the span.
    pub fn image_norm(&self) -> Result<NormValue> {
        let p = self.prime();
        let mut best = NormValue::zero(p);
        for (row, img) in self.rows.iter().zip(&self.images) {
            let q = vec_norm(p, img)?.div(&vec_norm(p, row)?)?;
            if q > best {
                best = q;
            }
        }
        Ok(best)
    }
}

pub fn dist_to_subspace<F: Scalar>(x: &[F], span: &[Vec<F>]) -> Result<NormValue> {
    echelonize(x.len(), span, &x[0])?.dist(x)
}

/// `|[x]|` in `K^n / V`; equals `d(x, V)`.
pub fn quotient_norm<F: Scalar>(x: &[F], span: &[Vec<F>]) -> Result<NormValue> {
    dist_to_subspace(x, span)
}

/// `x ⟂ V` in the sense `|x| = d(x, V)`.
pub fn is_morth<F: Scalar>(x: &[F], span: &[Vec<F>]) -> Result<bool> {
    let p = x[0].prime();
    Ok(dist_to_subspace(x, span)? == vec_norm(p, x)?)
}

pub fn is_orth<F: Scalar>(x: &[F], y: &[F]) -> Result<bool> {
    is_morth(x, std::slice::from_ref(&y.to_vec()))
}

#[derive(Clone, Debug)]
pub struct HahnBanach<F: Scalar> {
    /// The extension `F = f ∘ P` as an `m x n` matrix by rows.
    pub extension: Vec<Vec<F>>,
    pub restricted_norm: NormValue,
    pub extension_norm: NormValue,
    pub agrees_on_domain: bool,
}

/// Extends `f`, given by its values on the spanning vectors of `D ⊆ K^n`,
/// to all of `K^n` by composing with the orthogonal projection onto `D`.
pub fn hahn_banach_extend<F: Scalar>(
    n: usize,
    span: &[Vec<F>],
    values: &[Vec<F>],
    template: &F,
) -> Result<HahnBanach<F>> {
    let m = values.first().map_or(0, |v| v.len());
    if values.iter().any(|v| v.len() != m) {
        return Err(Error::InvalidArgument("all values must have the same length".into()));
    }
    let basis = echelonize_with_images(n, span, values, template)?;
    let mut cols = Vec::with_capacity(n);
    for c in 0..n {
        let (_, coeffs) = basis.reduce(&unit_vector(template, n, c))?;
        let mut acc = vec![template.zero_like(); m];
        for (l, img) in coeffs.iter().zip(&basis.images) {
            acc = vec_add(&acc, &vec_scale(l, img)?)?;
        }
        cols.push(acc);
    }
    let extension = if m == 0 { Vec::new() } else { transpose(&cols) };
    let p = template.prime();
    let mut agrees = true;
    for (v, fv) in span.iter().zip(values) {
        let got = if m == 0 { Vec::new() } else { mat_vec(&extension, v)? };
        agrees &= vec_agree(&got, fv)?;
    }
    Ok(HahnBanach {
        restricted_norm: basis.image_norm()?,
        extension_norm: operator_norm(p, &extension)?,
        extension,
        agrees_on_domain: agrees,
    })
}

/// `|d + λa| = max(|d|, |λa|)` on the given samples, for `a ⟂ D`.
pub fn product_sum_isometry_check<F: Scalar>(
    span: &[Vec<F>],
    a: &[F],
    samples: &[(Vec<F>, F)],
) -> Result<Certificate> {
    if !is_morth(a, span)? {
        return Err(Error::PreconditionFailed("a is not orthogonal to D".into()));
    }
    let p = a[0].prime();
    let mut bad = 0usize;
    for (d, l) in samples {
        let la = vec_scale(l, a)?;
        let lhs = vec_norm(p, &vec_add(d, &la)?)?;
        let rhs = vec_norm(p, d)?.max(vec_norm(p, &la)?);
        if lhs != rhs {
            bad += 1;
        }
    }
    Ok(Certificate::new(
        "orthogonal-sum/product-isometry",
        format!("{bad} violations"),
        "==",
        format!("0 of {} samples", samples.len()),
        bad == 0,
    ))
}

/// Rank over `F_p` of the reduction of an integral matrix.
pub fn residue_rank<F: Scalar>(p: u64, a: &[Vec<F>]) -> Result<usize> {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x.residue()).collect()).collect::<Result<_>>()?;
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, pr);
        let inv = BigInt::from(m[rank][c]).extended_gcd(&BigInt::from(p)).x.mod_floor(&BigInt::from(p));
        let inv = inv.to_u64().unwrap();
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = (m[r][c] as u128 * inv as u128 % p as u128) as u64;
                for k in 0..cols {
                    let sub = (f as u128 * m[rank][k] as u128 % p as u128) as u64;
                    m[r][k] = (m[r][k] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

#[derive(Clone, Debug)]
pub struct Immediacy<F: Scalar> {
    pub immediate: bool,
    pub witness: Option<Vec<F>>,
    pub certificate: Certificate,
}

/// For an isometric embedding `A: K^k -> K^n` (an `n x k` matrix by rows):
/// the range has no nonzero orthogonal vector iff `k = n`.
///
/// `A` is isometric for the max norms iff its entries are integral and its
/// reduction modulo the maximal ideal has full column rank.
pub fn is_immediate<F: Scalar>(a: &[Vec<F>], template: &F) -> Result<Immediacy<F>> {
    let n = a.len();
    let k = a.first().map_or(0, |r| r.len());
    let p = template.prime();
    if n == 0 || k == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    if operator_norm(p, a)? > NormValue::one(p) {
        return Err(Error::NotIsometric("an entry has norm > 1".into()));
    }
    let r = residue_rank(p, a)?;
    if r < k {
        return Err(Error::NotIsometric(format!("reduction has rank {r} < {k}")));
    }
    let image = transpose(a);
    let basis = echelonize(n, &image, template)?;
    if basis.rank() == n {
        let cert = Certificate::new("immediacy/range-is-everything", format!("rank {}", basis.rank()), "==", format!("dimension {n}"), true);
        return Ok(Immediacy { immediate: true, witness: None, certificate: cert });
    }
    let w = basis.morth_vector()?;
    let ok = !is_zero_vec(&w) && basis.dist(&w)? == vec_norm(p, &w)?;
    let cert = Certificate::new("immediacy/orthogonal-witness", format!("d(w, range) = {}", basis.dist(&w)?), "==", format!("|w| = {}", vec_norm(p, &w)?), ok)
        .with_witness(fmt_vector(&w));
    Ok(Immediacy { immediate: false, witness: Some(w), certificate: cert })
}

pub fn fmt_vector<F: fmt::Display>(x: &[F]) -> String {
    let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn fmt_matrix<F: fmt::Display>(a: &[Vec<F>]) -> String {
    let rows: Vec<String> = a.iter().map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")).collect();
    rows.join("; ")
}

/// Parses `(a, b, c)` or `a, b, c`.
pub fn parse_vector<F>(s: &str, parse: &impl Fn(&str) -> Result<F>) -> Result<Vec<F>> {
    let t = s.trim();
    let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t);
    if t.trim().is_empty() {
        return Err(Error::Parse("empty vector".into()));
    }
    t.split(',').map(|e| parse(e.trim())).collect()
}

/// Parses rows separated by `;`, entries by `,`.
pub fn parse_matrix<F>(s: &str, parse: &impl Fn(&str) -> Result<F>) -> Result<Vec<Vec<F>>> {
    let rows: Vec<Vec<F>> = s.split(';').map(|r| parse_vector(r, parse)).collect::<Result<_>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Error::Parse("ragged matrix".into()));
    }
    Ok(rows)
}
