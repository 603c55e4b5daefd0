//! Exact affine isometries, translation lattices and the quotient by a lattice.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hnf;
use crate::rational::{lcm_of_denominators, Rational};

/// Affine map `x -> A x + t` with integer `A` and `|det A| = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffineIsometry {
    dim: usize,
    linear: Vec<i64>,
    translation: Vec<Rational>,
}

impl AffineIsometry {
    /// `linear` is row-major `dim x dim`.
    pub fn new(dim: usize, linear: Vec<i64>, translation: Vec<Rational>) -> Result<Self> {
        if linear.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: linear.len() });
        }
        if translation.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: translation.len() });
        }
        if determinant(&linear, dim).map(i64::abs) != Some(1) {
            return Err(Error::NotUnimodular);
        }
        Ok(AffineIsometry { dim, linear, translation })
    }

    pub fn identity(dim: usize) -> Self {
        AffineIsometry {
            dim,
            linear: identity_matrix(dim),
            translation: vec![Rational::zero(); dim],
        }
    }

    pub fn from_translation(t: Vec<Rational>) -> Self {
        let dim = t.len();
        AffineIsometry { dim, linear: identity_matrix(dim), translation: t }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn linear(&self) -> &[i64] {
        &self.linear
    }

    pub fn linear_entry(&self, i: usize, j: usize) -> i64 {
        self.linear[i * self.dim + j]
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    /// Augmented product `self * other`: apply `other`, then `self`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let d = self.dim;
        let linear = mat_mul(&self.linear, &other.linear, d);
        let mut translation = apply_linear(&self.linear, &other.translation, d);
        for (x, y) in translation.iter_mut().zip(&self.translation) {
            *x += y;
        }
        Ok(AffineIsometry { dim: d, linear, translation })
    }

    /// Word-order product: apply `self`, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        next.compose(self)
    }

    pub fn inverse(&self) -> Self {
        let d = self.dim;
        let linear = unimodular_inverse(&self.linear, d);
        let translation = apply_linear(&linear, &self.translation, d)
            .into_iter()
            .map(|x| -x)
            .collect();
        AffineIsometry { dim: d, linear, translation }
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.translation.iter().all(Zero::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.linear == identity_matrix(self.dim)
    }

    /// Translation vector when the linear part is the identity.
    pub fn translation_of(&self) -> Option<Vec<Rational>> {
        self.is_translation().then(|| self.translation.clone())
    }

    pub fn apply(&self, point: &[Rational]) -> Vec<Rational> {
        let mut out = apply_linear(&self.linear, point, self.dim);
        for (x, y) in out.iter_mut().zip(&self.translation) {
            *x += y;
        }
        out
    }

    /// Augmented `(d+1) x (d+1)` matrix.
    pub fn augmented(&self) -> Vec<Vec<Rational>> {
        let d = self.dim;
        let mut rows: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut r: Vec<Rational> = (0..d)
                    .map(|j| Rational::from_integer(BigInt::from(self.linear_entry(i, j))))
                    .collect();
                r.push(self.translation[i].clone());
                r
            })
            .collect();
        let mut last = vec![Rational::zero(); d];
        last.push(Rational::one());
        rows.push(last);
        rows
    }
}

impl fmt::Display for AffineIsometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::symop::format_symop(self))
    }
}

pub(crate) fn identity_matrix(d: usize) -> Vec<i64> {
    (0..d * d).map(|k| i64::from(k / d == k % d)).collect()
}

pub(crate) fn mat_mul(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0; d * d];
    for i in 0..d {
        for k in 0..d {
            let x = a[i * d + k];
            if x != 0 {
                for j in 0..d {
                    out[i * d + j] += x * b[k * d + j];
                }
            }
        }
    }
    out
}

pub(crate) fn apply_linear(a: &[i64], v: &[Rational], d: usize) -> Vec<Rational> {
    (0..d)
        .map(|i| {
            let mut acc = Rational::zero();
            for j in 0..d {
                let c = a[i * d + j];
                if c != 0 {
                    acc += &v[j] * BigInt::from(c);
                }
            }
            acc
        })
        .collect()
}

/// Bareiss determinant; `None` on overflow.
pub(crate) fn determinant(a: &[i64], d: usize) -> Option<i64> {
    if d == 0 {
        return Some(1);
    }
    let mut m: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..d - 1 {
        if m[k * d + k] == 0 {
            let Some(swap) = (k + 1..d).find(|&i| m[i * d + k] != 0) else {
                return Some(0);
            };
            for j in 0..d {
                m.swap(k * d + j, swap * d + j);
            }
            sign = -sign;
        }
        for i in k + 1..d {
            for j in k + 1..d {
                let v = m[i * d + j]
                    .checked_mul(m[k * d + k])?
                    .checked_sub(m[i * d + k].checked_mul(m[k * d + j])?)?;
                m[i * d + j] = v / prev;
            }
        }
        prev = m[k * d + k];
    }
    (sign * m[d * d - 1]).to_i64()
}

/// Inverse of an integer matrix with determinant +-1.
pub(crate) fn unimodular_inverse(a: &[i64], d: usize) -> Vec<i64> {
    let mut m: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            (0..2 * d)
                .map(|j| {
                    let x = if j < d { a[i * d + j] } else { i64::from(j - d == i) };
                    Rational::from_integer(BigInt::from(x))
                })
                .collect()
        })
        .collect();
    for c in 0..d {
        let p = (c..d).find(|&r| !m[r][c].is_zero()).expect("singular matrix");
        m.swap(c, p);
        let inv = m[c][c].recip();
        for x in m[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                let src = m[c].clone();
                for (x, y) in m[r].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
    }
    let mut out = Vec::with_capacity(d * d);
    for row in &m {
        for x in &row[d..] {
            out.push(x.to_integer().to_i64().expect("inverse not integral"));
        }
    }
    out
}

/// Rank-`r` lattice of translations in `Q^d`, kept in canonical HNF.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TranslationLattice {
    dim: usize,
    basis: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

/// Canonical lattice spanned by `vectors` in dimension `dim`.
pub fn hnf_lattice(dim: usize, vectors: &[Vec<Rational>]) -> TranslationLattice {
    let den = lcm_of_denominators(vectors.iter().flatten());
    let rows: Vec<Vec<BigInt>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| (x * &den).to_integer()).collect())
        .collect();
    let h = hnf::hnf_rows(&rows);
    let pivots = hnf::pivots(&h);
    let basis = h
        .into_iter()
        .map(|r| r.into_iter().map(|x| Rational::new(x, den.clone())).collect())
        .collect();
    TranslationLattice { dim, basis, pivots }
}

impl TranslationLattice {
    pub fn zero(dim: usize) -> Self {
        TranslationLattice { dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Integer coefficients `c` with `c . basis = v`.
    pub fn solve(&self, v: &[Rational]) -> Option<Vec<i64>> {
        let mut res = v.to_vec();
        let mut coeffs = Vec::with_capacity(self.rank());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let c = &res[p] / &row[p];
            if !c.is_integer() {
                return None;
            }
            for (x, y) in res.iter_mut().zip(row) {
                *x -= &c * y;
            }
            coeffs.push(c.to_integer().to_i64()?);
        }
        res.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.solve(v).is_some()
    }

    /// Canonical representative of `v + L`: pivot coordinates reduced into the
    /// half-open fundamental range, other coordinates left exact.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut res = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let k = (&res[p] / &row[p]).floor();
            if !k.is_zero() {
                for (x, y) in res.iter_mut().zip(row) {
                    *x -= &k * y;
                }
            }
        }
        res
    }

    /// True when the linear map sends every basis vector into the lattice.
    pub fn is_invariant_under(&self, linear: &[i64]) -> bool {
        self.basis
            .iter()
            .all(|b| self.contains(&apply_linear(linear, b, self.dim)))
    }

    /// Lattice spanned by this one together with `vectors`.
    pub fn extend(&self, vectors: &[Vec<Rational>]) -> TranslationLattice {
        let mut all = self.basis.clone();
        all.extend_from_slice(vectors);
        hnf_lattice(self.dim, &all)
    }

    /// `v . basis` for integer coefficients.
    pub fn combine(&self, coeffs: &[i64]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            for (x, y) in out.iter_mut().zip(row) {
                *x += y * BigInt::from(*c);
            }
        }
        out
    }
}

/// Coset `gT` of an isometry modulo a translation lattice.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PointGroupElement {
    pub linear: Vec<i64>,
    pub residual: Vec<Rational>,
}

pub fn point_group_image(g: &AffineIsometry, lattice: &TranslationLattice) -> Result<PointGroupElement> {
    if g.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch { expected: lattice.dim(), found: g.dim() });
    }
    if !lattice.is_invariant_under(g.linear()) {
        return Err(Error::LatticeNotInvariant);
    }
    Ok(PointGroupElement {
        linear: g.linear().to_vec(),
        residual: lattice.reduce(g.translation()),
    })
}

impl PointGroupElement {
    pub fn identity(dim: usize) -> Self {
        PointGroupElement { linear: identity_matrix(dim), residual: vec![Rational::zero(); dim] }
    }

    pub fn dim(&self) -> usize {
        self.residual.len()
    }

    /// Apply `self`, then `next`, reduced modulo `lattice`.
    pub fn then(&self, next: &Self, lattice: &TranslationLattice) -> Self {
        let d = self.dim();
        let linear = mat_mul(&next.linear, &self.linear, d);
        let mut t = apply_linear(&next.linear, &self.residual, d);
        for (x, y) in t.iter_mut().zip(&next.residual) {
            *x += y;
        }
        PointGroupElement { linear, residual: lattice.reduce(&t) }
    }

    pub fn inverse(&self, lattice: &TranslationLattice) -> Self {
        let d = self.dim();
        let linear = unimodular_inverse(&self.linear, d);
        let t: Vec<Rational> = apply_linear(&linear, &self.residual, d)
            .into_iter()
            .map(|x| -x)
            .collect();
        PointGroupElement { linear, residual: lattice.reduce(&t) }
    }

    pub fn is_identity(&self) -> bool {
        self.linear == identity_matrix(self.dim()) && self.residual.iter().all(Zero::is_zero)
    }
}
