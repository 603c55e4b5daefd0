//! Scaled-integer group elements for fast breadth-first search.
//!
//! An element stores the integer linear part followed by `D * t`, where `D` is
//! the common denominator of all generator translations. Products of
//! generators never leave this representation.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::affine::{identity_matrix, AffineIsometry};
use crate::error::{Error, Result};
use crate::rational::{lcm_of_denominators, Rational};
use crate::words::{Letter, Word};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Element(Box<[i64]>);

impl Element {
    pub fn raw(&self) -> &[i64] {
        &self.0
    }
}

/// Generators and their inverses in scaled-integer form.
#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    denom: i64,
    letters: Vec<Element>,
}

impl MatrixGroup {
    pub fn new(generators: &[AffineIsometry]) -> Result<Self> {
        let dim = generators.first().map_or(0, AffineIsometry::dim);
        if let Some(g) = generators.iter().find(|g| g.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
        }
        let inverses: Vec<AffineIsometry> = generators.iter().map(AffineIsometry::inverse).collect();
        let den = lcm_of_denominators(generators.iter().chain(&inverses).flat_map(|g| g.translation().iter()));
        let denom = den.to_i64().ok_or(Error::Overflow)?;
        let mut group = MatrixGroup { dim, denom, letters: Vec::new() };
        for (g, gi) in generators.iter().zip(&inverses) {
            let e = group.from_isometry(g)?;
            let ei = group.from_isometry(gi)?;
            group.letters.push(e);
            group.letters.push(ei);
        }
        Ok(group)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn denominator(&self) -> i64 {
        self.denom
    }

    pub fn generator_count(&self) -> usize {
        self.letters.len() / 2
    }

    pub fn letter_count(&self) -> usize {
        self.letters.len()
    }

    pub fn letter(&self, l: Letter) -> &Element {
        &self.letters[l.code()]
    }

    pub fn identity(&self) -> Element {
        let d = self.dim;
        let mut v = identity_matrix(d);
        v.extend(std::iter::repeat_n(0, d));
        Element(v.into_boxed_slice())
    }

    /// Apply `g`, then `h`.
    pub fn then(&self, g: &Element, h: &Element) -> Result<Element> {
        let d = self.dim;
        let (lg, tg) = g.0.split_at(d * d);
        let (lh, th) = h.0.split_at(d * d);
        let mut out = vec![0i64; d * d + d];
        for i in 0..d {
            for k in 0..d {
                let x = lh[i * d + k];
                if x == 0 {
                    continue;
                }
                for j in 0..d {
                    let p = x.checked_mul(lg[k * d + j]).ok_or(Error::Overflow)?;
                    out[i * d + j] = out[i * d + j].checked_add(p).ok_or(Error::Overflow)?;
                }
                let p = x.checked_mul(tg[k]).ok_or(Error::Overflow)?;
                out[d * d + i] = out[d * d + i].checked_add(p).ok_or(Error::Overflow)?;
            }
            out[d * d + i] = out[d * d + i].checked_add(th[i]).ok_or(Error::Overflow)?;
        }
        Ok(Element(out.into_boxed_slice()))
    }

    pub fn step(&self, g: &Element, l: Letter) -> Result<Element> {
        self.then(g, &self.letters[l.code()])
    }

    pub fn evaluate(&self, w: &Word) -> Result<Element> {
        let mut acc = self.identity();
        for &l in w.letters() {
            if l.code() >= self.letters.len() {
                return Err(Error::Unassigned(l.generator()));
            }
            acc = self.step(&acc, l)?;
        }
        Ok(acc)
    }

    pub fn linear<'a>(&self, g: &'a Element) -> &'a [i64] {
        &g.0[..self.dim * self.dim]
    }

    /// Translation scaled by the common denominator.
    pub fn scaled_translation<'a>(&self, g: &'a Element) -> &'a [i64] {
        &g.0[self.dim * self.dim..]
    }

    pub fn is_translation(&self, g: &Element) -> bool {
        self.linear(g) == identity_matrix(self.dim).as_slice()
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        self.is_translation(g) && self.scaled_translation(g).iter().all(|&x| x == 0)
    }

    pub fn translation(&self, g: &Element) -> Vec<Rational> {
        self.scaled_translation(g)
            .iter()
            .map(|&x| Rational::new(BigInt::from(x), BigInt::from(self.denom)))
            .collect()
    }

    pub fn to_isometry(&self, g: &Element) -> AffineIsometry {
        AffineIsometry::new(self.dim, self.linear(g).to_vec(), self.translation(g))
            .expect("group elements are unimodular")
    }

    /// Fails when a translation denominator does not divide the group's denominator.
    pub fn from_isometry(&self, g: &AffineIsometry) -> Result<Element> {
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: g.dim() });
        }
        let mut v = g.linear().to_vec();
        let den = BigInt::from(self.denom);
        for t in g.translation() {
            let s = t * &den;
            if !s.is_integer() {
                return Err(Error::Invalid("translation denominator outside the group".into()));
            }
            v.push(s.to_integer().to_i64().ok_or(Error::Overflow)?);
        }
        Ok(Element(v.into_boxed_slice()))
    }

    /// Some letter maps to the identity.
    pub fn identity_letter(&self) -> Option<usize> {
        (0..self.generator_count()).find(|&i| self.is_identity(&self.letters[2 * i]))
    }

    pub fn zero_translation(&self) -> bool {
        self.letters.iter().all(|e| self.scaled_translation(e).iter().all(|x| x.is_zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::symop::parse_symop;
    use crate::words::{evaluate, parse_word};

    fn elv() -> Vec<AffineIsometry> {
        ["x,-y,-z", "-x,y,1-z", "1/2+z,1/2-x,3/2-y"]
            .iter()
            .map(|s| parse_symop(s, 3).unwrap())
            .collect()
    }

    #[test]
    fn agrees_with_exact_evaluation() {
        let gens = elv();
        let g = MatrixGroup::new(&gens).unwrap();
        assert_eq!(g.denominator(), 2);
        for text in ["c^3", "abab", "acbc^-1", "bc^-1ac", "(cb)^3", "a(bc)^3a", "ab^-1c^-1ac^2"] {
            let w = parse_word(text, &['a', 'b', 'c']).unwrap();
            let fast = g.to_isometry(&g.evaluate(&w).unwrap());
            assert_eq!(fast, evaluate(&w, &gens).unwrap(), "{text}");
        }
    }

    #[test]
    fn translation_words() {
        let g = MatrixGroup::new(&elv()).unwrap();
        let c3 = g.evaluate(&parse_word("ccc", &['a', 'b', 'c']).unwrap()).unwrap();
        assert!(g.is_translation(&c3));
        assert_eq!(g.translation(&c3), vec![frac(3, 2), frac(-3, 2), frac(3, 2)]);
        let cb3 = g.evaluate(&parse_word("(cb)^3", &['a', 'b', 'c']).unwrap()).unwrap();
        assert_eq!(g.translation(&cb3), vec![frac(-1, 2), frac(1, 2), frac(1, 2)]);
    }

    #[test]
    fn identity_generator_detected() {
        let g = MatrixGroup::new(&[parse_symop("x,y", 2).unwrap()]).unwrap();
        assert_eq!(g.identity_letter(), Some(0));
    }
}
