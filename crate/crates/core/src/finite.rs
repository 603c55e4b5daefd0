//! Finite groups given by generator images, and short presentations for them.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use crate::affine::{PointGroupElement, TranslationLattice};
use crate::coset::{coset_enumerate, Enumeration};
use crate::error::{Error, Result};
use crate::words::{canonical_relator, cyclic_reduce, free_reduce, Letter, Presentation, Word};

pub const DEFAULT_CLOSURE_BOUND: usize = 10_000;

/// Closed group with right multiplication by letters tabulated.
///
/// Elements are numbered in breadth-first order from the identity (element 0),
/// scanning letters `a, a^-1, b, b^-1, ...`.
#[derive(Clone, Debug)]
pub struct FiniteGroupModel {
    elements: Vec<PointGroupElement>,
    letters: usize,
    table: Vec<usize>,
    parent: Vec<Option<(usize, Letter)>>,
}

impl FiniteGroupModel {
    /// Closure of the images of generators modulo `lattice`.
    pub fn from_point_group(
        generators: &[PointGroupElement],
        lattice: &TranslationLattice,
        bound: usize,
    ) -> Result<Self> {
        let identity = PointGroupElement::identity(lattice.dim());
        let mut letters = Vec::new();
        for g in generators {
            letters.push(g.clone());
            letters.push(g.inverse(lattice));
        }
        let (elements, table, parent) = close(identity, &letters, |x, y| x.then(y, lattice), bound)?;
        Ok(FiniteGroupModel { elements, letters: letters.len(), table, parent })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generator_count(&self) -> usize {
        self.letters / 2
    }

    pub fn elements(&self) -> &[PointGroupElement] {
        &self.elements
    }

    pub fn step(&self, element: usize, l: Letter) -> usize {
        self.table[element * self.letters + l.code()]
    }

    /// Element reached from the identity by reading `w`.
    pub fn trace(&self, w: &Word) -> usize {
        w.letters().iter().fold(0, |e, &l| self.step(e, l))
    }

    pub fn generator_image(&self, i: usize) -> usize {
        self.step(0, Letter::new(i, false))
    }

    /// Shortlex-least word reaching `element`.
    pub fn tree_word(&self, element: usize) -> Word {
        let mut out = Vec::new();
        let mut e = element;
        while let Some((p, l)) = self.parent[e] {
            out.push(l);
            e = p;
        }
        out.reverse();
        Word(out)
    }

    /// One cycle word per non-tree edge of the Cayley graph, deduplicated up to
    /// rotation and inversion, sorted shortlex.
    pub fn cycle_words(&self) -> Vec<Word> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for e in 0..self.order() {
            for code in 0..self.letters {
                let l = Letter::from_code(code);
                let f = self.step(e, l);
                if self.parent[f] == Some((e, l)) || self.parent[e] == Some((f, l.inv())) {
                    continue;
                }
                let mut w = self.tree_word(e).0;
                w.push(l);
                w.extend(self.tree_word(f).inverse().0);
                let r = cyclic_reduce(&free_reduce(&Word(w)));
                if r.is_empty() {
                    continue;
                }
                if seen.insert(canonical_relator(&r)) {
                    out.push(r);
                }
            }
        }
        out.sort();
        out
    }
}

type Closure<T> = (Vec<T>, Vec<usize>, Vec<Option<(usize, Letter)>>);

fn close<T: Clone + Eq + Hash>(
    identity: T,
    letters: &[T],
    mul: impl Fn(&T, &T) -> T,
    bound: usize,
) -> Result<Closure<T>> {
    let mut index: HashMap<T, usize> = HashMap::new();
    let mut elements = vec![identity.clone()];
    let mut parent = vec![None];
    index.insert(identity, 0);
    let mut table = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(e) = queue.pop_front() {
        for (code, g) in letters.iter().enumerate() {
            let p = mul(&elements[e], g);
            let next = match index.get(&p) {
                Some(&i) => i,
                None => {
                    if elements.len() >= bound {
                        return Err(Error::ClosureBound(bound));
                    }
                    let i = elements.len();
                    index.insert(p.clone(), i);
                    elements.push(p);
                    parent.push(Some((e, Letter::from_code(code))));
                    queue.push_back(i);
                    i
                }
            };
            table.push(next);
        }
    }
    Ok((elements, table, parent))
}

/// Coset bound for consequence tests on a group of order `n`.
pub fn adoption_bound(n: usize) -> usize {
    (4 * n).max(32)
}

/// Short presentation of a finite group on its given generators.
///
/// Candidates are Cayley-graph cycle words in shortlex order. A candidate is
/// adopted unless the relators adopted so far already present a finite group
/// in which it holds. Adopted relators are then dropped, longest first, when
/// the rest still enumerate to the group order.
pub fn short_presentation_finite(model: &FiniteGroupModel, names: &[char]) -> Result<Presentation> {
    let n = model.order();
    let bound = adoption_bound(n);
    let mut adopted: Vec<Word> = Vec::new();
    let present = |rels: &[Word]| Presentation::new(names.to_vec(), rels.to_vec());
    for cand in model.cycle_words() {
        match coset_enumerate(&present(&adopted), &[], bound) {
            Enumeration::Complete(t) if t.index() == n => break,
            Enumeration::Complete(t) if t.trace(0, &cand) == 0 => continue,
            _ => adopted.push(cand),
        }
    }
    if coset_enumerate(&present(&adopted), &[], bound).index() != Some(n) {
        return Err(Error::Verification("finite presentation does not reach the group order".into()));
    }
    let mut k = adopted.len();
    while k > 0 {
        k -= 1;
        let mut trial = adopted.clone();
        trial.remove(k);
        if coset_enumerate(&present(&trial), &[], bound).index() == Some(n) {
            adopted = trial;
        }
    }
    Ok(present(&adopted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::hnf_lattice;
    use crate::coset::group_order;
    use crate::rational::int;
    use crate::words::{evaluate, parse_word};
    use crate::symop::parse_symop;

    fn linear(m: &[i64]) -> PointGroupElement {
        let d = (m.len() as f64).sqrt() as usize;
        PointGroupElement { linear: m.to_vec(), residual: vec![int(0); d] }
    }

    #[test]
    fn klein_four() {
        let l = hnf_lattice(2, &[]);
        let model = FiniteGroupModel::from_point_group(&[linear(&[-1, 0, 0, 1]), linear(&[1, 0, 0, -1])], &l, 100).unwrap();
        assert_eq!(model.order(), 4);
        let p = short_presentation_finite(&model, &['a', 'b']).unwrap();
        assert_eq!(group_order(&p, 1000), Some(4));
        // every relator of length <= 4 holding in the group is a consequence
        let names = ['a', 'b'];
        for r in ["a^2", "b^2", "(ab)^2", "abab^-1"] {
            let w = parse_word(r, &names).unwrap();
            assert_eq!(model.trace(&w), 0);
            assert_eq!(group_order(&p.with_extra(&[w]), 1000), Some(4));
        }
        assert!(p.relators.iter().all(|r| r.len() <= 4));
    }

    #[test]
    fn trivial_group_without_generators() {
        let l = hnf_lattice(1, &[]);
        let model = FiniteGroupModel::from_point_group(&[], &l, 10).unwrap();
        assert_eq!(model.order(), 1);
        assert!(short_presentation_finite(&model, &[]).unwrap().relators.is_empty());
    }

    #[test]
    fn tetragonal_point_group() {
        let gens: Vec<_> = ["x, 1/2-y, 1/4-z", "1/2-x, y, -1/4-z", "y,-x,-z"]
            .iter()
            .map(|s| parse_symop(s, 3).unwrap())
            .collect();
        let half = |a: i64, b: i64, c: i64| vec![crate::rational::frac(a, 2), crate::rational::frac(b, 2), crate::rational::frac(c, 2)];
        let l = hnf_lattice(3, &[half(2, 0, 0), half(0, 2, 0), half(1, 1, 1)]);
        let images: Vec<_> = gens.iter().map(|g| crate::affine::point_group_image(g, &l).unwrap()).collect();
        let model = FiniteGroupModel::from_point_group(&images, &l, 100).unwrap();
        assert_eq!(model.order(), 8);
        let names = ['a', 'b', 'c'];
        let p = short_presentation_finite(&model, &names).unwrap();
        assert_eq!(group_order(&p, 1000), Some(8));
        for r in ["a^2", "b^2", "bc^2a", "(ac^-1)^2", "c^2ba"] {
            let w = parse_word(r, &names).unwrap();
            assert_eq!(model.trace(&w), 0, "{r}");
            assert_eq!(group_order(&p.with_extra(std::slice::from_ref(&w)), 1000), Some(8));
            let t = evaluate(&w, &gens).unwrap();
            assert!(t.is_translation() && l.contains(t.translation()));
        }
        let reference = Presentation::parse(&names, &["a^2", "b^2", "bc^2a", "(ac^-1)^2", "c^2ba"]).unwrap();
        assert_eq!(group_order(&reference, 1000), Some(8));
        for r in &p.relators {
            assert_eq!(group_order(&reference.with_extra(std::slice::from_ref(r)), 1000), Some(8));
        }
    }

    #[test]
    fn closure_bound_is_enforced() {
        let l = hnf_lattice(1, &[]);
        let shift = PointGroupElement { linear: vec![1], residual: vec![int(1)] };
        assert_eq!(
            FiniteGroupModel::from_point_group(&[shift], &l, 50).unwrap_err(),
            Error::ClosureBound(50)
        );
    }
}
