//! Breadth-first search in Cayley graphs of matrix groups.
//!
//! Letters are scanned in the order `a, a^-1, b, b^-1, ...`, so the first
//! discovery of an element is along its shortlex-least geodesic word.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::affine::{hnf_lattice, identity_matrix, TranslationLattice};
use crate::error::{Error, Result};
use crate::group::{Element, MatrixGroup};
use crate::rational::Rational;
use crate::words::{Letter, Word};

pub const DEFAULT_RADIUS_CAP: usize = 30;
pub const DEFAULT_MEMORY_BOUND: usize = 4_000_000;

fn check_generators(group: &MatrixGroup) -> Result<()> {
    match group.identity_letter() {
        Some(i) => Err(Error::IdentityGenerator(format!("#{i}"))),
        None => Ok(()),
    }
}

/// Ball of radius `radius` about the identity with distances and parents.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    distance: Vec<usize>,
    parent: Vec<Option<(usize, Letter)>>,
    spheres: Vec<usize>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn sphere_sizes(&self) -> &[usize] {
        &self.spheres
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn position(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn distance(&self, i: usize) -> usize {
        self.distance[i]
    }

    pub fn parent(&self, i: usize) -> Option<(usize, Letter)> {
        self.parent[i]
    }

    /// Shortlex-least geodesic word for element `i`.
    pub fn word(&self, i: usize) -> Word {
        let mut out = Vec::new();
        let mut e = i;
        while let Some((p, l)) = self.parent[e] {
            out.push(l);
            e = p;
        }
        out.reverse();
        Word(out)
    }
}

/// Incremental breadth-first search, one sphere at a time.
struct Bfs<'a> {
    group: &'a MatrixGroup,
    ball: Ball,
    frontier: std::ops::Range<usize>,
    bound: usize,
}

impl<'a> Bfs<'a> {
    fn new(group: &'a MatrixGroup, bound: usize) -> Result<Self> {
        check_generators(group)?;
        let id = group.identity();
        let ball = Ball {
            radius: 0,
            elements: vec![id.clone()],
            index: HashMap::from([(id, 0)]),
            distance: vec![0],
            parent: vec![None],
            spheres: vec![1],
        };
        Ok(Bfs { group, ball, frontier: 0..1, bound })
    }

    /// Adds the next sphere; returns the range of new elements.
    fn grow(&mut self) -> Result<std::ops::Range<usize>> {
        let start = self.ball.elements.len();
        let d = self.ball.radius + 1;
        for e in self.frontier.clone() {
            for code in 0..self.group.letter_count() {
                let l = Letter::from_code(code);
                let g = self.group.step(&self.ball.elements[e], l)?;
                if self.ball.index.contains_key(&g) {
                    continue;
                }
                if self.ball.elements.len() >= self.bound {
                    return Err(Error::MemoryBound(self.bound));
                }
                let i = self.ball.elements.len();
                self.ball.index.insert(g.clone(), i);
                self.ball.elements.push(g);
                self.ball.distance.push(d);
                self.ball.parent.push(Some((e, l)));
            }
        }
        let end = self.ball.elements.len();
        self.ball.radius = d;
        self.ball.spheres.push(end - start);
        self.frontier = start..end;
        Ok(start..end)
    }
}

pub fn ball(group: &MatrixGroup, radius: usize) -> Result<Ball> {
    ball_bounded(group, radius, DEFAULT_MEMORY_BOUND)
}

pub fn ball_bounded(group: &MatrixGroup, radius: usize, bound: usize) -> Result<Ball> {
    let mut bfs = Bfs::new(group, bound)?;
    for _ in 0..radius {
        bfs.grow()?;
    }
    Ok(bfs.ball)
}

/// Sphere sizes `|S_0|, ..., |S_radius|`, keeping only two spheres in memory.
pub fn coordination_sequence(group: &MatrixGroup, radius: usize) -> Result<Vec<usize>> {
    check_generators(group)?;
    let mut prev: HashSet<Element> = HashSet::new();
    let mut cur: Vec<Element> = vec![group.identity()];
    let mut cur_set: HashSet<Element> = cur.iter().cloned().collect();
    let mut out = vec![1];
    for _ in 0..radius {
        let mut next = Vec::new();
        let mut next_set = HashSet::new();
        for g in &cur {
            for code in 0..group.letter_count() {
                let h = group.step(g, Letter::from_code(code))?;
                if prev.contains(&h) || cur_set.contains(&h) || next_set.contains(&h) {
                    continue;
                }
                next_set.insert(h.clone());
                next.push(h);
            }
        }
        if next.len() > DEFAULT_MEMORY_BOUND {
            return Err(Error::MemoryBound(DEFAULT_MEMORY_BOUND));
        }
        out.push(next.len());
        prev = std::mem::replace(&mut cur_set, next_set);
        cur = next;
    }
    Ok(out)
}

/// The full translation subgroup, from Schreier generators over the finite
/// group of linear parts. Also returns the order of that finite group.
pub fn translation_subgroup(group: &MatrixGroup, bound: usize) -> Result<(TranslationLattice, usize)> {
    let d = group.dim();
    let mut reps: Vec<(Element, Element)> = vec![(group.identity(), group.identity())];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(identity_matrix(d), 0)]);
    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(p) = queue.pop_front() {
        for code in 0..group.letter_count() {
            let l = Letter::from_code(code);
            let (u, u_inv) = reps[p].clone();
            let us = group.step(&u, l)?;
            let key = group.linear(&us).to_vec();
            match index.get(&key) {
                Some(&q) => {
                    let t = group.then(&us, &reps[q].1)?;
                    debug_assert!(group.is_translation(&t));
                    if !group.is_identity(&t) {
                        vectors.push(group.translation(&t));
                    }
                }
                None => {
                    if reps.len() >= bound {
                        return Err(Error::ClosureBound(bound));
                    }
                    let inv = group.then(group.letter(l.inv()), &u_inv)?;
                    index.insert(key, reps.len());
                    queue.push_back(reps.len());
                    reps.push((us, inv));
                }
            }
        }
    }
    Ok((hnf_lattice(d, &vectors), reps.len()))
}

#[derive(Clone, Debug)]
pub struct HarvestOptions {
    pub radius_cap: usize,
    pub memory_bound: usize,
    /// Keep searching at least to this radius (for first-appearance queries).
    pub min_radius: usize,
    /// Heuristic mode: accept the harvested lattice once it has been unchanged
    /// for this many spheres at full rank, instead of comparing with the
    /// certified translation subgroup.
    pub stabilization: Option<usize>,
    pub closure_bound: usize,
}

impl Default for HarvestOptions {
    fn default() -> Self {
        HarvestOptions {
            radius_cap: DEFAULT_RADIUS_CAP,
            memory_bound: DEFAULT_MEMORY_BOUND,
            min_radius: 0,
            stabilization: None,
            closure_bound: crate::finite::DEFAULT_CLOSURE_BOUND,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationWord {
    pub word: Word,
    pub vector: Vec<Rational>,
}

/// Translation words found by breadth-first search, and a basis of words.
#[derive(Clone, Debug)]
pub struct TranslationHarvest {
    pub lattice: TranslationLattice,
    /// Words whose vectors form a basis of `lattice`, shortest available.
    pub basis: Vec<TranslationWord>,
    /// Radius at which the harvested vectors first generated `lattice`.
    pub complete_radius: usize,
    /// Radius searched in total.
    pub searched_radius: usize,
    /// One word per `+-v` class, shortlex-first, in discovery order.
    pub all: Vec<TranslationWord>,
}

impl TranslationHarvest {
    /// Translation words up to the radius where the lattice was complete.
    pub fn words(&self) -> Vec<&TranslationWord> {
        self.all.iter().filter(|t| t.word.len() <= self.complete_radius).collect()
    }

    /// Shortest length of a word evaluating to `v` or `-v`, within the searched radius.
    pub fn first_appearance(&self, v: &[Rational]) -> Option<usize> {
        let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
        self.all
            .iter()
            .find(|t| t.vector == v || t.vector == neg)
            .map(|t| t.word.len())
    }
}

const SUBSET_BUDGET: usize = 200_000;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

fn det_i128(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let flat: Vec<i64> = m.iter().flatten().copied().collect();
    crate::affine::determinant(&flat, n).map_or(0, i128::from)
}

/// Lightest `r`-subset of `coords` with determinant +-1, by total word length.
fn basis_subset(words: &[TranslationWord], coords: &[Vec<i64>], r: usize) -> Option<Vec<usize>> {
    if r == 0 {
        return Some(Vec::new());
    }
    let mut k = coords.len();
    while k > r && binomial(k, r) > SUBSET_BUDGET {
        k -= 1;
    }
    let mut best: Option<(usize, Vec<usize>)> = None;
    let mut idx: Vec<usize> = (0..r).collect();
    if k < r {
        return None;
    }
    loop {
        let weight: usize = idx.iter().map(|&i| words[i].word.len()).sum();
        if best.as_ref().is_none_or(|(w, _)| weight < *w) {
            let m: Vec<Vec<i64>> = idx.iter().map(|&i| coords[i].clone()).collect();
            if det_i128(&m).abs() == 1 {
                best = Some((weight, idx.clone()));
            }
        }
        let mut p = r;
        loop {
            if p == 0 {
                return best.map(|(_, s)| s);
            }
            p -= 1;
            if idx[p] < k - r + p {
                break;
            }
        }
        idx[p] += 1;
        for q in p + 1..r {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// Harvests translation words by breadth-first search until they generate the
/// translation subgroup and contain a basis of it.
pub fn shortest_translation_words(group: &MatrixGroup, options: &HarvestOptions) -> Result<TranslationHarvest> {
    let target = match options.stabilization {
        None => Some(translation_subgroup(group, options.closure_bound)?.0),
        Some(_) => None,
    };
    let d = group.dim();
    let mut bfs = Bfs::new(group, options.memory_bound)?;
    let mut all: Vec<TranslationWord> = Vec::new();
    let mut seen: HashSet<Vec<Rational>> = HashSet::new();
    let mut harvested = TranslationLattice::zero(d);
    let mut complete_radius: Option<usize> = None;
    let mut stable_for = 0;
    let mut max_rank_seen = 0;
    let mut basis: Option<Vec<TranslationWord>> = None;
    loop {
        let radius = bfs.ball.radius;
        if complete_radius.is_none() {
            let done = match (&target, options.stabilization) {
                (Some(t), _) => harvested == *t,
                (None, Some(k)) => harvested.rank() > 0 && harvested.rank() == max_rank_seen && stable_for >= k,
                (None, None) => unreachable!(),
            };
            if done {
                complete_radius = Some(match options.stabilization {
                    Some(k) => radius - k,
                    None => radius,
                });
            }
        }
        if let (Some(_), None) = (complete_radius, &basis) {
            let lattice = target.clone().unwrap_or_else(|| harvested.clone());
            let coords: Vec<Vec<i64>> = all
                .iter()
                .map(|t| lattice.solve(&t.vector).ok_or(Error::NotInLattice))
                .collect::<Result<_>>()?;
            if let Some(s) = basis_subset(&all, &coords, lattice.rank()) {
                basis = Some(s.into_iter().map(|i| all[i].clone()).collect());
            }
        }
        if let (Some(b), Some(cr)) = (&basis, complete_radius) {
            if radius >= options.min_radius {
                let lattice = target.unwrap_or(harvested);
                return Ok(TranslationHarvest {
                    lattice,
                    basis: b.clone(),
                    complete_radius: cr,
                    searched_radius: radius,
                    all,
                });
            }
        }
        if radius >= options.radius_cap {
            return Err(Error::RankNotReached { radius });
        }
        let fresh = bfs.grow()?;
        let mut new_vectors = Vec::new();
        for i in fresh {
            let g = &bfs.ball.elements[i];
            if !group.is_translation(g) {
                continue;
            }
            let v = group.translation(g);
            let neg: Vec<Rational> = v.iter().map(|x| -x).collect();
            if seen.contains(&v) || seen.contains(&neg) {
                continue;
            }
            seen.insert(v.clone());
            all.push(TranslationWord { word: bfs.ball.word(i), vector: v.clone() });
            new_vectors.push(v);
        }
        let next = harvested.extend(&new_vectors);
        if next == harvested {
            stable_for += 1;
        } else {
            stable_for = 0;
            max_rank_seen = max_rank_seen.max(next.rank());
            harvested = next;
        }
    }
}

/// Minimal-length words evaluating to a target element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicSet {
    pub length: usize,
    pub count: u128,
    pub words: Option<Vec<Word>>,
}

/// Counts geodesic words to `target` by layered path counting.
/// With `list_up_to`, also lists the words when there are at most that many.
pub fn geodesics(group: &MatrixGroup, target: &Element, cap: usize, list_up_to: Option<u128>) -> Result<GeodesicSet> {
    check_generators(group)?;
    let mut bfs = Bfs::new(group, DEFAULT_MEMORY_BOUND)?;
    let mut counts: Vec<u128> = vec![1];
    loop {
        if let Some(i) = bfs.ball.position(target) {
            let length = bfs.ball.distance(i);
            let count = counts[i];
            let words = match list_up_to {
                Some(limit) if count <= limit => Some(list_geodesics(group, &bfs.ball, i)?),
                _ => None,
            };
            return Ok(GeodesicSet { length, count, words });
        }
        if bfs.ball.radius >= cap {
            return Err(Error::Unreachable(cap));
        }
        let prev = bfs.frontier.clone();
        let fresh = bfs.grow()?;
        counts.resize(fresh.end, 0);
        for e in prev {
            for code in 0..group.letter_count() {
                let g = group.step(&bfs.ball.elements[e], Letter::from_code(code))?;
                if let Some(j) = bfs.ball.position(&g) {
                    if fresh.contains(&j) {
                        counts[j] = counts[j].checked_add(counts[e]).ok_or(Error::Overflow)?;
                    }
                }
            }
        }
    }
}

fn list_geodesics(group: &MatrixGroup, ball: &Ball, target: usize) -> Result<Vec<Word>> {
    // Walk backwards through predecessors one layer closer to the identity.
    fn walk(group: &MatrixGroup, ball: &Ball, at: usize, suffix: &mut Vec<Letter>, out: &mut Vec<Word>) -> Result<()> {
        if ball.distance(at) == 0 {
            out.push(Word(suffix.iter().rev().copied().collect()));
            return Ok(());
        }
        for code in 0..group.letter_count() {
            let l = Letter::from_code(code);
            let prev = group.step(&ball.elements()[at], l.inv())?;
            if let Some(p) = ball.position(&prev) {
                if ball.distance(p) + 1 == ball.distance(at) {
                    suffix.push(l);
                    walk(group, ball, p, suffix, out)?;
                    suffix.pop();
                }
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(group, ball, target, &mut Vec::new(), &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Number of monotone lattice paths to `v` in `Z^d` with unit steps.
pub fn lattice_geodesic_count(v: &[i64]) -> Option<u128> {
    let mut total: u128 = 0;
    let mut acc: u128 = 1;
    for &x in v {
        let k = x.unsigned_abs() as u128;
        for i in 1..=k {
            total += 1;
            acc = acc.checked_mul(total)? / i;
        }
    }
    Some(acc)
}

/// Length of the shortest closed word that uses `generator` an odd number of times.
pub fn odd_girth(group: &MatrixGroup, generator: usize, cap: usize) -> Result<usize> {
    check_generators(group)?;
    let mut seen: HashSet<(Element, bool)> = HashSet::new();
    let start = (group.identity(), false);
    seen.insert(start.clone());
    let mut layer = vec![start];
    for len in 1..=cap {
        let mut next = Vec::new();
        for (g, parity) in &layer {
            for code in 0..group.letter_count() {
                let l = Letter::from_code(code);
                let h = group.step(g, l)?;
                let p = *parity ^ (l.generator() == generator);
                if p && group.is_identity(&h) {
                    return Ok(len);
                }
                let state = (h, p);
                if seen.insert(state.clone()) {
                    next.push(state);
                }
            }
        }
        layer = next;
    }
    Err(Error::Unreachable(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::AffineIsometry;
    use crate::rational::{frac, int};
    use crate::symop::parse_symop;

    fn translations(vs: &[&[i64]]) -> MatrixGroup {
        let gens: Vec<AffineIsometry> = vs
            .iter()
            .map(|v| AffineIsometry::from_translation(v.iter().map(|&x| int(x)).collect()))
            .collect();
        MatrixGroup::new(&gens).unwrap()
    }

    fn elv() -> MatrixGroup {
        let gens: Vec<_> = ["x,-y,-z", "-x,y,1-z", "1/2+z,1/2-x,3/2-y"]
            .iter()
            .map(|s| parse_symop(s, 3).unwrap())
            .collect();
        MatrixGroup::new(&gens).unwrap()
    }

    /// Lattice points of Z^3 by L1 norm.
    fn l1_spheres(r: i64) -> Vec<usize> {
        let mut out = vec![0; r as usize + 1];
        for x in -r..=r {
            for y in -r..=r {
                for z in -r..=r {
                    let n = x.abs() + y.abs() + z.abs();
                    if n <= r {
                        out[n as usize] += 1;
                    }
                }
            }
        }
        out
    }

    #[test]
    fn cubic_lattice_spheres() {
        let g = translations(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(ball(&g, 2).unwrap().sphere_sizes(), &[1, 6, 18]);
        assert_eq!(coordination_sequence(&g, 6).unwrap(), l1_spheres(6));
        assert_eq!(ball(&g, 0).unwrap().sphere_sizes(), &[1]);
    }

    #[test]
    fn identity_generator_rejected() {
        let g = translations(&[&[1, 0], &[0, 0]]);
        assert!(matches!(ball(&g, 1), Err(Error::IdentityGenerator(_))));
    }

    #[test]
    fn elv_spheres_and_translation_words() {
        let g = elv();
        assert_eq!(coordination_sequence(&g, 6).unwrap(), vec![1, 4, 12, 36, 108, 324, 914]);
        let h = shortest_translation_words(&g, &HarvestOptions { min_radius: 6, ..Default::default() }).unwrap();
        let words: Vec<(usize, Vec<Rational>)> = h.words().iter().map(|t| (t.word.len(), t.vector.clone())).collect();
        let v = |a: (i64, i64), b: (i64, i64), c: (i64, i64)| vec![frac(a.0, a.1), frac(b.0, b.1), frac(c.0, c.1)];
        assert_eq!(
            words,
            vec![
                (3, v((3, 2), (-3, 2), (3, 2))),
                (4, v((0, 1), (0, 1), (2, 1))),
                (4, v((0, 1), (2, 1), (-1, 1))),
                (4, v((1, 1), (0, 1), (2, 1))),
            ]
        );
        assert_eq!(h.first_appearance(&v((-1, 2), (1, 2), (1, 2))), Some(6));
        assert_eq!(h.lattice.rank(), 3);
        for t in &h.all {
            let e = g.evaluate(&t.word).unwrap();
            assert_eq!(g.translation(&e), t.vector);
        }
    }

    #[test]
    fn plane_generators_give_unit_words() {
        let g = translations(&[&[1, 0], &[0, 1], &[1, 1]]);
        let h = shortest_translation_words(&g, &HarvestOptions::default()).unwrap();
        assert!(h.basis.iter().all(|t| t.word.len() == 1));
        assert_eq!(h.complete_radius, 1);
    }

    #[test]
    fn heuristic_mode_agrees_on_elv() {
        let g = elv();
        let opts = HarvestOptions { stabilization: Some(3), ..Default::default() };
        let h = shortest_translation_words(&g, &opts).unwrap();
        let exact = translation_subgroup(&g, 1000).unwrap();
        assert_eq!(h.lattice, exact.0);
        // the linear parts form the rotation group 23
        assert_eq!(exact.1, 12);
    }

    #[test]
    fn grid_geodesics_match_binomials() {
        let g = translations(&[&[1, 0], &[0, 1]]);
        let id = AffineIsometry::identity(2);
        let t = |x: i64, y: i64| g.from_isometry(&AffineIsometry::from_translation(vec![int(x), int(y)])).unwrap();
        assert_eq!(geodesics(&g, &g.from_isometry(&id).unwrap(), 5, None).unwrap().count, 1);
        let s = geodesics(&g, &t(4, 12), 20, None).unwrap();
        assert_eq!((s.length, s.count), (16, 1820));
        let s = geodesics(&g, &t(5, 12), 20, None).unwrap();
        assert_eq!((s.length, s.count), (17, 6188));
        let s = geodesics(&g, &t(2, -1), 5, Some(10)).unwrap();
        assert_eq!(s.words.unwrap().len(), 3);
        assert!(matches!(geodesics(&g, &t(9, 9), 4, None), Err(Error::Unreachable(4))));
    }

    #[test]
    fn multinomial_oracle() {
        assert_eq!(lattice_geodesic_count(&[4, 12]), Some(1820));
        assert_eq!(lattice_geodesic_count(&[5, 12]), Some(6188));
        assert_eq!(lattice_geodesic_count(&[0, 0]), Some(1));
        assert_eq!(lattice_geodesic_count(&[1, 1, 1]), Some(6));
    }

    #[test]
    fn odd_cycles_in_plane_families() {
        for n in 1..=4 {
            let g = translations(&[&[1, 0], &[0, 1], &[n, n]]);
            assert_eq!(odd_girth(&g, 2, 20).unwrap(), (2 * n + 1) as usize);
        }
    }
}
