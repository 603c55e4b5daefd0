//! Todd-Coxeter coset enumeration with HLT and Felsch strategies.
//!
//! Coincidences are resolved with union-find; a coset is live iff it is its
//! own representative. Every entry of a live coset points to a live coset
//! once coincidence processing has returned.

use crate::words::{cyclic_reduce, Presentation, Word};

const UNDEF: u32 = u32::MAX;

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Relator-driven scan-and-fill.
    Hlt,
    /// Definition-driven with deduction processing.
    Felsch,
    /// HLT, then Felsch if HLT overflows. Felsch stalls on presentations whose
    /// relators are all long, since no deduction closes before the ball is large.
    #[default]
    Mixed,
}

/// A closed coset table: `act(c, letter)` is the coset `c . letter`; coset 0 is the subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    width: usize,
    rows: Vec<u32>,
}

impl CosetTable {
    pub fn index(&self) -> usize {
        if self.width == 0 {
            1
        } else {
            self.rows.len() / self.width
        }
    }

    pub fn act(&self, coset: usize, letter_code: usize) -> usize {
        self.rows[coset * self.width + letter_code] as usize
    }

    pub fn trace(&self, coset: usize, w: &Word) -> usize {
        w.letters().iter().fold(coset, |c, l| self.act(c, l.code()))
    }

    /// Each letter acts as a permutation inverse to its partner letter.
    pub fn is_permutation_table(&self) -> bool {
        let n = self.index();
        (0..self.width).all(|x| {
            let mut seen = vec![false; n];
            (0..n).all(|c| {
                let d = self.act(c, x);
                let fresh = !std::mem::replace(&mut seen[d], true);
                fresh && self.act(d, x ^ 1) == c
            })
        })
    }

    /// Every relator traces a closed loop at every coset.
    pub fn relators_hold(&self, relators: &[Word]) -> bool {
        (0..self.index()).all(|c| relators.iter().all(|r| self.trace(c, r) == c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration {
    Complete(CosetTable),
    Overflow,
}

impl Enumeration {
    pub fn index(&self) -> Option<usize> {
        match self {
            Enumeration::Complete(t) => Some(t.index()),
            Enumeration::Overflow => None,
        }
    }
}

struct Enumerator {
    width: usize,
    table: Vec<u32>,
    parent: Vec<u32>,
    max: usize,
    relators: Vec<Vec<usize>>,
    subgroup: Vec<Vec<usize>>,
    cycles: Vec<Vec<Vec<usize>>>,
    deductions: Vec<(u32, usize)>,
    felsch: bool,
    overflow: bool,
}

impl Enumerator {
    fn new(p: &Presentation, subgroup: &[Word], max: usize, strategy: Strategy) -> Self {
        let width = 2 * p.generator_count();
        let codes = |w: &Word| w.letters().iter().map(|l| l.code()).collect::<Vec<usize>>();
        let mut relators: Vec<Vec<usize>> = p
            .relators
            .iter()
            .map(cyclic_reduce)
            .filter(|r| !r.is_empty())
            .map(|r| codes(&r))
            .collect();
        relators.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        relators.dedup();
        let mut cycles = vec![Vec::new(); width];
        for r in &relators {
            let inv: Vec<usize> = r.iter().rev().map(|&x| x ^ 1).collect();
            for w in [r, &inv] {
                for k in 0..w.len() {
                    let mut rot = w[k..].to_vec();
                    rot.extend_from_slice(&w[..k]);
                    let bucket: &mut Vec<Vec<usize>> = &mut cycles[rot[0]];
                    if !bucket.contains(&rot) {
                        bucket.push(rot);
                    }
                }
            }
        }
        let subgroup = subgroup.iter().map(codes).filter(|w| !w.is_empty()).collect();
        let mut e = Enumerator {
            width,
            table: Vec::new(),
            parent: Vec::new(),
            max: max.max(1),
            relators,
            subgroup,
            cycles,
            deductions: Vec::new(),
            felsch: strategy == Strategy::Felsch,
            overflow: false,
        };
        e.table.extend(std::iter::repeat_n(UNDEF, width));
        e.parent.push(0);
        e
    }

    fn get(&self, c: u32, x: usize) -> u32 {
        self.table[c as usize * self.width + x]
    }

    fn set(&mut self, c: u32, x: usize, v: u32) {
        self.table[c as usize * self.width + x] = v;
    }

    fn live(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn count(&self) -> usize {
        self.parent.len()
    }

    fn define(&mut self, c: u32, x: usize) -> bool {
        if self.count() >= self.max {
            self.overflow = true;
            return false;
        }
        let b = self.count() as u32;
        self.table.extend(std::iter::repeat_n(UNDEF, self.width));
        self.parent.push(b);
        self.set(c, x, b);
        self.set(b, x ^ 1, c);
        if self.felsch {
            self.deductions.push((c, x));
        }
        true
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut k = c;
        while self.parent[k as usize] != r {
            let next = self.parent[k as usize];
            self.parent[k as usize] = r;
            k = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32, queue: &mut Vec<u32>) {
        let a = self.rep(k);
        let b = self.rep(l);
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi as usize] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..self.width {
                let d = self.get(g, x);
                if d == UNDEF {
                    continue;
                }
                if self.get(d, x ^ 1) == g {
                    self.set(d, x ^ 1, UNDEF);
                }
                let m = self.rep(g);
                let n = self.rep(d);
                let mx = self.get(m, x);
                if mx != UNDEF {
                    self.merge(n, mx, &mut queue);
                } else {
                    let nx = self.get(n, x ^ 1);
                    if nx != UNDEF {
                        self.merge(m, nx, &mut queue);
                    } else {
                        self.set(m, x, n);
                        self.set(n, x ^ 1, m);
                        if self.felsch {
                            self.deductions.push((m, x));
                        }
                    }
                }
            }
        }
    }

    /// Scans `w` at `a`; with `fill`, defines new cosets to close the loop.
    fn scan(&mut self, a: u32, w: &[usize], fill: bool) {
        if w.is_empty() {
            return;
        }
        let r = w.len();
        let mut f = a;
        let mut i = 0;
        let mut b = a;
        let mut j = r;
        loop {
            while i < r {
                let n = self.get(f, w[i]);
                if n == UNDEF {
                    break;
                }
                f = n;
                i += 1;
            }
            if i == r {
                if f != a {
                    self.coincidence(f, a);
                }
                return;
            }
            while j > i {
                let n = self.get(b, w[j - 1] ^ 1);
                if n == UNDEF {
                    break;
                }
                b = n;
                j -= 1;
            }
            if j == i {
                self.coincidence(f, b);
                return;
            }
            if j == i + 1 {
                self.set(f, w[i], b);
                self.set(b, w[i] ^ 1, f);
                if self.felsch {
                    self.deductions.push((f, w[i]));
                }
                return;
            }
            if !fill || !self.define(f, w[i]) {
                return;
            }
        }
    }

    fn process_deductions(&mut self) {
        let subgroup = std::mem::take(&mut self.subgroup);
        while let Some((a, x)) = self.deductions.pop() {
            if self.overflow {
                break;
            }
            if !self.live(a) {
                continue;
            }
            let cycles = std::mem::take(&mut self.cycles[x]);
            for w in &cycles {
                self.scan(a, w, false);
                if !self.live(a) {
                    break;
                }
            }
            self.cycles[x] = cycles;
            if self.live(a) {
                let b = self.get(a, x);
                if b != UNDEF {
                    let cycles = std::mem::take(&mut self.cycles[x ^ 1]);
                    for w in &cycles {
                        self.scan(b, w, false);
                        if !self.live(b) {
                            break;
                        }
                    }
                    self.cycles[x ^ 1] = cycles;
                }
            }
            for w in &subgroup {
                self.scan(0, w, false);
            }
        }
        self.subgroup = subgroup;
    }

    fn first_gap(&self, from: usize) -> Option<(u32, usize)> {
        (from..self.count()).find_map(|c| {
            let c = c as u32;
            if !self.live(c) {
                return None;
            }
            (0..self.width).find(|&x| self.get(c, x) == UNDEF).map(|x| (c, x))
        })
    }

    fn run(mut self) -> Enumeration {
        if self.width == 0 {
            return Enumeration::Complete(CosetTable { width: 0, rows: Vec::new() });
        }
        let subgroup = self.subgroup.clone();
        for w in &subgroup {
            self.scan(0, w, true);
            if self.felsch {
                self.process_deductions();
            }
            if self.overflow {
                return Enumeration::Overflow;
            }
        }
        if self.felsch {
            let mut from = 0;
            loop {
                let gap = self.first_gap(from).or_else(|| self.first_gap(0));
                let Some((c, x)) = gap else { break };
                from = c as usize;
                if !self.define(c, x) {
                    return Enumeration::Overflow;
                }
                self.process_deductions();
                if self.overflow {
                    return Enumeration::Overflow;
                }
            }
        } else {
            let relators = std::mem::take(&mut self.relators);
            let mut a = 0u32;
            while (a as usize) < self.count() {
                for r in &relators {
                    if !self.live(a) {
                        break;
                    }
                    self.scan(a, r, true);
                    if self.overflow {
                        return Enumeration::Overflow;
                    }
                }
                for x in 0..self.width {
                    if self.live(a) && self.get(a, x) == UNDEF && !self.define(a, x) {
                        return Enumeration::Overflow;
                    }
                }
                a += 1;
            }
        }
        Enumeration::Complete(self.compact())
    }

    fn compact(&self) -> CosetTable {
        let mut number = vec![UNDEF; self.count()];
        let mut next = 0u32;
        for c in 0..self.count() {
            if self.live(c as u32) {
                number[c] = next;
                next += 1;
            }
        }
        let mut rows = Vec::with_capacity(next as usize * self.width);
        for c in 0..self.count() {
            if self.live(c as u32) {
                for x in 0..self.width {
                    rows.push(number[self.get(c as u32, x) as usize]);
                }
            }
        }
        CosetTable { width: self.width, rows }
    }
}

/// Index of the subgroup generated by `subgroup` in the group presented by `p`.
pub fn coset_enumerate(p: &Presentation, subgroup: &[Word], max_cosets: usize) -> Enumeration {
    coset_enumerate_with(p, subgroup, max_cosets, Strategy::default())
}

pub fn coset_enumerate_with(
    p: &Presentation,
    subgroup: &[Word],
    max_cosets: usize,
    strategy: Strategy,
) -> Enumeration {
    match strategy {
        Strategy::Mixed => match Enumerator::new(p, subgroup, max_cosets, Strategy::Hlt).run() {
            Enumeration::Overflow => Enumerator::new(p, subgroup, max_cosets, Strategy::Felsch).run(),
            done => done,
        },
        s => Enumerator::new(p, subgroup, max_cosets, s).run(),
    }
}

/// Order of the presented group, if the enumeration finishes.
pub fn group_order(p: &Presentation, max_cosets: usize) -> Option<usize> {
    coset_enumerate(p, &[], max_cosets).index()
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail { found: usize },
    Inconclusive,
}

/// Enumerates `p` with `extra` relators over the trivial subgroup and compares with `expected`.
pub fn order_check(p: &Presentation, extra: &[Word], expected: usize, max_cosets: usize) -> Verdict {
    match group_order(&p.with_extra(extra), max_cosets) {
        Some(n) if n == expected => Verdict::Pass,
        Some(n) => Verdict::Fail { found: n },
        None => Verdict::Inconclusive,
    }
}
