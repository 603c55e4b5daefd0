//! Deterministic relator-level Tietze simplification.
//!
//! Relators are stored in canonical form (see [`canonical_relator`]) and sorted
//! shortlex. A rewrite of `s` by `r` finds a cyclic piece `u` of `s` that is a
//! prefix of a cyclic conjugate `u v` of `r` or `r^-1`, with `2|u| >= |r|`,
//! and replaces `u` by `v^-1`. Rewrites either shorten `s` or keep its length
//! and lower it in shortlex order, so the process terminates.

use std::collections::{BTreeMap, BTreeSet};

use crate::words::{canonical_relator, Presentation, Word};

pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TietzeOutcome {
    pub presentation: Presentation,
    pub steps: usize,
    /// The budget ran out before a fixpoint.
    pub exhausted: bool,
}

fn conjugates(r: &Word) -> Vec<Word> {
    let inv = r.inverse();
    let mut out: Vec<Word> = (0..r.len()).flat_map(|k| [r.rotate(k), inv.rotate(k)]).collect();
    out.sort();
    out.dedup();
    out
}

/// Best single rewrite of `s` by `r`, if any.
fn rewrite(s: &Word, r: &Word) -> Option<Word> {
    if r.is_empty() || r.len() > s.len() {
        return None;
    }
    let conj = conjugates(r);
    let mut best: Option<Word> = None;
    for k in 0..s.len() {
        let rot = s.rotate(k);
        for c in &conj {
            let l = rot.letters().iter().zip(c.letters()).take_while(|(x, y)| x == y).count();
            if 2 * l < r.len() {
                continue;
            }
            let mut v = Word(c.letters()[l..].to_vec()).inverse().0;
            v.extend_from_slice(&rot.letters()[l..]);
            let cand = canonical_relator(&Word(v));
            let better = cand.len() < s.len() || (cand.len() == s.len() && cand < *s);
            if better && best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best
}

fn normalize(relators: &[Word]) -> Vec<Word> {
    let mut out: Vec<Word> = relators
        .iter()
        .map(canonical_relator)
        .filter(|r| !r.is_empty())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// A relator with the set of input relators it was derived from.
pub type Tagged = (Word, BTreeSet<usize>);

fn normalize_tagged(relators: Vec<Tagged>) -> Vec<Tagged> {
    let mut map: BTreeMap<Word, BTreeSet<usize>> = BTreeMap::new();
    for (w, tags) in relators {
        let c = canonical_relator(&w);
        if !c.is_empty() {
            map.entry(c).or_default().extend(tags);
        }
    }
    map.into_iter().collect()
}

/// Simplifies the relators of `p` by rewriting, deduplication and removal of
/// trivial relators. The group is unchanged and total length never grows.
pub fn tietze_simplify(p: &Presentation, budget: usize) -> TietzeOutcome {
    let tagged = p.relators.iter().enumerate().map(|(i, w)| (w.clone(), BTreeSet::from([i]))).collect();
    let (rels, steps, exhausted) = tietze_simplify_tagged(tagged, budget);
    TietzeOutcome {
        presentation: Presentation::new(p.names.clone(), rels.into_iter().map(|(w, _)| w).collect()),
        steps,
        exhausted,
    }
}

/// As [`tietze_simplify`], carrying origin tags: a rewrite of `s` by `r`
/// gives the result the union of both tag sets.
pub fn tietze_simplify_tagged(relators: Vec<Tagged>, budget: usize) -> (Vec<Tagged>, usize, bool) {
    let mut rels = normalize_tagged(relators);
    let mut steps = 0;
    'outer: loop {
        if steps >= budget {
            return (rels, steps, true);
        }
        for si in (0..rels.len()).rev() {
            for ri in 0..rels.len() {
                if ri == si {
                    continue;
                }
                if let Some(new) = rewrite(&rels[si].0, &rels[ri].0) {
                    let tags: BTreeSet<usize> = rels[si].1.union(&rels[ri].1).copied().collect();
                    rels[si] = (new, tags);
                    rels = normalize_tagged(rels);
                    steps += 1;
                    continue 'outer;
                }
            }
        }
        return (rels, steps, false);
    }
}

/// Rewrites `s` alone against `others` until no rule applies. An empty result
/// proves `s` is a consequence of `others`.
pub fn reduce_with(s: &Word, others: &[Word], budget: usize) -> Word {
    let others = normalize(others);
    let mut cur = canonical_relator(s);
    for _ in 0..budget {
        if cur.is_empty() {
            break;
        }
        match others.iter().find_map(|r| rewrite(&cur, r)) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}
