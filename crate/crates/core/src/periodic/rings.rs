//! Strong rings: cycles that are not GF(2) sums of strictly smaller cycles.
//!
//! The smaller cycles are taken from the ball of radius `|C|` around the base
//! vertex (`|C| + 2` when widened). Their span is generated by Horton cycles
//! `P(x, y) + yz + P(z, x)` over roots `x` in the region, since every cycle is
//! the sum of the Horton cycles rooted at one of its vertices, each no longer
//! than the cycle itself.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;

use super::{LabeledQuotientGraph, Node};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_RING: usize = 14;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingOptions {
    pub max_size: usize,
    /// Enlarge the locality ball by 2.
    pub widen: bool,
    /// Record a decomposition for every rejected cycle.
    pub witnesses: bool,
}

impl Default for RingOptions {
    fn default() -> Self {
        RingOptions { max_size: DEFAULT_MAX_RING, widen: false, witnesses: false }
    }
}

impl RingOptions {
    pub fn up_to(max_size: usize) -> Self {
        RingOptions { max_size, ..Default::default() }
    }
}

/// A cycle through the base node; `nodes[0]` is the base, and the orientation
/// puts the smaller of the two neighbours of the base second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ring {
    pub nodes: Vec<Node>,
}

impl Ring {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edges(&self) -> Vec<(Node, Node)> {
        let n = self.nodes.len();
        (0..n).map(|i| (self.nodes[i].clone(), self.nodes[(i + 1) % n].clone())).collect()
    }
}

/// A cycle shown to be a sum of smaller ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RejectedCycle {
    pub cycle: Ring,
    /// Edge sets of strictly smaller cycles summing to `cycle`; empty unless requested.
    pub witness: Vec<Vec<(Node, Node)>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingAnalysis {
    pub base: usize,
    pub max_size: usize,
    pub rings: Vec<Ring>,
    pub rejected: Vec<RejectedCycle>,
}

impl RingAnalysis {
    pub fn symbol(&self) -> RingSymbol {
        let mut counts = BTreeMap::new();
        for r in &self.rings {
            *counts.entry(r.len()).or_insert(0) += 1;
        }
        RingSymbol { counts }
    }

    /// Checks each witness: every part is a closed edge set with fewer edges than
    /// the rejected cycle, and the parts sum to it over GF(2).
    pub fn witnesses_hold(&self, g: &LabeledQuotientGraph) -> bool {
        self.rejected.iter().all(|r| {
            let target = edge_key_set(&r.cycle.edges());
            let mut sum: HashSet<(Node, Node)> = HashSet::new();
            for part in &r.witness {
                let set = edge_key_set(part);
                if set.len() != part.len() || set.len() >= r.cycle.len() || !closed(&set) || !edges_exist(g, &set) {
                    return false;
                }
                for e in set {
                    if !sum.remove(&e) {
                        sum.insert(e);
                    }
                }
            }
            sum == target
        })
    }
}

fn edge_key(a: &Node, b: &Node) -> (Node, Node) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

fn edge_key_set(edges: &[(Node, Node)]) -> HashSet<(Node, Node)> {
    edges.iter().map(|(a, b)| edge_key(a, b)).collect()
}

fn closed(set: &HashSet<(Node, Node)>) -> bool {
    let mut degree: HashMap<&Node, usize> = HashMap::new();
    for (a, b) in set {
        *degree.entry(a).or_default() += 1;
        *degree.entry(b).or_default() += 1;
    }
    !set.is_empty() && degree.values().all(|d| d % 2 == 0)
}

fn edges_exist(g: &LabeledQuotientGraph, set: &HashSet<(Node, Node)>) -> bool {
    set.iter().all(|(a, b)| g.neighbors(a).any(|m| m == *b))
}

/// Multiset of ring sizes at a vertex; displayed as `4^3.8^4`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RingSymbol {
    pub counts: BTreeMap<usize, usize>,
}

impl RingSymbol {
    pub fn parse(text: &str) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for part in text.split('.') {
            let (size, count) = part.split_once('^').unwrap_or((part, "1"));
            let size: usize = size.trim().parse().map_err(|_| Error::Invalid(format!("bad ring symbol `{text}`")))?;
            let count: usize = count.trim().parse().map_err(|_| Error::Invalid(format!("bad ring symbol `{text}`")))?;
            *counts.entry(size).or_insert(0) += count;
        }
        Ok(RingSymbol { counts })
    }

    /// The part of the symbol for ring sizes up to `max`.
    pub fn truncated(&self, max: usize) -> RingSymbol {
        RingSymbol { counts: self.counts.range(..=max).map(|(&k, &v)| (k, v)).collect() }
    }
}

impl fmt::Display for RingSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "-");
        }
        let parts: Vec<String> = self.counts.iter().map(|(s, c)| format!("{s}^{c}")).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// GF(2) row with an optional record of the Horton cycles it combines.
#[derive(Clone)]
struct Row {
    bits: Vec<u64>,
    combo: Vec<u64>,
}

fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn lowest_bit(bits: &[u64], from_word: usize) -> Option<usize> {
    bits[from_word..]
        .iter()
        .position(|&w| w != 0)
        .map(|i| (from_word + i) * 64 + bits[from_word + i].trailing_zeros() as usize)
}

/// Echelon basis keyed by lowest set bit; rows have no bits below their pivot.
struct Echelon {
    rows: HashMap<usize, Row>,
    track: bool,
}

impl Echelon {
    /// Reduces `row` in place; returns the pivot it would occupy, or `None` if in the span.
    fn reduce(&self, row: &mut Row) -> Option<usize> {
        let mut word = 0;
        while let Some(p) = lowest_bit(&row.bits, word) {
            match self.rows.get(&p) {
                Some(b) => {
                    xor_into(&mut row.bits, &b.bits);
                    if self.track {
                        xor_into(&mut row.combo, &b.combo);
                    }
                    word = p / 64;
                }
                None => return Some(p),
            }
        }
        None
    }

    fn insert(&mut self, mut row: Row) {
        if let Some(p) = self.reduce(&mut row) {
            self.rows.insert(p, row);
        }
    }
}

struct Region {
    nodes: Vec<Node>,
    dist: Vec<usize>,
    adj: Vec<Vec<u32>>,
    edge_id: HashMap<(u32, u32), u32>,
    edge_ends: Vec<(u32, u32)>,
}

impl Region {
    fn new(g: &LabeledQuotientGraph, base: usize, radius: usize) -> Self {
        let ball = g.ball(base, radius);
        let index: HashMap<Node, u32> = ball.iter().enumerate().map(|(i, (n, _))| (n.clone(), i as u32)).collect();
        let mut adj = vec![Vec::new(); ball.len()];
        let mut edge_id = HashMap::new();
        let mut edge_ends = Vec::new();
        for (i, (n, _)) in ball.iter().enumerate() {
            for m in g.neighbors(n) {
                if let Some(&j) = index.get(&m) {
                    adj[i].push(j);
                    let key = (i.min(j as usize) as u32, i.max(j as usize) as u32);
                    edge_id.entry(key).or_insert_with(|| {
                        edge_ends.push(key);
                        (edge_ends.len() - 1) as u32
                    });
                }
            }
        }
        Region {
            nodes: ball.iter().map(|(n, _)| n.clone()).collect(),
            dist: ball.iter().map(|(_, d)| *d).collect(),
            adj,
            edge_id,
            edge_ends,
        }
    }

    fn edge(&self, a: u32, b: u32) -> u32 {
        self.edge_id[&(a.min(b), a.max(b))]
    }

    fn words(&self) -> usize {
        self.edge_ends.len().div_ceil(64)
    }

    fn bits(&self, edges: &[u32]) -> Vec<u64> {
        let mut bits = vec![0u64; self.words()];
        for &e in edges {
            bits[e as usize / 64] ^= 1 << (e % 64);
        }
        bits
    }

    /// Simple cycles through node 0 of length at most `max`, one per orientation pair.
    fn base_cycles(&self, max: usize) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut path = vec![0u32];
        let mut on_path = vec![false; self.nodes.len()];
        on_path[0] = true;
        self.extend(&mut path, &mut on_path, max, &mut out);
        out
    }

    fn extend(&self, path: &mut Vec<u32>, on_path: &mut [bool], max: usize, out: &mut Vec<Vec<u32>>) {
        let last = *path.last().expect("path starts at the base");
        let len = path.len();
        for &m in &self.adj[last as usize] {
            if m == 0 {
                if len >= 3 && path[1] < last {
                    out.push(path.clone());
                }
                continue;
            }
            if on_path[m as usize] || len + self.dist[m as usize] > max {
                continue;
            }
            on_path[m as usize] = true;
            path.push(m);
            self.extend(path, on_path, max, out);
            path.pop();
            on_path[m as usize] = false;
        }
    }

    /// Distinct Horton cycles of at most `max` edges, as sorted edge lists.
    fn horton_cycles(&self, max: usize) -> Vec<Vec<u32>> {
        let depth = max.saturating_sub(1) / 2;
        let per_root: Vec<Vec<Vec<u32>>> = (0..self.nodes.len())
            .into_par_iter()
            .map(|x| {
                let mut parent: HashMap<u32, u32> = HashMap::from([(x as u32, x as u32)]);
                let mut level: HashMap<u32, usize> = HashMap::from([(x as u32, 0)]);
                let mut order = vec![x as u32];
                let mut i = 0;
                while i < order.len() {
                    let y = order[i];
                    i += 1;
                    let ly = level[&y];
                    if ly == depth {
                        continue;
                    }
                    for &z in &self.adj[y as usize] {
                        if let std::collections::hash_map::Entry::Vacant(e) = level.entry(z) {
                            e.insert(ly + 1);
                            parent.insert(z, y);
                            order.push(z);
                        }
                    }
                }
                let path_edges = |mut v: u32| {
                    let mut es = Vec::new();
                    while parent[&v] != v {
                        let p = parent[&v];
                        es.push(self.edge(v, p));
                        v = p;
                    }
                    es
                };
                let mut found = Vec::new();
                for &y in &order {
                    for &z in &self.adj[y as usize] {
                        if z <= y || !level.contains_key(&z) || parent[&z] == y || parent[&y] == z {
                            continue;
                        }
                        if level[&y] + level[&z] + 1 > max {
                            continue;
                        }
                        let mut es = path_edges(y);
                        es.extend(path_edges(z));
                        es.push(self.edge(y, z));
                        es.sort_unstable();
                        let mut cancelled: Vec<u32> = Vec::with_capacity(es.len());
                        for e in es {
                            if cancelled.last() == Some(&e) {
                                cancelled.pop();
                            } else {
                                cancelled.push(e);
                            }
                        }
                        if !cancelled.is_empty() {
                            found.push(cancelled);
                        }
                    }
                }
                found
            })
            .collect();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in per_root.into_iter().flatten() {
            if seen.insert(c.clone()) {
                out.push(c);
            }
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }

    fn max_dist(&self, edges: &[u32]) -> usize {
        edges
            .iter()
            .map(|&e| {
                let (a, b) = self.edge_ends[e as usize];
                self.dist[a as usize].max(self.dist[b as usize])
            })
            .max()
            .unwrap_or(0)
    }

    fn edge_nodes(&self, edges: &[u32]) -> Vec<(Node, Node)> {
        edges
            .iter()
            .map(|&e| {
                let (a, b) = self.edge_ends[e as usize];
                (self.nodes[a as usize].clone(), self.nodes[b as usize].clone())
            })
            .collect()
    }
}

/// Strong rings through `(base, 0)` up to `options.max_size`.
pub fn strong_rings(g: &LabeledQuotientGraph, base: usize, options: &RingOptions) -> Result<RingAnalysis> {
    let max = options.max_size;
    if max < 3 {
        return Err(Error::Invalid("ring size cap must be at least 3".into()));
    }
    if base >= g.vertex_count() {
        return Err(Error::Invalid(format!("vertex {base} out of range")));
    }
    let extra = if options.widen { 2 } else { 0 };
    let region = Region::new(g, base, max + extra);
    let mut candidates = region.base_cycles(max);
    candidates.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let horton = region.horton_cycles(max - 1);
    let horton_dist: Vec<usize> = horton.iter().map(|c| region.max_dist(c)).collect();
    let combo_words = if options.witnesses { horton.len().div_ceil(64) } else { 0 };
    let mut basis = Echelon { rows: HashMap::new(), track: options.witnesses };
    let mut added = vec![false; horton.len()];
    let mut rings = Vec::new();
    let mut rejected = Vec::new();
    let mut next = 0;
    for k in 3..=max {
        for (i, c) in horton.iter().enumerate() {
            if c.len() >= k {
                break;
            }
            if !added[i] && horton_dist[i] <= k + extra {
                added[i] = true;
                let mut combo = vec![0u64; combo_words];
                if options.witnesses {
                    combo[i / 64] |= 1 << (i % 64);
                }
                basis.insert(Row { bits: region.bits(c), combo });
            }
        }
        while next < candidates.len() && candidates[next].len() == k {
            let cyc = &candidates[next];
            next += 1;
            let n = cyc.len();
            let edges: Vec<u32> = (0..n).map(|i| region.edge(cyc[i], cyc[(i + 1) % n])).collect();
            let mut row = Row { bits: region.bits(&edges), combo: vec![0u64; combo_words] };
            let ring = Ring { nodes: cyc.iter().map(|&i| region.nodes[i as usize].clone()).collect() };
            if basis.reduce(&mut row).is_some() {
                rings.push(ring);
            } else {
                let witness = (0..horton.len())
                    .filter(|&i| options.witnesses && row.combo[i / 64] >> (i % 64) & 1 == 1)
                    .map(|i| region.edge_nodes(&horton[i]))
                    .collect();
                rejected.push(RejectedCycle { cycle: ring, witness });
            }
        }
    }
    Ok(RingAnalysis { base, max_size: max, rings, rejected })
}

/// Ring symbol at one vertex.
pub fn vertex_symbol(g: &LabeledQuotientGraph, base: usize, options: &RingOptions) -> Result<RingSymbol> {
    Ok(strong_rings(g, base, options)?.symbol())
}

/// Ring symbol of a vertex-transitive graph; errors if vertices disagree.
pub fn schlafli_symbol(g: &LabeledQuotientGraph, options: &RingOptions) -> Result<RingSymbol> {
    let symbols: Vec<RingSymbol> = (0..g.vertex_count())
        .into_par_iter()
        .map(|v| vertex_symbol(g, v, options))
        .collect::<Result<_>>()?;
    if symbols.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::NotVertexTransitive);
    }
    Ok(symbols.into_iter().next().unwrap_or_default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::catalog_load;

    fn symbol(net: &str, max: usize) -> String {
        schlafli_symbol(&catalog_load(net).unwrap(), &RingOptions::up_to(max)).unwrap().to_string()
    }

    #[test]
    fn pcu_has_twelve_squares() {
        assert_eq!(symbol("pcu", 6), "4^12");
    }

    #[test]
    fn dia_has_twelve_hexagons_and_no_strong_octagons() {
        assert_eq!(symbol("dia", 8), "6^12");
    }

    #[test]
    fn hcb_and_sql() {
        assert_eq!(symbol("hcb", 8), "6^3");
        assert_eq!(symbol("sql", 6), "4^4");
    }

    #[test]
    fn nbo_octagons_are_sums_of_hexagons() {
        let g = catalog_load("nbo").unwrap();
        let a = strong_rings(&g, 0, &RingOptions { max_size: 8, widen: false, witnesses: true }).unwrap();
        assert_eq!(a.symbol().to_string(), "6^8");
        assert!(a.rejected.iter().any(|r| r.cycle.len() == 8 && r.witness.len() == 4 && r.witness.iter().all(|w| w.len() == 6)));
        assert!(a.witnesses_hold(&g));
    }

    #[test]
    fn symbol_text_round_trip() {
        let s = RingSymbol::parse("10^5.14^14").unwrap();
        assert_eq!(s.to_string(), "10^5.14^14");
        assert_eq!(RingSymbol::parse("4^3.8^4").unwrap().truncated(4).to_string(), "4^3");
    }

    #[test]
    fn small_cap_is_rejected() {
        let g = catalog_load("pcu").unwrap();
        assert!(strong_rings(&g, 0, &RingOptions::up_to(2)).is_err());
    }
}
