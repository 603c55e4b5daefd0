//! Periodic graphs as labeled quotient graphs.
//!
//! A quotient graph on vertices `0..n` with edges `(u, v, s)` stands for the
//! periodic graph on nodes `(vertex, cell)`, where `(u, c)` is adjacent to
//! `(v, c + s)` for every cell `c` in `Z^r`.

mod catalog;
mod cayley_graph;
mod quotient;
mod regular;
mod rings;

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::affine::hnf_lattice;
use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

pub use catalog::{catalog_load, catalog_names, CATALOG_DIR_VAR};
pub use cayley_graph::{from_cayley, CayleyGraph};
pub use quotient::quotient_by_sublattice;
pub use regular::{regular_action_check, RegularVerdict};
pub use rings::{
    schlafli_symbol, strong_rings, vertex_symbol, RejectedCycle, Ring, RingAnalysis, RingOptions, RingSymbol,
    DEFAULT_MAX_RING,
};

/// An edge `u -> v` whose head lies in the cell shifted by `shift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuotientEdge {
    pub u: usize,
    pub v: usize,
    pub shift: Vec<i64>,
}

impl QuotientEdge {
    pub fn new(u: usize, v: usize, shift: Vec<i64>) -> Self {
        QuotientEdge { u, v, shift }
    }

    pub fn reversed(&self) -> Self {
        QuotientEdge { u: self.v, v: self.u, shift: self.shift.iter().map(|x| -x).collect() }
    }

    /// The lexicographically smaller of the two orientations.
    pub fn canonical(&self) -> Self {
        let r = self.reversed();
        if r < *self {
            r
        } else {
            self.clone()
        }
    }
}

/// A node of the periodic cover.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub vertex: usize,
    pub cell: Vec<i64>,
}

impl Node {
    pub fn new(vertex: usize, cell: Vec<i64>) -> Self {
        Node { vertex, cell }
    }

    pub fn origin(vertex: usize, rank: usize) -> Self {
        Node { vertex, cell: vec![0; rank] }
    }
}

/// Finite quotient of a periodic graph, validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledQuotientGraph {
    name: String,
    rank: usize,
    vertices: usize,
    edges: Vec<QuotientEdge>,
    /// Rows are the lattice basis vectors in embedding coordinates.
    cell: Option<Vec<Vec<Rational>>>,
    coordinates: Option<Vec<Vec<Rational>>>,
    /// `adjacency[u]`: `(v, s)` for each edge leaving `u`, both orientations.
    adjacency: Vec<Vec<(usize, Vec<i64>)>>,
}

impl LabeledQuotientGraph {
    /// Validates: endpoints in range, no loops, no duplicate edges up to reversal,
    /// connected, and cycle shifts of full rank.
    pub fn new(name: impl Into<String>, rank: usize, vertices: usize, edges: Vec<QuotientEdge>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Graph("no vertices".into()));
        }
        let mut seen = HashSet::new();
        let mut adjacency = vec![Vec::new(); vertices];
        for e in &edges {
            if e.u >= vertices || e.v >= vertices {
                return Err(Error::Graph(format!("edge {} {} names a missing vertex", e.u, e.v)));
            }
            if e.shift.len() != rank {
                return Err(Error::Graph(format!("edge {} {} has a shift of length {}", e.u, e.v, e.shift.len())));
            }
            if e.u == e.v && e.shift.iter().all(|&x| x == 0) {
                return Err(Error::Graph(format!("loop at vertex {}", e.u)));
            }
            if !seen.insert(e.canonical()) {
                return Err(Error::Graph(format!("duplicate edge {} {} {:?}", e.u, e.v, e.shift)));
            }
            adjacency[e.u].push((e.v, e.shift.clone()));
            let r = e.reversed();
            adjacency[r.u].push((r.v, r.shift));
        }
        for a in &mut adjacency {
            a.sort();
        }
        let g = LabeledQuotientGraph { name: name.into(), rank, vertices, edges, cell: None, coordinates: None, adjacency };
        g.check_connected()?;
        Ok(g)
    }

    /// Attaches an embedding: `cell` rows are lattice vectors, `coordinates` one point per vertex.
    pub fn with_embedding(mut self, cell: Vec<Vec<Rational>>, coordinates: Vec<Vec<Rational>>) -> Result<Self> {
        if cell.len() != self.rank {
            return Err(Error::Graph(format!("cell has {} rows, rank is {}", cell.len(), self.rank)));
        }
        let d = cell.first().map_or_else(|| coordinates.first().map_or(0, Vec::len), Vec::len);
        if cell.iter().any(|r| r.len() != d) || coordinates.len() != self.vertices || coordinates.iter().any(|c| c.len() != d) {
            return Err(Error::Graph("embedding dimensions disagree".into()));
        }
        if hnf_lattice(d, &cell).rank() != self.rank {
            return Err(Error::Graph("cell rows are dependent".into()));
        }
        self.cell = Some(cell);
        self.coordinates = Some(coordinates);
        Ok(self)
    }

    /// Attaches only the cell conversion (no vertex coordinates).
    pub fn with_cell(mut self, cell: Vec<Vec<Rational>>) -> Result<Self> {
        if cell.len() != self.rank {
            return Err(Error::Graph(format!("cell has {} rows, rank is {}", cell.len(), self.rank)));
        }
        let d = cell.first().map_or(0, Vec::len);
        if cell.iter().any(|r| r.len() != d) || hnf_lattice(d, &cell).rank() != self.rank {
            return Err(Error::Graph("cell rows are dependent".into()));
        }
        self.cell = Some(cell);
        Ok(self)
    }

    fn check_connected(&self) -> Result<()> {
        let mut pos: Vec<Option<Vec<i64>>> = vec![None; self.vertices];
        pos[0] = Some(vec![0; self.rank]);
        let mut queue = vec![0usize];
        let mut cycles: Vec<Vec<Rational>> = Vec::new();
        while let Some(u) = queue.pop() {
            let pu = pos[u].clone().expect("queued vertices are placed");
            for (v, s) in &self.adjacency[u] {
                let target: Vec<i64> = pu.iter().zip(s).map(|(a, b)| a + b).collect();
                match &pos[*v] {
                    None => {
                        pos[*v] = Some(target);
                        queue.push(*v);
                    }
                    Some(pv) => {
                        if *pv != target {
                            cycles.push(target.iter().zip(pv).map(|(a, b)| int(a - b)).collect());
                        }
                    }
                }
            }
        }
        if pos.iter().any(Option::is_none) {
            return Err(Error::Graph("quotient graph is disconnected".into()));
        }
        if hnf_lattice(self.rank, &cycles).rank() != self.rank {
            return Err(Error::Graph(format!("cycle shifts do not reach rank {}", self.rank)));
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[QuotientEdge] {
        &self.edges
    }

    pub fn cell(&self) -> Option<&[Vec<Rational>]> {
        self.cell.as_deref()
    }

    pub fn coordinates(&self) -> Option<&[Vec<Rational>]> {
        self.coordinates.as_deref()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn neighbors<'a>(&'a self, node: &'a Node) -> impl Iterator<Item = Node> + 'a {
        self.adjacency[node.vertex]
            .iter()
            .map(move |(v, s)| Node::new(*v, node.cell.iter().zip(s).map(|(a, b)| a + b).collect()))
    }

    /// Embedding position of a cover node, if coordinates are attached.
    pub fn position(&self, node: &Node) -> Option<Vec<Rational>> {
        let cell = self.cell.as_ref()?;
        let coords = self.coordinates.as_ref()?;
        let mut p = coords[node.vertex].clone();
        for (k, row) in node.cell.iter().zip(cell) {
            for (x, y) in p.iter_mut().zip(row) {
                *x += y * int(*k);
            }
        }
        Some(p)
    }

    /// Integer shift for a vector given in embedding (conventional) coordinates.
    pub fn to_lattice_coordinates(&self, v: &[Rational]) -> Result<Vec<i64>> {
        let Some(cell) = &self.cell else {
            if v.len() != self.rank || v.iter().any(|x| !x.is_integer()) {
                return Err(Error::Invalid("vector is not an integer lattice vector".into()));
            }
            return v.iter().map(|x| crate::rational::to_i64(x).ok_or(Error::Overflow)).collect();
        };
        let k = solve_rows(cell, v).ok_or_else(|| Error::Invalid("vector is not in the span of the cell".into()))?;
        if k.iter().any(|x| !x.is_integer()) {
            return Err(Error::Invalid("vector is not a lattice vector of the net".into()));
        }
        k.iter().map(|x| crate::rational::to_i64(x).ok_or(Error::Overflow)).collect()
    }

    /// Sphere sizes `|S_0|, ..., |S_radius|` around `(base, 0)`.
    pub fn coordination_sequence(&self, base: usize, radius: usize) -> Vec<usize> {
        let start = Node::origin(base, self.rank);
        let mut prev: HashSet<Node> = HashSet::new();
        let mut cur: HashSet<Node> = HashSet::from([start]);
        let mut out = vec![1];
        for _ in 0..radius {
            let mut next = HashSet::new();
            for n in &cur {
                for m in self.neighbors(n) {
                    if !prev.contains(&m) && !cur.contains(&m) {
                        next.insert(m);
                    }
                }
            }
            out.push(next.len());
            prev = std::mem::replace(&mut cur, next);
        }
        out
    }

    /// Ball size at `radius`, centre included.
    pub fn topological_density(&self, base: usize, radius: usize) -> usize {
        self.coordination_sequence(base, radius).iter().sum()
    }

    /// Breadth-first ball of cover nodes with distances, in discovery order.
    pub fn ball(&self, base: usize, radius: usize) -> Vec<(Node, usize)> {
        let start = Node::origin(base, self.rank);
        let mut index: HashMap<Node, usize> = HashMap::from([(start.clone(), 0)]);
        let mut out = vec![(start, 0)];
        let mut i = 0;
        while i < out.len() {
            let (n, d) = out[i].clone();
            i += 1;
            if d == radius {
                continue;
            }
            for m in self.neighbors(&n) {
                if !index.contains_key(&m) {
                    index.insert(m.clone(), out.len());
                    out.push((m, d + 1));
                }
            }
        }
        out
    }

    /// Distance from `(base, 0)` to `target` and the number of shortest paths.
    pub fn geodesics(&self, base: usize, target: &Node, cap: usize) -> Result<(usize, u128)> {
        let start = Node::origin(base, self.rank);
        if *target == start {
            return Ok((0, 1));
        }
        let mut count: HashMap<Node, u128> = HashMap::from([(start.clone(), 1)]);
        let mut layer = vec![start];
        for d in 1..=cap {
            let mut next: HashMap<Node, u128> = HashMap::new();
            for n in &layer {
                let c = count[n];
                for m in self.neighbors(n) {
                    if count.contains_key(&m) {
                        continue;
                    }
                    let e = next.entry(m).or_insert(0);
                    *e = e.checked_add(c).ok_or(Error::Overflow)?;
                }
            }
            if let Some(&c) = next.get(target) {
                return Ok((d, c));
            }
            layer = next.keys().cloned().collect();
            count.extend(next);
        }
        Err(Error::Unreachable(cap))
    }

    /// Plain-text catalog form.
    pub fn to_net_text(&self) -> String {
        let mut s = String::new();
        if !self.name.is_empty() {
            let _ = writeln!(s, "name {}", self.name);
        }
        let _ = writeln!(s, "rank {}", self.rank);
        let _ = writeln!(s, "vertices {}", self.vertices);
        let row = |r: &[Rational]| r.iter().map(format_rational).collect::<Vec<_>>().join(" ");
        if let Some(cell) = &self.cell {
            let _ = writeln!(s, "cell");
            for r in cell {
                let _ = writeln!(s, "{}", row(r));
            }
        }
        let _ = writeln!(s, "edges");
        for e in &self.edges {
            let shift = e.shift.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            let _ = writeln!(s, "{} {} {}", e.u, e.v, shift);
        }
        if let Some(coords) = &self.coordinates {
            let _ = writeln!(s, "coordinates");
            for c in coords {
                let _ = writeln!(s, "{}", row(c));
            }
        }
        s
    }

    /// Parses the plain-text catalog form: header lines `name`, `rank`, `vertices`,
    /// then optional `cell`, required `edges` and optional `coordinates` blocks.
    /// `#` starts a comment.
    pub fn parse_net(text: &str) -> Result<Self> {
        let mut name = String::new();
        let mut rank = None;
        let mut vertices = None;
        let mut block = "";
        let mut cell = Vec::new();
        let mut edges = Vec::new();
        let mut coords = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Graph(format!("line {}: {m}", lineno + 1));
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "name" => name = toks.get(1).ok_or_else(|| bad("missing name"))?.to_string(),
                "rank" => rank = Some(toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad rank"))?),
                "vertices" => {
                    vertices = Some(toks.get(1).and_then(|t| t.parse().ok()).ok_or_else(|| bad("bad vertex count"))?)
                }
                "cell" | "edges" | "coordinates" => block = toks[0],
                _ => match block {
                    "cell" | "coordinates" => {
                        let row = toks.iter().map(|t| parse_rational(t)).collect::<Result<Vec<_>>>()?;
                        if block == "cell" {
                            cell.push(row);
                        } else {
                            coords.push(row);
                        }
                    }
                    "edges" => {
                        let nums = toks
                            .iter()
                            .map(|t| t.parse::<i64>().map_err(|_| bad("edge entries must be integers")))
                            .collect::<Result<Vec<_>>>()?;
                        if nums.len() < 2 || nums[0] < 0 || nums[1] < 0 {
                            return Err(bad("edge needs two vertices"));
                        }
                        edges.push(QuotientEdge::new(nums[0] as usize, nums[1] as usize, nums[2..].to_vec()));
                    }
                    _ => return Err(bad("data outside a block")),
                },
            }
        }
        let rank = rank.ok_or_else(|| Error::Graph("missing rank".into()))?;
        let vertices = vertices.ok_or_else(|| Error::Graph("missing vertex count".into()))?;
        let g = LabeledQuotientGraph::new(name, rank, vertices, edges)?;
        match (cell.is_empty(), coords.is_empty()) {
            (true, true) => Ok(g),
            (false, true) => g.with_cell(cell),
            (cell_missing, false) => {
                let cell = if cell_missing {
                    (0..rank).map(|i| (0..rank).map(|j| int(i64::from(i == j))).collect()).collect()
                } else {
                    cell
                };
                g.with_embedding(cell, coords)
            }
        }
    }

    /// Vertex degrees as a sorted multiset; a cheap isomorphism invariant.
    pub fn degree_profile(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertices).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }
}

/// Solves `k . rows = v` for `k` over the rationals; `None` if inconsistent.
fn solve_rows(rows: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let r = rows.len();
    let d = v.len();
    if rows.iter().any(|row| row.len() != d) {
        return None;
    }
    // Augmented system: d equations (columns of rows) in r unknowns.
    let mut a: Vec<Vec<Rational>> = (0..d)
        .map(|j| {
            let mut eq: Vec<Rational> = rows.iter().map(|row| row[j].clone()).collect();
            eq.push(v[j].clone());
            eq
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..r {
        let Some(p) = (row..d).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = Rational::one() / a[row][col].clone();
        for x in a[row].iter_mut() {
            *x *= inv.clone();
        }
        for i in 0..d {
            if i != row && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..=r {
                    let t = a[row][j].clone() * f.clone();
                    a[i][j] -= t;
                }
            }
        }
        pivot_cols.push(col);
        row += 1;
    }
    if a[row..].iter().any(|eq| !eq[r].is_zero()) {
        return None;
    }
    let mut k = vec![Rational::zero(); r];
    for (i, &c) in pivot_cols.iter().enumerate() {
        k[c] = a[i][r].clone();
    }
    Some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sql() -> LabeledQuotientGraph {
        LabeledQuotientGraph::new("sql", 2, 1, vec![QuotientEdge::new(0, 0, vec![1, 0]), QuotientEdge::new(0, 0, vec![0, 1])])
            .unwrap()
    }

    #[test]
    fn rejects_loops_duplicates_and_disconnection() {
        assert!(LabeledQuotientGraph::new("", 1, 1, vec![QuotientEdge::new(0, 0, vec![0])]).is_err());
        let dup = vec![QuotientEdge::new(0, 0, vec![1]), QuotientEdge::new(0, 0, vec![-1])];
        assert!(LabeledQuotientGraph::new("", 1, 1, dup).is_err());
        let split = vec![QuotientEdge::new(0, 0, vec![1]), QuotientEdge::new(1, 1, vec![1])];
        assert!(LabeledQuotientGraph::new("", 1, 2, split).is_err());
        let flat = vec![QuotientEdge::new(0, 0, vec![1, 0])];
        assert!(LabeledQuotientGraph::new("", 2, 1, flat).is_err());
    }

    #[test]
    fn square_lattice_spheres() {
        assert_eq!(sql().coordination_sequence(0, 4), vec![1, 4, 8, 12, 16]);
    }

    #[test]
    fn square_lattice_geodesics_are_binomial() {
        let g = sql();
        assert_eq!(g.geodesics(0, &Node::new(0, vec![4, 12]), 40).unwrap(), (16, 1820));
        assert_eq!(g.geodesics(0, &Node::new(0, vec![5, 12]), 40).unwrap(), (17, 6188));
    }

    #[test]
    fn net_text_round_trip() {
        let g = sql();
        assert_eq!(LabeledQuotientGraph::parse_net(&g.to_net_text()).unwrap(), g);
    }

    #[test]
    fn solve_rows_handles_centred_cells() {
        let h = Rational::new(1.into(), 2.into());
        let cell = vec![
            vec![-h.clone(), h.clone(), h.clone()],
            vec![h.clone(), -h.clone(), h.clone()],
            vec![h.clone(), h.clone(), -h.clone()],
        ];
        let v = vec![Rational::new(5.into(), 2.into()), Rational::new(5.into(), 2.into()), h];
        let k = solve_rows(&cell, &v).unwrap();
        assert_eq!(k, vec![int(3), int(3), int(5)]);
    }
}
