//! Cayley graphs of crystallographic groups as quotient graphs.

use super::{LabeledQuotientGraph, QuotientEdge};
use crate::error::{Error, Result};
use crate::pipeline::{basis_coefficients, build_extension_data, ExtensionData, PresentOptions};
use crate::rational::{frac, Rational};
use crate::symop::GeneratingSetDocument;
use crate::words::{Letter, Word};

/// Cayley graph of `(G, S)` with the data used to build it.
#[derive(Clone, Debug)]
pub struct CayleyGraph {
    pub graph: LabeledQuotientGraph,
    /// `vertex_words[i]`: representative `g_i` of the `i`-th point-group element.
    pub vertex_words: Vec<Word>,
    /// Generator index of each quotient edge.
    pub edge_generators: Vec<usize>,
    pub extension: ExtensionData,
}

const GENERIC_DENOMINATORS: [i64; 6] = [7, 11, 13, 17, 19, 23];

/// Builds the Cayley graph of the group generated by `doc`.
///
/// Node `(i, c)` is the element `y^c g_i`, so the edge for generator `s` at `i`
/// leads to `j = i s` in the point group with shift equal to the lattice
/// coordinates of `g_i s g_j^-1`. Node `x` sits at `x^-1(p0)` for a generic
/// point `p0`; the cell rows are the negated basis translations.
pub fn from_cayley(doc: &GeneratingSetDocument) -> Result<CayleyGraph> {
    let e = build_extension_data(doc, &PresentOptions::default())?;
    let pg = &e.point_group;
    let n = pg.order();
    let vertex_words: Vec<Word> = (0..n).map(|i| pg.tree_word(i)).collect();
    let mut edges: Vec<QuotientEdge> = Vec::new();
    let mut edge_generators = Vec::new();
    for s in 0..e.names.len() {
        let letter = Letter::new(s, false);
        let mut own: Vec<QuotientEdge> = Vec::new();
        for i in 0..n {
            let j = pg.step(i, letter);
            let w = vertex_words[i].concat(&Word(vec![letter])).concat(&vertex_words[j].inverse());
            let shift = basis_coefficients(&e, &e.translation_of_word(&w)?)?;
            if i == j && shift.iter().all(|&x| x == 0) {
                return Err(Error::IdentityGenerator(e.names[s].to_string()));
            }
            let edge = QuotientEdge::new(i, j, shift);
            // An involution yields each undirected edge from both ends.
            if own.iter().any(|o| o.canonical() == edge.canonical()) {
                continue;
            }
            own.push(edge);
        }
        edge_generators.extend(std::iter::repeat_n(s, own.len()));
        edges.extend(own);
    }
    let name = doc.label.clone().unwrap_or_else(|| "cayley".into());
    let graph = LabeledQuotientGraph::new(name, e.rank(), n, edges).map_err(|err| match err {
        Error::Graph(m) => Error::Graph(format!("Cayley graph is not simple: {m}")),
        other => other,
    })?;
    let d = doc.dimension;
    let p0: Vec<Rational> = (0..d).map(|i| frac(i as i64 + 1, GENERIC_DENOMINATORS[i % 6])).collect();
    let coordinates = vertex_words
        .iter()
        .map(|w| Ok(e.group.to_isometry(&e.group.evaluate(w)?).inverse().apply(&p0)))
        .collect::<Result<Vec<_>>>()?;
    let cell = e.harvest.basis.iter().map(|t| t.vector.iter().map(|x| -x).collect()).collect();
    let graph = graph.with_embedding(cell, coordinates)?;
    Ok(CayleyGraph { graph, vertex_words, edge_generators, extension: e })
}
