//! Quotients of periodic graphs by translation sublattices.

use num_integer::Integer;

use super::{LabeledQuotientGraph, QuotientEdge};
use crate::error::{Error, Result};
use crate::hnf::smith;

/// Identifies nodes that differ by the sublattice spanned by `vectors`.
///
/// In Smith coordinates `y = s V` the sublattice is spanned by `d_i e_i`
/// (`i < k`). Coordinates with `d_i > 1` become a finite label `y_i mod d_i`
/// on the vertices, coordinates with `d_i = 1` vanish, and the remaining
/// `r - k` coordinates are the new shifts. Coordinates are not carried over.
pub fn quotient_by_sublattice(
    g: &LabeledQuotientGraph,
    vectors: &[Vec<i64>],
    allow_imprimitive: bool,
) -> Result<LabeledQuotientGraph> {
    let r = g.rank();
    let k = vectors.len();
    for v in vectors {
        if v.len() != r {
            return Err(Error::DimensionMismatch { expected: r, found: v.len() });
        }
        let gcd = v.iter().fold(0i64, |a, &b| a.gcd(&b));
        if gcd == 0 {
            return Err(Error::Invalid("zero quotient vector".into()));
        }
        if gcd != 1 && !allow_imprimitive {
            return Err(Error::Invalid(format!("vector {v:?} has non-coprime components")));
        }
    }
    let snf = smith(vectors, r).ok_or(Error::Overflow)?;
    if snf.invariants.len() != k {
        return Err(Error::Invalid("quotient vectors are linearly dependent".into()));
    }
    let torsion: Vec<(usize, i64)> = snf.invariants.iter().copied().enumerate().filter(|&(_, d)| d > 1).collect();
    let labels: usize = torsion.iter().map(|&(_, d)| d as usize).product();
    let to_smith = |s: &[i64]| -> Vec<i64> {
        (0..r).map(|j| (0..r).map(|i| s[i] * snf.transform[i][j]).sum()).collect()
    };
    // Mixed-radix label index <-> torsion tuple.
    let decode = |mut x: usize| -> Vec<i64> {
        torsion
            .iter()
            .map(|&(_, d)| {
                let t = (x % d as usize) as i64;
                x /= d as usize;
                t
            })
            .collect()
    };
    let encode = |t: &[i64]| -> usize {
        t.iter().zip(&torsion).rev().fold(0usize, |acc, (&x, &(_, d))| acc * d as usize + x as usize)
    };
    let mut edges = Vec::with_capacity(g.edges().len() * labels);
    for e in g.edges() {
        let y = to_smith(&e.shift);
        let free = y[k..].to_vec();
        for label in 0..labels {
            let t = decode(label);
            let t2: Vec<i64> = t.iter().zip(&torsion).map(|(&x, &(i, d))| (x + y[i]).rem_euclid(d)).collect();
            edges.push(QuotientEdge::new(e.u * labels + label, e.v * labels + encode(&t2), free.clone()));
        }
    }
    let name = format!(
        "{}/{}",
        g.name(),
        vectors
            .iter()
            .map(|v| format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")))
            .collect::<Vec<_>>()
            .join("")
    );
    LabeledQuotientGraph::new(name, r - k, g.vertex_count() * labels, edges).map_err(|e| match e {
        Error::Graph(m) => Error::Graph(format!("quotient is not a simple periodic graph: {m}")),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::periodic::{catalog_load, Node};

    #[test]
    fn pcu_quotients_by_primitive_vectors() {
        let q = quotient_by_sublattice(&catalog_load("pcu").unwrap(), &[vec![0, 0, 1]], false);
        // The (0,0,1) edge becomes a loop.
        assert!(q.is_err());
        // Along (1,1,1) the three edges stay distinct: the triangular lattice.
        let q = quotient_by_sublattice(&catalog_load("pcu").unwrap(), &[vec![1, 1, 1]], false).unwrap();
        assert_eq!((q.rank(), q.vertex_count(), q.degree(0)), (2, 1, 6));
        assert_eq!(q.coordination_sequence(0, 3), vec![1, 6, 12, 18]);
        // Along (0,1,1) two edges become parallel.
        assert!(quotient_by_sublattice(&catalog_load("pcu").unwrap(), &[vec![0, 1, 1]], false).is_err());
    }

    #[test]
    fn non_coprime_and_dependent_vectors_are_rejected() {
        let sql = catalog_load("sql").unwrap();
        assert!(quotient_by_sublattice(&sql, &[vec![2, 4]], false).is_err());
        assert!(quotient_by_sublattice(&sql, &[vec![1, 2], vec![2, 4]], true).is_err());
    }

    #[test]
    fn rolled_square_lattice_keeps_geodesic_counts() {
        let sql = catalog_load("sql").unwrap();
        let tube = quotient_by_sublattice(&sql, &[vec![4, 12]], true).unwrap();
        assert_eq!(tube.rank(), 1);
        assert_eq!(tube.vertex_count(), 4);
        // Closed collar walks lift to paths from the origin to (4, 12).
        let (len, count) = sql.geodesics(0, &Node::new(0, vec![4, 12]), 40).unwrap();
        assert_eq!((len, count), (16, 1820));
        // The collar has length 16, so spheres below radius 8 do not wrap.
        let flat = sql.coordination_sequence(0, 12);
        let rolled = tube.coordination_sequence(0, 12);
        assert_eq!(rolled[..8], flat[..8]);
        assert!(rolled[8..].iter().zip(&flat[8..]).all(|(a, b)| a < b));
    }

    #[test]
    fn torsion_labels_multiply_vertices() {
        let sql = catalog_load("sql").unwrap();
        let q = quotient_by_sublattice(&sql, &[vec![3, 0]], true).unwrap();
        assert_eq!(q.vertex_count(), 3);
        assert_eq!(q.coordination_sequence(0, 3), vec![1, 4, 6, 6]);
    }
}
