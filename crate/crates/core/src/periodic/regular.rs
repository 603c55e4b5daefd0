//! Bounded check that a group of isometries acts regularly on an embedded net.

use std::collections::{HashMap, HashSet, VecDeque};

use super::{LabeledQuotientGraph, Node};
use crate::affine::AffineIsometry;
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Outcome of [`regular_action_check`]; only nodes within the radius are tested.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularVerdict {
    /// Every node of the ball is the image of the base under exactly one element.
    Regular { radius: usize, nodes: usize },
    /// Two distinct elements send the base to `node`.
    NotFree { node: Node },
    /// `missing` nodes of the ball are not images of the base.
    NotTransitive { missing: usize },
}

impl RegularVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, RegularVerdict::Regular { .. })
    }
}

/// Checks that `<h>` acts freely and transitively on the ball of `radius`
/// around `(base, 0)`. Errors if some generator fails to map nodes to nodes or
/// edges to edges on the ball.
pub fn regular_action_check(
    g: &LabeledQuotientGraph,
    h: &[AffineIsometry],
    base: usize,
    radius: usize,
) -> Result<RegularVerdict> {
    let outer = 2 * radius + 2;
    let lookup: HashMap<Vec<Rational>, (Node, usize)> = g
        .ball(base, outer)
        .into_iter()
        .map(|(n, d)| {
            let p = g.position(&n).ok_or_else(|| Error::Invalid("graph has no embedding".into()))?;
            Ok((p, (n, d)))
        })
        .collect::<Result<_>>()?;
    if lookup.len() != g.ball(base, outer).len() {
        return Err(Error::Invalid("embedding places two nodes at the same point".into()));
    }
    let origin = Node::origin(base, g.rank());
    let p_base = g.position(&origin).expect("embedding checked above");
    let mut letters: Vec<AffineIsometry> = Vec::new();
    for x in h {
        if x.dim() != p_base.len() {
            return Err(Error::DimensionMismatch { expected: p_base.len(), found: x.dim() });
        }
        letters.push(x.clone());
        letters.push(x.inverse());
    }
    // Displacement of the base under each letter bounds how far words wander.
    let mut reach = 0;
    for x in &letters {
        let (_, d) = lookup
            .get(&x.apply(&p_base))
            .ok_or_else(|| Error::Invalid("an isometry does not map the base to a node nearby".into()))?;
        reach = reach.max(*d);
    }
    if reach > radius + 2 {
        return Err(Error::Invalid("an isometry moves the base beyond the tested radius".into()));
    }
    let inner = g.ball(base, radius);
    for (n, _) in &inner {
        let p = g.position(n).expect("embedding checked above");
        for x in &letters {
            let (m, _) = lookup.get(&x.apply(&p)).ok_or_else(|| Error::Invalid("an isometry does not map nodes to nodes".into()))?;
            let mapped: HashSet<Node> = g
                .neighbors(n)
                .map(|nb| lookup.get(&x.apply(&g.position(&nb).expect("embedded"))).map(|(k, _)| k.clone()))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::Invalid("an isometry does not map nodes to nodes".into()))?;
            let expected: HashSet<Node> = g.neighbors(m).collect();
            if mapped != expected {
                return Err(Error::Invalid("an isometry does not preserve the edge set".into()));
            }
        }
    }
    let limit = radius + reach;
    let mut hit: HashMap<Node, AffineIsometry> = HashMap::new();
    let identity = AffineIsometry::identity(p_base.len());
    hit.insert(origin, identity.clone());
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for l in &letters {
            let y = x.then(l)?;
            let Some((node, d)) = lookup.get(&y.apply(&p_base)) else { continue };
            if *d > limit {
                continue;
            }
            match hit.get(node) {
                Some(z) if *z == y => {}
                Some(_) => return Ok(RegularVerdict::NotFree { node: node.clone() }),
                None => {
                    hit.insert(node.clone(), y.clone());
                    queue.push_back(y);
                }
            }
        }
    }
    let missing = inner.iter().filter(|(n, _)| !hit.contains_key(n)).count();
    if missing > 0 {
        return Ok(RegularVerdict::NotTransitive { missing });
    }
    Ok(RegularVerdict::Regular { radius, nodes: inner.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::document;
    use crate::periodic::{catalog_load, from_cayley};
    use crate::symop::parse_symop;

    fn ops(texts: &[&str]) -> Vec<AffineIsometry> {
        texts.iter().map(|t| parse_symop(t, 3).unwrap()).collect()
    }

    #[test]
    fn pcu_translations_act_regularly() {
        let pcu = catalog_load("pcu").unwrap();
        let v = regular_action_check(&pcu, &ops(&["x+1,y,z", "x,y+1,z", "x,y,z+1"]), 0, 3).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn point_reflection_fixes_the_base() {
        let pcu = catalog_load("pcu").unwrap();
        let v = regular_action_check(&pcu, &ops(&["x+1,y,z", "x,y+1,z", "x,y,z+1", "-x,-y,-z"]), 0, 3).unwrap();
        assert!(matches!(v, RegularVerdict::NotFree { .. }), "{v:?}");
    }

    #[test]
    fn sublattice_is_not_transitive() {
        let pcu = catalog_load("pcu").unwrap();
        let v = regular_action_check(&pcu, &ops(&["x+2,y,z", "x,y+1,z", "x,y,z+1"]), 0, 3).unwrap();
        assert!(matches!(v, RegularVerdict::NotTransitive { .. }), "{v:?}");
    }

    #[test]
    fn non_automorphism_is_an_error() {
        let pcu = catalog_load("pcu").unwrap();
        assert!(regular_action_check(&pcu, &ops(&["x+1/2,y,z"]), 0, 2).is_err());
    }

    #[test]
    fn i42d_acts_regularly_on_its_cayley_graph() {
        let doc = document("i42d_gis").unwrap();
        let c = from_cayley(&doc).unwrap();
        let v = regular_action_check(&c.graph, &doc.ops(), 0, 4).unwrap();
        assert!(v.passed(), "{v:?}");
    }
}
