//! One-inclusion hypergraphs over integer-coded label vectors.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::HypothesisClass;

/// Vertices sharing every coordinate except `direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub direction: usize,
    /// Member vertex indices in increasing order.
    pub members: Vec<usize>,
}

/// Vertices are distinct label vectors; each vertex lies in exactly one edge per direction.
#[derive(Clone, Debug)]
pub struct OneInclusionGraph {
    dims: usize,
    vertices: Vec<Vec<i64>>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
}

impl OneInclusionGraph {
    /// Builds the graph; duplicate rows are merged, keeping the first occurrence.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dims = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != dims) {
            return Err(Error::InvalidClass("rows of unequal length".into()));
        }
        let mut seen = HashMap::new();
        let mut vertices = Vec::new();
        for r in rows {
            if !seen.contains_key(r) {
                seen.insert(r.clone(), vertices.len());
                vertices.push(r.clone());
            }
        }
        let mut edges = Vec::new();
        let mut incidence = vec![vec![0usize; dims]; vertices.len()];
        for i in 0..dims {
            let mut by_key: HashMap<Vec<i64>, usize> = HashMap::new();
            for (v, row) in vertices.iter().enumerate() {
                let mut key = row.clone();
                key[i] = i64::MIN;
                let e = *by_key.entry(key).or_insert_with(|| {
                    edges.push(Edge { direction: i, members: Vec::new() });
                    edges.len() - 1
                });
                edges[e].members.push(v);
                incidence[v][i] = e;
            }
        }
        Ok(Self { dims, vertices, edges, incidence })
    }

    /// Graph of a total class with labels as numerators over `scale`.
    pub fn from_class(class: &HypothesisClass, scale: i64) -> Result<Self> {
        if class.kind() != crate::model::ClassKind::Total {
            return Err(Error::InvalidClass("one-inclusion graphs need a total class".into()));
        }
        Self::from_rows(&class.numerators_on(scale)?)
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge containing `vertex` in `direction`.
    pub fn edge_of(&self, vertex: usize, direction: usize) -> usize {
        self.incidence[vertex][direction]
    }

    pub fn vertex_index(&self, row: &[i64]) -> Option<usize> {
        self.vertices.iter().position(|v| v == row)
    }

    /// Subgraph induced by a vertex subset (indices into this graph).
    pub fn induced(&self, keep: &[usize]) -> Result<Self> {
        let rows: Vec<Vec<i64>> = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        Self::from_rows(&rows)
    }
}

/// Builds the graph of a total class on its own resolution.
pub fn build_oig(class: &HypothesisClass) -> Result<OneInclusionGraph> {
    OneInclusionGraph::from_class(class, class.resolution() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_has_singleton_edges() {
        let g = OneInclusionGraph::from_rows(&[vec![1, 2, 3]]).unwrap();
        assert_eq!(g.edges().len(), 3);
        assert!(g.edges().iter().all(|e| e.members == vec![0]));
    }

    #[test]
    fn one_shared_edge_for_a_single_difference() {
        let g = OneInclusionGraph::from_rows(&[vec![1, 2, 3], vec![1, 5, 3]]).unwrap();
        let shared: Vec<&Edge> = g.edges().iter().filter(|e| e.members.len() == 2).collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].direction, 1);
        assert_eq!(g.edges().len(), 5);
        for v in 0..2 {
            for i in 0..3 {
                assert!(g.edges()[g.edge_of(v, i)].members.contains(&v));
            }
        }
    }

    #[test]
    fn partial_classes_are_rejected() {
        let h = HypothesisClass::new(1, 1, crate::model::ClassKind::Partial, vec![vec![None]]).unwrap();
        assert!(build_oig(&h).is_err());
    }
}
