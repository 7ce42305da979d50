//! Undirected multigraphs with loops and parallel edges.
//!
//! Edges are identified by a dense `EdgeId`; two parallel edges differ only
//! in their id. A loop is stored once with equal endpoints and has two
//! *ends* at its vertex, so it contributes 2 to the degree.

use std::collections::VecDeque;

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

/// One end of an edge as seen from the vertex it is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Incidence {
    pub edge: EdgeId,
    /// 0 if this vertex is `endpoints[0]` of the edge, 1 otherwise.
    pub end: u8,
    pub other: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
    incidence: Vec<Vec<Incidence>>,
}

/// Accumulates edges; the finished [`Multigraph`] is immutable.
#[derive(Debug, Clone, Default)]
pub struct MultigraphBuilder {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
}

impl MultigraphBuilder {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn with_capacity(vertex_count: usize, edges: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::with_capacity(edges),
        }
    }

    /// Adds an edge and returns its id. Panics on out-of-range endpoints,
    /// which is always a construction bug.
    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> EdgeId {
        assert!(
            a < self.vertex_count && b < self.vertex_count,
            "edge ({a},{b}) out of range for {} vertices",
            self.vertex_count
        );
        self.edges.push([a, b]);
        self.edges.len() - 1
    }

    pub fn build(self) -> Multigraph {
        let incidence = build_incidence(self.vertex_count, &self.edges);
        Multigraph {
            vertex_count: self.vertex_count,
            edges: self.edges,
            incidence,
        }
    }
}

fn build_incidence(n: usize, edges: &[[VertexId; 2]]) -> Vec<Vec<Incidence>> {
    let mut inc = vec![Vec::new(); n];
    for (id, &[a, b]) in edges.iter().enumerate() {
        inc[a].push(Incidence {
            edge: id,
            end: 0,
            other: b,
        });
        inc[b].push(Incidence {
            edge: id,
            end: 1,
            other: a,
        });
    }
    inc
}

impl Multigraph {
    /// Builds a graph from an explicit edge list, validating endpoints.
    pub fn from_edges(vertex_count: usize, edges: &[[VertexId; 2]]) -> Result<Self> {
        for &[a, b] in edges {
            for v in [a, b] {
                if v >= vertex_count {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: vertex_count,
                    });
                }
            }
        }
        let mut builder = MultigraphBuilder::with_capacity(vertex_count, edges.len());
        for &[a, b] in edges {
            builder.add_edge(a, b);
        }
        Ok(builder.build())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[e]
    }

    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn incidence(&self, v: VertexId) -> &[Incidence] {
        &self.incidence[v]
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let [a, b] = self.edges[e];
        a == b
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.vertex_count {
            Err(Error::VertexOutOfRange {
                vertex: v,
                count: self.vertex_count,
            })
        } else {
            Ok(())
        }
    }

    /// Degree of `v`; a loop counts twice.
    pub fn degree(&self, v: VertexId) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.incidence[v].len())
    }

    /// Degree of `v` inside the spanning subgraph given by `subset`.
    pub fn degree_in(&self, v: VertexId, subset: &EdgeSubset) -> usize {
        self.incidence[v]
            .iter()
            .filter(|inc| subset.contains(inc.edge))
            .count()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.incidence.iter().all(|inc| inc.len() == d)
    }

    /// Number of edges joining `a` and `b` (loops counted once).
    pub fn multiplicity(&self, a: VertexId, b: VertexId) -> usize {
        self.incidence[a]
            .iter()
            .filter(|inc| inc.other == b && (a != b || inc.end == 0))
            .count()
    }

    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&[a, b]| a == b)
    }

    pub fn has_parallel_edges(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.edges.iter().any(|&[a, b]| !seen.insert((a.min(b), a.max(b))))
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loop() && !self.has_parallel_edges()
    }

    /// Rebuilds incidence from the edge list and compares with the stored one.
    pub fn audit(&self) -> bool {
        build_incidence(self.vertex_count, &self.edges) == self.incidence
    }

    /// Vertex partition into connected components, each sorted, ordered by
    /// smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.vertex_count;
        let mut comp = vec![usize::MAX; n];
        let mut parts = Vec::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = parts.len();
            let mut part = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for inc in &self.incidence[v] {
                    if comp[inc.other] == usize::MAX {
                        comp[inc.other] = id;
                        part.push(inc.other);
                        stack.push(inc.other);
                    }
                }
            }
            part.sort_unstable();
            parts.push(part);
        }
        parts
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Length of a shortest cycle, `None` for forests. Loops give 1 and a
    /// pair of parallel edges gives 2.
    pub fn girth(&self) -> Option<usize> {
        if self.has_loop() {
            return Some(1);
        }
        if self.has_parallel_edges() {
            return Some(2);
        }
        let n = self.vertex_count;
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent_edge = vec![usize::MAX; n];
        for root in 0..n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            parent_edge.iter_mut().for_each(|e| *e = usize::MAX);
            dist[root] = 0;
            let mut queue = VecDeque::from([root]);
            while let Some(v) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[v] + 1 >= b {
                        break;
                    }
                }
                for inc in &self.incidence[v] {
                    if inc.edge == parent_edge[v] {
                        continue;
                    }
                    let w = inc.other;
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent_edge[w] = inc.edge;
                        queue.push_back(w);
                    } else {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Splits a 2-regular edge subset into its cycles.
    ///
    /// Every vertex touched by `subset` must have subset-degree exactly 2.
    /// A loop is a cycle of length 1, a parallel pair a cycle of length 2.
    pub fn cycle_decomposition(&self, subset: &EdgeSubset) -> Result<Vec<Cycle>> {
        if subset.host_len() != self.edge_count() {
            return Err(Error::SubsetLength {
                expected: self.edge_count(),
                got: subset.host_len(),
            });
        }
        for v in 0..self.vertex_count {
            let d = self.degree_in(v, subset);
            if d != 0 && d != 2 {
                return Err(Error::NotTwoRegular {
                    vertex: v,
                    degree: d,
                });
            }
        }
        let mut used = vec![false; self.edge_count()];
        let mut cycles = Vec::new();
        for start in subset.iter() {
            if used[start] {
                continue;
            }
            let [first, mut current] = self.edges[start];
            used[start] = true;
            let mut vertices = vec![first];
            let mut edges = vec![start];
            while current != first {
                let inc = self.incidence[current]
                    .iter()
                    .find(|inc| subset.contains(inc.edge) && !used[inc.edge])
                    .copied()
                    .expect("2-regular subset always continues");
                vertices.push(current);
                edges.push(inc.edge);
                used[inc.edge] = true;
                current = inc.other;
            }
            cycles.push(Cycle { vertices, edges });
        }
        Ok(cycles)
    }
}

/// A closed walk listed by vertices and the edges between consecutive ones;
/// `edges[i]` joins `vertices[i]` and `vertices[i+1]` (cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// A set of edges of some host multigraph, indexed by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSubset {
    bits: Vec<bool>,
}

impl EdgeSubset {
    pub fn empty(host_edges: usize) -> Self {
        Self {
            bits: vec![false; host_edges],
        }
    }

    pub fn full(host_edges: usize) -> Self {
        Self {
            bits: vec![true; host_edges],
        }
    }

    pub fn from_ids(host_edges: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut s = Self::empty(host_edges);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    pub fn host_len(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.bits[e]
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.bits[e] = true;
    }

    pub fn remove(&mut self, e: EdgeId) {
        self.bits[e] = false;
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    pub fn to_ids(&self) -> Vec<EdgeId> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_graph(n: usize) -> Multigraph {
        let edges: Vec<_> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Multigraph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn degree_of_triangle_and_loop() {
        let c3 = cycle_graph(3);
        for v in 0..3 {
            assert_eq!(c3.degree(v).unwrap(), 2);
        }
        let lp = Multigraph::from_edges(1, &[[0, 0]]).unwrap();
        assert_eq!(lp.degree(0).unwrap(), 2);
        assert!(matches!(
            c3.degree(3),
            Err(Error::VertexOutOfRange { vertex: 3, count: 3 })
        ));
    }

    #[test]
    fn components_of_empty_and_singleton() {
        let empty = MultigraphBuilder::new(0).build();
        assert!(empty.connected_components().is_empty());
        let single = MultigraphBuilder::new(1).build();
        assert_eq!(single.connected_components(), vec![vec![0]]);
    }

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(cycle_graph(5).girth(), Some(5));
        let path = Multigraph::from_edges(3, &[[0, 1], [1, 2]]).unwrap();
        assert_eq!(path.girth(), None);
        let lp = Multigraph::from_edges(2, &[[0, 1], [1, 1]]).unwrap();
        assert_eq!(lp.girth(), Some(1));
        let par = Multigraph::from_edges(2, &[[0, 1], [1, 0]]).unwrap();
        assert_eq!(par.girth(), Some(2));
    }

    #[test]
    fn triangle_decomposes_into_one_cycle() {
        let c3 = cycle_graph(3);
        let cycles = c3.cycle_decomposition(&EdgeSubset::full(3)).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
    }

    #[test]
    fn decomposition_handles_loops_and_parallel_pairs() {
        let g = Multigraph::from_edges(3, &[[0, 0], [1, 2], [2, 1]]).unwrap();
        let cycles = g.cycle_decomposition(&EdgeSubset::full(3)).unwrap();
        let mut lens: Vec<_> = cycles.iter().map(Cycle::len).collect();
        lens.sort();
        assert_eq!(lens, vec![1, 2]);
    }

    #[test]
    fn decomposition_rejects_non_two_regular() {
        let path = Multigraph::from_edges(3, &[[0, 1], [1, 2]]).unwrap();
        assert!(matches!(
            path.cycle_decomposition(&EdgeSubset::full(2)),
            Err(Error::NotTwoRegular { .. })
        ));
    }

    #[test]
    fn audit_passes_on_built_graphs() {
        let g = Multigraph::from_edges(3, &[[0, 0], [1, 2], [2, 1], [0, 2]]).unwrap();
        assert!(g.audit());
        let total: usize = (0..3).map(|v| g.degree(v).unwrap()).sum();
        assert_eq!(total, 2 * g.edge_count());
        assert_eq!(g.multiplicity(1, 2), 2);
        assert_eq!(g.multiplicity(0, 0), 1);
    }
}
