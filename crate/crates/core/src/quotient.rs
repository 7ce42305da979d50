//! Contracting a perfect matching of a cubic graph, the transitions at the
//! contracted vertices, the auxiliary graph `Y(G,F)`, the blue/red
//! 2-factorization of a special factor, and the inverse vertex split.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{Cycle, EdgeId, EdgeSubset, Multigraph, MultigraphBuilder, VertexId};

/// Checks that `g` is cubic and `f` a perfect matching of it.
pub fn check_cubic_factor(g: &Multigraph, f: &EdgeSubset) -> Result<()> {
    if f.host_len() != g.edge_count() {
        return Err(Error::SubsetLength {
            expected: g.edge_count(),
            got: f.host_len(),
        });
    }
    for v in 0..g.vertex_count() {
        let d = g.degree(v)?;
        if d != 3 {
            return Err(Error::NotCubic { vertex: v, degree: d });
        }
    }
    for e in f.iter() {
        if g.is_loop(e) {
            return Err(Error::NotPerfectMatching(format!("edge {e} is a loop")));
        }
    }
    for v in 0..g.vertex_count() {
        let d = g.degree_in(v, f);
        if d != 1 {
            return Err(Error::NotPerfectMatching(format!(
                "vertex {v} meets {d} factor edges"
            )));
        }
    }
    Ok(())
}

/// `X = G/F` together with the correspondences back into `G`.
///
/// Quotient vertex `x` is the contraction of the `x`-th factor edge in id
/// order; quotient edge `e'` is the `e'`-th non-factor edge of `G` in id
/// order and keeps its end orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contraction {
    pub source: Multigraph,
    pub factor: EdgeSubset,
    pub quotient: Multigraph,
    /// Source vertex -> quotient vertex (2-to-1).
    pub vertex_map: Vec<VertexId>,
    /// Quotient vertex -> the factor edge it came from.
    pub factor_edges: Vec<EdgeId>,
    /// Quotient edge -> source edge of `Y = G - F`.
    pub edge_map: Vec<EdgeId>,
    /// Source edge -> quotient edge (`None` for factor edges).
    pub source_to_quotient: Vec<Option<EdgeId>>,
    /// Quotient loops whose pre-image is parallel to a factor edge.
    pub flagged_loops: Vec<EdgeId>,
}

pub fn contract_factor(g: &Multigraph, f: &EdgeSubset) -> Result<Contraction> {
    check_cubic_factor(g, f)?;
    let mut vertex_map = vec![usize::MAX; g.vertex_count()];
    let mut factor_edges = Vec::with_capacity(g.vertex_count() / 2);
    for e in f.iter() {
        let [a, b] = g.endpoints(e);
        vertex_map[a] = factor_edges.len();
        vertex_map[b] = factor_edges.len();
        factor_edges.push(e);
    }
    let mut builder = MultigraphBuilder::with_capacity(factor_edges.len(), g.edge_count() - factor_edges.len());
    let mut edge_map = Vec::new();
    let mut source_to_quotient = vec![None; g.edge_count()];
    let mut flagged_loops = Vec::new();
    for e in 0..g.edge_count() {
        if f.contains(e) {
            continue;
        }
        let [a, b] = g.endpoints(e);
        let id = builder.add_edge(vertex_map[a], vertex_map[b]);
        if a != b && vertex_map[a] == vertex_map[b] {
            flagged_loops.push(id);
        }
        edge_map.push(e);
        source_to_quotient[e] = Some(id);
    }
    Ok(Contraction {
        source: g.clone(),
        factor: f.clone(),
        quotient: builder.build(),
        vertex_map,
        factor_edges,
        edge_map,
        source_to_quotient,
        flagged_loops,
    })
}

/// Splits the four edge-ends at every vertex of a quartic multigraph into
/// two *sides* of two ends each. A transition (pair of ends at a vertex) is
/// non-traversing iff both ends lie on the same side.
///
/// For a contraction, side 0 holds the ends whose source endpoint is
/// `endpoints[0]` of the contracted factor edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionSystem {
    /// `sides[e][end]` for every edge end.
    pub sides: Vec<[u8; 2]>,
}

impl TransitionSystem {
    pub fn new(x: &Multigraph, sides: Vec<[u8; 2]>) -> Result<Self> {
        if sides.len() != x.edge_count() {
            return Err(Error::SubsetLength {
                expected: x.edge_count(),
                got: sides.len(),
            });
        }
        let ts = Self { sides };
        ts.validate(x)?;
        Ok(ts)
    }

    fn validate(&self, x: &Multigraph) -> Result<()> {
        for v in 0..x.vertex_count() {
            let inc = x.incidence(v);
            if inc.len() != 4 {
                return Err(Error::NotQuartic {
                    vertex: v,
                    degree: inc.len(),
                });
            }
            let zeros = inc
                .iter()
                .filter(|i| self.side(i.edge, i.end) == 0)
                .count();
            if zeros != 2 || inc.iter().any(|i| self.side(i.edge, i.end) > 1) {
                return Err(Error::InvalidColoring(format!(
                    "vertex {v} does not split its ends 2+2"
                )));
            }
        }
        Ok(())
    }

    /// Transitions induced by a 2-factorization: ends of the same color are
    /// on the same side (red = 0, blue = 1).
    pub fn from_coloring(x: &Multigraph, coloring: &Coloring) -> Result<Self> {
        coloring.validate(x)?;
        let sides = coloring
            .colors
            .iter()
            .map(|&c| {
                let s = u8::from(c == Color::Blue);
                [s, s]
            })
            .collect();
        Self::new(x, sides)
    }

    pub fn side(&self, edge: EdgeId, end: u8) -> u8 {
        self.sides[edge][end as usize]
    }

    /// Whether the transition formed by two distinct ends at one vertex is
    /// traversing.
    pub fn is_traversing(&self, a: (EdgeId, u8), b: (EdgeId, u8)) -> bool {
        self.side(a.0, a.1) != self.side(b.0, b.1)
    }

    /// The two non-traversing transitions at `v`, side 0 first. Each is a
    /// pair of `(edge, end)` slots.
    pub fn non_traversing(&self, x: &Multigraph, v: VertexId) -> [[(EdgeId, u8); 2]; 2] {
        let mut out = [[(0, 0); 2]; 2];
        let mut fill = [0usize; 2];
        for inc in x.incidence(v) {
            let s = self.side(inc.edge, inc.end) as usize;
            out[s][fill[s]] = (inc.edge, inc.end);
            fill[s] += 1;
        }
        out
    }

    /// The four traversing transitions at `v`.
    pub fn traversing(&self, x: &Multigraph, v: VertexId) -> Vec<[(EdgeId, u8); 2]> {
        let [side0, side1] = self.non_traversing(x, v);
        let mut out = Vec::with_capacity(4);
        for a in side0 {
            for b in side1 {
                out.push([a, b]);
            }
        }
        out
    }
}

/// The transitions of a contraction.
pub fn classify_transitions(c: &Contraction) -> TransitionSystem {
    let sides = c
        .edge_map
        .iter()
        .map(|&e| {
            let ends = c.source.endpoints(e);
            ends.map(|v| {
                let fe = c.factor_edges[c.vertex_map[v]];
                u8::from(c.source.endpoints(fe)[0] != v)
            })
        })
        .collect();
    TransitionSystem { sides }
}

/// `Y(G,F)`: one vertex per cycle of `G - F`, one edge per factor edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub graph: Multigraph,
    pub cycles: Vec<Cycle>,
    /// Source vertex -> index of its cycle in `cycles`.
    pub cycle_of: Vec<usize>,
    /// Auxiliary edge -> factor edge of the source.
    pub factor_edges: Vec<EdgeId>,
}

pub fn auxiliary_graph(g: &Multigraph, f: &EdgeSubset) -> Result<AuxiliaryGraph> {
    check_cubic_factor(g, f)?;
    let cycles = g.cycle_decomposition(&f.complement())?;
    let mut cycle_of = vec![usize::MAX; g.vertex_count()];
    for (i, c) in cycles.iter().enumerate() {
        for &v in &c.vertices {
            cycle_of[v] = i;
        }
    }
    let mut builder = MultigraphBuilder::with_capacity(cycles.len(), f.count());
    let mut factor_edges = Vec::new();
    for e in f.iter() {
        let [a, b] = g.endpoints(e);
        builder.add_edge(cycle_of[a], cycle_of[b]);
        factor_edges.push(e);
    }
    Ok(AuxiliaryGraph {
        graph: builder.build(),
        cycles,
        cycle_of,
        factor_edges,
    })
}

/// BFS 2-coloring; `None` if some component is not bipartite. `roots[c]`
/// chooses, per component, a vertex that receives color `true`.
fn two_color(g: &Multigraph, root_of: impl Fn(&[VertexId]) -> VertexId) -> Option<Vec<bool>> {
    let mut color = vec![None; g.vertex_count()];
    for comp in g.connected_components() {
        let root = root_of(&comp);
        color[root] = Some(true);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let cv = color[v].expect("queued vertices are colored");
            for inc in g.incidence(v) {
                match color[inc.other] {
                    None => {
                        color[inc.other] = Some(!cv);
                        queue.push_back(inc.other);
                    }
                    Some(c) if c == cv => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(color.into_iter().map(|c| c.unwrap_or(true)).collect())
}

pub fn is_special(g: &Multigraph, f: &EdgeSubset) -> Result<bool> {
    let aux = auxiliary_graph(g, f)?;
    Ok(two_color(&aux.graph, |comp| comp[0]).is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

/// One color per edge of a quartic multigraph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<Color>,
}

impl Coloring {
    pub fn class(&self, color: Color) -> EdgeSubset {
        EdgeSubset::from_bits(self.colors.iter().map(|&c| c == color).collect())
    }

    /// Both color classes must be 2-factors.
    pub fn validate(&self, x: &Multigraph) -> Result<()> {
        if self.colors.len() != x.edge_count() {
            return Err(Error::SubsetLength {
                expected: x.edge_count(),
                got: self.colors.len(),
            });
        }
        for color in [Color::Red, Color::Blue] {
            let class = self.class(color);
            for v in 0..x.vertex_count() {
                let d = x.degree_in(v, &class);
                if d != 2 {
                    return Err(Error::InvalidColoring(format!(
                        "vertex {v} has {d} {color:?} ends"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// The blue/red 2-factorization of a special contraction. In every
/// component of `Y(G,F)` the cycle through `endpoints[1]` of the lowest
/// factor edge is blue, so for I-graphs with the spoke factor the inner rim
/// is blue.
pub fn blue_red_coloring(c: &Contraction) -> Result<Coloring> {
    let aux = auxiliary_graph(&c.source, &c.factor)?;
    let root_of = |comp: &[VertexId]| {
        let lowest = aux
            .factor_edges
            .iter()
            .copied()
            .find(|&e| comp.contains(&aux.cycle_of[c.source.endpoints(e)[0]]))
            .expect("every auxiliary component meets a factor edge");
        aux.cycle_of[c.source.endpoints(lowest)[1]]
    };
    let blue = two_color(&aux.graph, root_of).ok_or(Error::NotSpecial)?;
    let colors = c
        .edge_map
        .iter()
        .map(|&e| {
            let v = c.source.endpoints(e)[0];
            if blue[aux.cycle_of[v]] {
                Color::Blue
            } else {
                Color::Red
            }
        })
        .collect();
    Ok(Coloring { colors })
}

/// A cubic graph with a marked perfect matching, produced by splitting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub graph: Multigraph,
    pub factor: EdgeSubset,
    /// Split edge -> quartic edge it copies (`None` for matching edges).
    pub origin: Vec<Option<EdgeId>>,
}

/// Splits every vertex `v` of `x` into a red copy `v` and a blue copy
/// `N + v` joined by a matching edge. Edge order: red edges, matching edges
/// `[v, N+v]`, blue edges, each in id order.
pub fn split_quartic(x: &Multigraph, coloring: &Coloring) -> Result<Split> {
    coloring.validate(x)?;
    let n = x.vertex_count();
    let mut builder = MultigraphBuilder::with_capacity(2 * n, 3 * n);
    let mut origin = Vec::with_capacity(3 * n);
    for e in 0..x.edge_count() {
        if coloring.colors[e] == Color::Red {
            let [a, b] = x.endpoints(e);
            builder.add_edge(a, b);
            origin.push(Some(e));
        }
    }
    let first_spoke = origin.len();
    for v in 0..n {
        builder.add_edge(v, n + v);
        origin.push(None);
    }
    for e in 0..x.edge_count() {
        if coloring.colors[e] == Color::Blue {
            let [a, b] = x.endpoints(e);
            builder.add_edge(n + a, n + b);
            origin.push(Some(e));
        }
    }
    let graph = builder.build();
    let factor = EdgeSubset::from_ids(graph.edge_count(), first_spoke..first_spoke + n);
    Ok(Split {
        graph,
        factor,
        origin,
    })
}
