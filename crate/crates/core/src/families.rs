//! Graph families: I-graphs, the quartic grids `X(s,t,r)`, their cubic
//! splits `SGI(st,s,t,r)`, and degree-4 Cayley multigraphs on
//! `Z_m x Z_d`.
//!
//! Indexing is fixed once and relied upon elsewhere:
//! * I-graph vertex `k < n` is outer `v_k`, vertex `n + k` is inner `u_k`.
//!   Edge ids `0..n` are outer edges `[v_i, v_{i+p}]`, `n..2n` spokes,
//!   `2n..3n` inner edges `[u_i, u_{i+q}]`.
//! * `X(s,t,r)` vertex `x^i_j` (row `i`, column `j`) has index `i*s + j`.
//!   Edge ids list horizontals `[x^i_j, x^i_{j+1}]` (id `i*s + j`), then
//!   verticals `[x^i_j, x^{i+1}_j]` for `i < t-1`, then diagonals
//!   `[x^{t-1}_j, x^0_{j+r}]`.
//! * `SGI` mirrors `X`: outer vertex `i*s + j`, inner `st + i*s + j`; outer
//!   edges follow the horizontal order, then spokes, then inner edges in the
//!   vertical/diagonal order.

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, gcd3};
use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSubset, Multigraph, MultigraphBuilder, VertexId};

/// A multigraph with one label per edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeled<L> {
    pub graph: Multigraph,
    pub labels: Vec<L>,
}

impl<L: Copy + PartialEq> Labeled<L> {
    pub fn subset_where(&self, pred: impl Fn(L) -> bool) -> EdgeSubset {
        EdgeSubset::from_bits(self.labels.iter().map(|&l| pred(l)).collect())
    }

    pub fn subset_of(&self, label: L) -> EdgeSubset {
        self.subset_where(|l| l == label)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicEdgeKind {
    Outer,
    Spoke,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XEdgeKind {
    Horizontal,
    Vertical,
    Diagonal,
}

// ---------------------------------------------------------------- I-graphs

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IParams {
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl IParams {
    pub fn new(n: usize, p: usize, q: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("I({n},{p},{q}): n must be at least 3")));
        }
        for (name, v) in [("p", p), ("q", q)] {
            if v == 0 || v >= n {
                return Err(Error::InvalidParams(format!(
                    "I({n},{p},{q}): {name} must lie in 1..n-1"
                )));
            }
            if 2 * v == n {
                return Err(Error::InvalidParams(format!(
                    "I({n},{p},{q}): {name} must differ from n/2"
                )));
            }
        }
        Ok(Self { n, p, q })
    }

    /// Generalized Petersen graph `G(n,k) = I(n,1,k)`.
    pub fn petersen(n: usize, k: usize) -> Result<Self> {
        Self::new(n, 1, k)
    }

    /// `t = gcd(n,q)`.
    pub fn t(&self) -> usize {
        gcd(self.n, self.q)
    }

    /// `s = n / t`.
    pub fn s(&self) -> usize {
        self.n / self.t()
    }

    /// Every valid triple `(n,p,q)` for fixed `n`, in lexicographic order.
    pub fn all_for(n: usize) -> Vec<IParams> {
        let mut out = Vec::new();
        for p in 1..n {
            for q in 1..n {
                if let Ok(params) = IParams::new(n, p, q) {
                    out.push(params);
                }
            }
        }
        out
    }
}

impl std::fmt::Display for IParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I({},{},{})", self.n, self.p, self.q)
    }
}

pub fn i_graph(params: &IParams) -> Labeled<CubicEdgeKind> {
    let IParams { n, p, q } = *params;
    let mut b = MultigraphBuilder::with_capacity(2 * n, 3 * n);
    let mut labels = Vec::with_capacity(3 * n);
    for i in 0..n {
        b.add_edge(i, (i + p) % n);
        labels.push(CubicEdgeKind::Outer);
    }
    for i in 0..n {
        b.add_edge(i, n + i);
        labels.push(CubicEdgeKind::Spoke);
    }
    for i in 0..n {
        b.add_edge(n + i, n + (i + q) % n);
        labels.push(CubicEdgeKind::Inner);
    }
    Labeled {
        graph: b.build(),
        labels,
    }
}

/// Connectivity through `gcd(t,p) = 1` and `gcd(gcd(s,p), q) = 1`.
pub fn is_connected_i(params: &IParams) -> bool {
    let (s, t) = (params.s(), params.t());
    let connected = gcd(t, params.p) == 1 && gcd(gcd(s, params.p), params.q) == 1;
    debug_assert_eq!(connected, gcd3(params.n, params.p, params.q) == 1);
    connected
}

/// Proper I-graphs are the connected ones not isomorphic to a generalized
/// Petersen graph: `t != 1` and `gcd(s,p) != 1`.
pub fn is_proper_i(params: &IParams) -> Result<bool> {
    if !is_connected_i(params) {
        return Err(Error::Disconnected);
    }
    Ok(params.t() != 1 && gcd(params.s(), params.p) != 1)
}

// ----------------------------------------------------------- X(s,t,r) grids

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct XParams {
    pub s: usize,
    pub t: usize,
    pub r: usize,
}

impl XParams {
    pub fn new(s: usize, t: usize, r: usize) -> Result<Self> {
        if s == 0 || t == 0 {
            return Err(Error::InvalidParams(format!("X({s},{t},{r}): s and t must be positive")));
        }
        if r >= s {
            return Err(Error::InvalidParams(format!("X({s},{t},{r}): r must lie in 0..s-1")));
        }
        Ok(Self { s, t, r })
    }

    pub fn order(&self) -> usize {
        self.s * self.t
    }

    /// `d1 = gcd(s,t,r)`.
    pub fn d1(&self) -> usize {
        gcd3(self.s, self.t, self.r)
    }

    /// `d = gcd(s,t)`.
    pub fn d(&self) -> usize {
        gcd(self.s, self.t)
    }

    /// `X(s,t,s-r)`, the column reflection.
    pub fn mirrored(&self) -> XParams {
        XParams {
            s: self.s,
            t: self.t,
            r: (self.s - self.r) % self.s,
        }
    }

    pub fn vertex(&self, row: usize, col: usize) -> VertexId {
        (row % self.t) * self.s + col % self.s
    }

    pub fn coords(&self, v: VertexId) -> (usize, usize) {
        (v / self.s, v % self.s)
    }

    pub fn edge_count(&self) -> usize {
        2 * self.s * self.t
    }

    /// Id of the edge of `kind` leaving `x^row_col` (vertical requires
    /// `row < t-1`, diagonal is indexed by its start column).
    pub fn edge_id(&self, kind: XEdgeKind, row: usize, col: usize) -> EdgeId {
        let (s, t) = (self.s, self.t);
        match kind {
            XEdgeKind::Horizontal => row * s + col,
            XEdgeKind::Vertical => {
                debug_assert!(row + 1 < t);
                s * t + row * s + col
            }
            XEdgeKind::Diagonal => s * t + (t - 1) * s + col,
        }
    }

    /// Inverse of [`XParams::edge_id`].
    pub fn edge_coords(&self, e: EdgeId) -> (XEdgeKind, usize, usize) {
        let (s, t) = (self.s, self.t);
        if e < s * t {
            (XEdgeKind::Horizontal, e / s, e % s)
        } else if e < s * t + (t - 1) * s {
            let k = e - s * t;
            (XEdgeKind::Vertical, k / s, k % s)
        } else {
            (XEdgeKind::Diagonal, t - 1, e - s * t - (t - 1) * s)
        }
    }

    /// Blue edges (vertical or diagonal) in the fundamental factorization.
    pub fn is_blue(&self, e: EdgeId) -> bool {
        e >= self.s * self.t
    }
}

impl std::fmt::Display for XParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "X({},{},{})", self.s, self.t, self.r)
    }
}

pub fn x_graph(params: &XParams) -> Labeled<XEdgeKind> {
    let XParams { s, t, r } = *params;
    let mut b = MultigraphBuilder::with_capacity(s * t, 2 * s * t);
    let mut labels = Vec::with_capacity(2 * s * t);
    for i in 0..t {
        for j in 0..s {
            b.add_edge(params.vertex(i, j), params.vertex(i, j + 1));
            labels.push(XEdgeKind::Horizontal);
        }
    }
    for i in 0..t - 1 {
        for j in 0..s {
            b.add_edge(params.vertex(i, j), params.vertex(i + 1, j));
            labels.push(XEdgeKind::Vertical);
        }
    }
    for j in 0..s {
        b.add_edge(params.vertex(t - 1, j), params.vertex(0, j + r));
        labels.push(XEdgeKind::Diagonal);
    }
    Labeled {
        graph: b.build(),
        labels,
    }
}

/// The cubic split of `X(s,t,r)` along its fundamental factorization.
pub fn sgi_graph(params: &XParams) -> Labeled<CubicEdgeKind> {
    let XParams { s, t, r } = *params;
    let n = s * t;
    let mut b = MultigraphBuilder::with_capacity(2 * n, 3 * n);
    let mut labels = Vec::with_capacity(3 * n);
    for i in 0..t {
        for j in 0..s {
            b.add_edge(params.vertex(i, j), params.vertex(i, j + 1));
            labels.push(CubicEdgeKind::Outer);
        }
    }
    for v in 0..n {
        b.add_edge(v, n + v);
        labels.push(CubicEdgeKind::Spoke);
    }
    for i in 0..t - 1 {
        for j in 0..s {
            b.add_edge(n + params.vertex(i, j), n + params.vertex(i + 1, j));
            labels.push(CubicEdgeKind::Inner);
        }
    }
    for j in 0..s {
        b.add_edge(n + params.vertex(t - 1, j), n + params.vertex(0, j + r));
        labels.push(CubicEdgeKind::Inner);
    }
    Labeled {
        graph: b.build(),
        labels,
    }
}

// ------------------------------------------------------ Cayley multigraphs

/// Degree-4 Cayley multigraph on `Z_m x Z_d` with connection list
/// `{±gamma1, ±gamma2}`. Elements are pairs `(a, b)`, `a < m`, `b < d`,
/// indexed as `a*d + b`. A circulant has `cofactor = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CayleyParams {
    pub cyclic_order: usize,
    pub cofactor: usize,
    pub gamma1: (usize, usize),
    pub gamma2: (usize, usize),
}

impl CayleyParams {
    pub fn circulant(n: usize, a: usize, b: usize) -> Self {
        Self {
            cyclic_order: n,
            cofactor: 1,
            gamma1: (a % n, 0),
            gamma2: (b % n, 0),
        }
    }

    pub fn order(&self) -> usize {
        self.cyclic_order * self.cofactor
    }

    pub fn index(&self, x: (usize, usize)) -> usize {
        (x.0 % self.cyclic_order) * self.cofactor + x.1 % self.cofactor
    }

    pub fn element(&self, index: usize) -> (usize, usize) {
        (index / self.cofactor, index % self.cofactor)
    }

    pub fn add(&self, x: (usize, usize), y: (usize, usize)) -> (usize, usize) {
        (
            (x.0 + y.0) % self.cyclic_order,
            (x.1 + y.1) % self.cofactor,
        )
    }

    pub fn scale(&self, k: usize, x: (usize, usize)) -> (usize, usize) {
        (
            (k % self.cyclic_order) * x.0 % self.cyclic_order,
            (k % self.cofactor) * x.1 % self.cofactor,
        )
    }

    pub fn zero(&self) -> (usize, usize) {
        (0, 0)
    }

    /// Order of a group element.
    pub fn element_order(&self, x: (usize, usize)) -> usize {
        let mut k = 1;
        let mut acc = x;
        while acc != self.zero() {
            acc = self.add(acc, x);
            k += 1;
        }
        k
    }
}

/// One edge `[x, x + gamma]` per element `x` and per listed generator;
/// `gamma = 0` gives loops and involutions give doubled edges, which is
/// the multiplicity the symmetric list `{±gamma}` prescribes.
pub fn cayley_graph(params: &CayleyParams) -> Multigraph {
    let n = params.order();
    let mut b = MultigraphBuilder::with_capacity(n, 2 * n);
    for gamma in [params.gamma1, params.gamma2] {
        for v in 0..n {
            let x = params.element(v);
            b.add_edge(v, params.index(params.add(x, gamma)));
        }
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_graph_sizes() {
        let g = i_graph(&IParams::new(5, 1, 2).unwrap()).graph;
        assert_eq!(g.vertex_count(), 10);
        assert_eq!(g.edge_count(), 15);
        assert!(g.is_regular(3));
        assert!(g.audit());
    }

    #[test]
    fn i_params_validation() {
        assert!(IParams::new(6, 3, 1).is_err());
        assert!(IParams::new(6, 1, 3).is_err());
        assert!(IParams::new(2, 1, 1).is_err());
        assert!(IParams::new(6, 0, 1).is_err());
        assert!(IParams::new(6, 2, 2).is_ok());
        assert!(XParams::new(3, 2, 3).is_err());
        assert!(XParams::new(0, 2, 0).is_err());
    }

    #[test]
    fn connectivity_examples() {
        let g622 = IParams::new(6, 2, 2).unwrap();
        assert!(!is_connected_i(&g622));
        assert_eq!(i_graph(&g622).graph.connected_components().len(), 2);
        let g1223 = IParams::new(12, 2, 3).unwrap();
        assert!(is_connected_i(&g1223));
        assert_eq!(i_graph(&g1223).graph.connected_components().len(), 1);
        assert!(is_connected_i(&IParams::new(7, 1, 2).unwrap()));
    }

    #[test]
    fn proper_examples() {
        assert!(is_proper_i(&IParams::new(12, 2, 3).unwrap()).unwrap());
        assert!(is_proper_i(&IParams::new(12, 4, 3).unwrap()).unwrap());
        for q in [2, 3, 4, 5] {
            assert!(!is_proper_i(&IParams::new(11, 1, q).unwrap()).unwrap());
        }
        assert_eq!(
            is_proper_i(&IParams::new(6, 2, 2).unwrap()),
            Err(Error::Disconnected)
        );
    }

    #[test]
    fn x_graph_shape() {
        let p = XParams::new(5, 4, 3).unwrap();
        let x = x_graph(&p);
        assert_eq!(x.graph.vertex_count(), 20);
        assert_eq!(x.graph.edge_count(), 40);
        assert!(x.graph.is_regular(4));
        for e in 0..x.graph.edge_count() {
            let (k, i, j) = p.edge_coords(e);
            assert_eq!(p.edge_id(k, i, j), e);
            assert_eq!(k, x.labels[e]);
        }
    }

    #[test]
    fn x_graph_degenerate_cases() {
        for s in 1..6 {
            let x = x_graph(&XParams::new(s, 1, 0).unwrap());
            for e in 0..x.graph.edge_count() {
                if x.labels[e] == XEdgeKind::Diagonal {
                    assert!(x.graph.is_loop(e));
                }
            }
            assert!(x.graph.is_regular(4));
        }
        for t in 1..5 {
            for r in 0..2 {
                let x = x_graph(&XParams::new(2, t, r).unwrap());
                assert!(x.graph.has_parallel_edges());
            }
        }
    }

    #[test]
    fn sgi_shapes() {
        let g = sgi_graph(&XParams::new(4, 2, 2).unwrap()).graph;
        assert_eq!(g.vertex_count(), 16);
        assert!(g.is_regular(3));
        assert!(g.is_simple());
        assert_eq!(g.girth(), Some(4));
        assert!(sgi_graph(&XParams::new(1, 3, 0).unwrap()).graph.has_loop());
        assert!(sgi_graph(&XParams::new(2, 3, 1).unwrap())
            .graph
            .has_parallel_edges());
    }

    #[test]
    fn circulant_on_five_is_complete() {
        let g = cayley_graph(&CayleyParams::circulant(5, 1, 2));
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(g.multiplicity(a, b), usize::from(a != b));
            }
        }
    }

    #[test]
    fn involution_generators_double_edges() {
        let g = cayley_graph(&CayleyParams::circulant(4, 1, 2));
        assert_eq!(g.multiplicity(0, 2), 2);
        assert!(g.is_regular(4));
        let z = cayley_graph(&CayleyParams::circulant(3, 0, 1));
        assert!(z.has_loop());
        assert!(z.is_regular(4));
    }
}
