//! Brute-force ground truth: Hamiltonian cycles, 2-factors, isomorphism,
//! and the certificate records that carry their answers.
//!
//! Nothing here uses the quotient machinery; it only sees multigraphs.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::GoodTour;
use crate::multigraph::{EdgeId, EdgeSubset, Multigraph, VertexId};

pub const DEFAULT_MAX_HAM_VERTICES: usize = 60;
pub const DEFAULT_MAX_ISO_VERTICES: usize = 48;
pub const MAX_TWO_FACTOR_VERTICES: usize = 20;

/// Environment overrides for the size guards.
pub const HAM_LIMIT_VAR: &str = "HAMCUBIC_MAX_HAM_VERTICES";
pub const ISO_LIMIT_VAR: &str = "HAMCUBIC_MAX_ISO_VERTICES";

fn limit_from_env(var: &str, default: usize) -> usize {
    std::env::var(var)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

pub fn ham_limit() -> usize {
    limit_from_env(HAM_LIMIT_VAR, DEFAULT_MAX_HAM_VERTICES)
}

pub fn iso_limit() -> usize {
    limit_from_env(ISO_LIMIT_VAR, DEFAULT_MAX_ISO_VERTICES)
}

/// A machine-checkable answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "snake_case")]
pub enum Certificate {
    HamiltonianCycle { cycle: Vec<VertexId> },
    NoHamiltonian { nodes: u64, millis: u64 },
    GoodSubgraph { edges: Vec<EdgeId>, tour: GoodTour },
    NoGoodSubgraph { nodes: u64, millis: u64 },
    Isomorphism { bijection: Vec<VertexId> },
    NonIsomorphism { nodes: u64, millis: u64 },
}

impl Certificate {
    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            Certificate::HamiltonianCycle { .. }
                | Certificate::GoodSubgraph { .. }
                | Certificate::Isomorphism { .. }
        )
    }
}

/// True iff `cycle` visits every vertex once and consecutive vertices
/// (cyclically) are adjacent. Two vertices need a parallel pair, one vertex
/// a loop.
pub fn verify_cycle(g: &Multigraph, cycle: &[VertexId]) -> bool {
    let n = g.vertex_count();
    if n == 0 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return false;
        }
    }
    match n {
        1 => g.multiplicity(cycle[0], cycle[0]) > 0,
        2 => g.multiplicity(cycle[0], cycle[1]) >= 2,
        _ => (0..n).all(|i| g.multiplicity(cycle[i], cycle[(i + 1) % n]) > 0),
    }
}

/// Whether a bijection maps `g` onto `h` preserving edge multiplicities.
pub fn verify_isomorphism(g: &Multigraph, h: &Multigraph, map: &[VertexId]) -> bool {
    let n = g.vertex_count();
    if h.vertex_count() != n || map.len() != n || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut seen = vec![false; n];
    if map.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
        return false;
    }
    (0..g.edge_count()).all(|e| {
        let [a, b] = g.endpoints(e);
        g.multiplicity(a, b) == h.multiplicity(map[a], map[b])
    })
}

// ------------------------------------------------------------ Hamiltonicity

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamOutcome {
    pub cycle: Option<Vec<VertexId>>,
    pub nodes: u64,
}

const UNKNOWN: i8 = -1;
const OUT: i8 = 0;
const IN: i8 = 1;

struct HamSearch<'a> {
    g: &'a Multigraph,
    nodes: u64,
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}

impl HamSearch<'_> {
    fn propagate(&self, state: &mut [i8]) -> bool {
        let g = self.g;
        let n = g.vertex_count();
        loop {
            let mut changed = false;
            for v in 0..n {
                let (mut ins, mut unknown) = (0, 0);
                for inc in g.incidence(v) {
                    match state[inc.edge] {
                        IN => ins += 1,
                        UNKNOWN => unknown += 1,
                        _ => {}
                    }
                }
                if ins > 2 || ins + unknown < 2 {
                    return false;
                }
                if unknown > 0 && (ins == 2 || ins + unknown == 2) {
                    let value = if ins == 2 { OUT } else { IN };
                    for inc in g.incidence(v) {
                        if state[inc.edge] == UNKNOWN {
                            state[inc.edge] = value;
                        }
                    }
                    changed = true;
                }
            }
            // Paths formed by chosen edges must not close early.
            let mut parent: Vec<usize> = (0..n).collect();
            let mut size = vec![1usize; n];
            let mut in_count = 0;
            for e in 0..g.edge_count() {
                if state[e] != IN {
                    continue;
                }
                in_count += 1;
                let [a, b] = g.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    if in_count != n {
                        return false;
                    }
                } else {
                    parent[ra] = rb;
                    size[rb] += size[ra];
                }
            }
            for e in 0..g.edge_count() {
                if state[e] != UNKNOWN {
                    continue;
                }
                let [a, b] = g.endpoints(e);
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb && !(size[ra] == n && in_count == n - 1) {
                    state[e] = OUT;
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn connected(&self, state: &[i8]) -> bool {
        let g = self.g;
        let mut seen = vec![false; g.vertex_count()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for inc in g.incidence(v) {
                if state[inc.edge] != OUT && !seen[inc.other] {
                    seen[inc.other] = true;
                    count += 1;
                    stack.push(inc.other);
                }
            }
        }
        count == g.vertex_count()
    }

    fn run(&mut self, mut state: Vec<i8>) -> Option<Vec<i8>> {
        self.nodes += 1;
        if !self.propagate(&mut state) || !self.connected(&state) {
            return None;
        }
        let g = self.g;
        let ins = |v: VertexId, st: &[i8]| g.incidence(v).iter().filter(|i| st[i.edge] == IN).count();
        let pick = (0..g.vertex_count())
            .filter(|&v| ins(v, &state) == 1)
            .chain((0..g.vertex_count()).filter(|&v| ins(v, &state) == 0))
            .find_map(|v| {
                g.incidence(v)
                    .iter()
                    .find(|i| state[i.edge] == UNKNOWN)
                    .map(|i| i.edge)
            });
        let Some(e) = pick else {
            return Some(state);
        };
        for value in [IN, OUT] {
            let mut next = state.clone();
            next[e] = value;
            if let Some(done) = self.run(next) {
                return Some(done);
            }
        }
        None
    }
}

/// Exhaustive Hamiltonian cycle search with the default size guard.
pub fn brute_hamiltonian(g: &Multigraph) -> Result<HamOutcome> {
    brute_hamiltonian_with_limit(g, ham_limit())
}

pub fn brute_hamiltonian_with_limit(g: &Multigraph, limit: usize) -> Result<HamOutcome> {
    let n = g.vertex_count();
    if n > limit {
        return Err(Error::SizeGuard {
            what: "hamiltonicity input",
            size: n,
            limit,
        });
    }
    let absent = |nodes| Ok(HamOutcome { cycle: None, nodes });
    if n == 0 || !g.is_connected() {
        return absent(0);
    }
    if n <= 2 {
        let cycle: Vec<VertexId> = (0..n).collect();
        return if verify_cycle(g, &cycle) {
            Ok(HamOutcome {
                cycle: Some(cycle),
                nodes: 1,
            })
        } else {
            absent(1)
        };
    }
    let state = (0..g.edge_count())
        .map(|e| if g.is_loop(e) { OUT } else { UNKNOWN })
        .collect();
    let mut search = HamSearch { g, nodes: 0 };
    let Some(state) = search.run(state) else {
        return absent(search.nodes);
    };
    let chosen = EdgeSubset::from_bits(state.iter().map(|&s| s == IN).collect());
    let cycles = g.cycle_decomposition(&chosen)?;
    debug_assert_eq!(cycles.len(), 1);
    let cycle = cycles.into_iter().next().map(|c| c.vertices);
    Ok(HamOutcome {
        cycle,
        nodes: search.nodes,
    })
}

// --------------------------------------------------------------- 2-factors

/// All 2-factors of a cubic multigraph, as complements of its perfect
/// matchings, in the order the matchings are found.
pub fn enumerate_two_factors(g: &Multigraph) -> Result<Vec<EdgeSubset>> {
    let n = g.vertex_count();
    if n > MAX_TWO_FACTOR_VERTICES {
        return Err(Error::SizeGuard {
            what: "2-factor enumeration input",
            size: n,
            limit: MAX_TWO_FACTOR_VERTICES,
        });
    }
    for v in 0..n {
        let d = g.degree(v)?;
        if d != 3 {
            return Err(Error::NotCubic { vertex: v, degree: d });
        }
    }
    fn rec(g: &Multigraph, matched: &mut [bool], chosen: &mut Vec<EdgeId>, out: &mut Vec<EdgeSubset>) {
        let Some(v) = matched.iter().position(|&m| !m) else {
            let m = EdgeSubset::from_ids(g.edge_count(), chosen.iter().copied());
            out.push(m.complement());
            return;
        };
        for inc in g.incidence(v) {
            if inc.other == v || matched[inc.other] {
                continue;
            }
            matched[v] = true;
            matched[inc.other] = true;
            chosen.push(inc.edge);
            rec(g, matched, chosen, out);
            chosen.pop();
            matched[v] = false;
            matched[inc.other] = false;
        }
    }
    let mut out = Vec::new();
    rec(g, &mut vec![false; n], &mut Vec::new(), &mut out);
    Ok(out)
}

// ------------------------------------------------------------- isomorphism

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoOutcome {
    pub bijection: Option<Vec<VertexId>>,
    pub nodes: u64,
}

fn distance_profile(g: &Multigraph, v: VertexId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.vertex_count()];
    dist[v] = 0;
    let mut queue = VecDeque::from([v]);
    let mut profile = vec![1];
    while let Some(u) = queue.pop_front() {
        for inc in g.incidence(u) {
            if dist[inc.other] == usize::MAX {
                dist[inc.other] = dist[u] + 1;
                if profile.len() <= dist[inc.other] {
                    profile.push(0);
                }
                profile[dist[inc.other]] += 1;
                queue.push_back(inc.other);
            }
        }
    }
    profile
}

/// Colour refinement run jointly on both graphs so colours are comparable.
fn refine(g: &Multigraph, h: &Multigraph) -> (Vec<usize>, Vec<usize>) {
    let initial = |x: &Multigraph| -> Vec<(usize, usize, Vec<usize>)> {
        (0..x.vertex_count())
            .map(|v| {
                (
                    x.incidence(v).len(),
                    x.multiplicity(v, v),
                    distance_profile(x, v),
                )
            })
            .collect()
    };
    let mut table = BTreeMap::new();
    let (ig, ih) = (initial(g), initial(h));
    for key in ig.iter().chain(ih.iter()) {
        let next = table.len();
        table.entry(key.clone()).or_insert(next);
    }
    let mut cg: Vec<usize> = ig.iter().map(|k| table[k]).collect();
    let mut ch: Vec<usize> = ih.iter().map(|k| table[k]).collect();
    loop {
        let signature = |x: &Multigraph, c: &[usize], v: VertexId| {
            let mut nb: Vec<usize> = x.incidence(v).iter().map(|i| c[i.other]).collect();
            nb.sort_unstable();
            (c[v], nb)
        };
        let mut table = BTreeMap::new();
        let sg: Vec<_> = (0..g.vertex_count()).map(|v| signature(g, &cg, v)).collect();
        let sh: Vec<_> = (0..h.vertex_count()).map(|v| signature(h, &ch, v)).collect();
        for key in sg.iter().chain(sh.iter()) {
            let next = table.len();
            table.entry(key.clone()).or_insert(next);
        }
        let ng: Vec<usize> = sg.iter().map(|k| table[k]).collect();
        let nh: Vec<usize> = sh.iter().map(|k| table[k]).collect();
        let classes = |c: &[usize]| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        let stable = classes(&ng) == classes(&cg) && classes(&nh) == classes(&ch);
        cg = ng;
        ch = nh;
        if stable {
            return (cg, ch);
        }
    }
}

/// Backtracking isomorphism search after colour refinement, with the
/// default size guard.
pub fn brute_isomorphic(g: &Multigraph, h: &Multigraph) -> Result<IsoOutcome> {
    brute_isomorphic_with_limit(g, h, iso_limit())
}

pub fn brute_isomorphic_with_limit(g: &Multigraph, h: &Multigraph, limit: usize) -> Result<IsoOutcome> {
    let n = g.vertex_count();
    for size in [n, h.vertex_count()] {
        if size > limit {
            return Err(Error::SizeGuard {
                what: "isomorphism input",
                size,
                limit,
            });
        }
    }
    let none = |nodes| Ok(IsoOutcome { bijection: None, nodes });
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return none(0);
    }
    let (cg, ch) = refine(g, h);
    let histogram = |c: &[usize]| {
        let mut c = c.to_vec();
        c.sort_unstable();
        c
    };
    if histogram(&cg) != histogram(&ch) {
        return none(0);
    }
    // Visit g in BFS order so every vertex after a component root has an
    // already-mapped neighbour.
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for inc in g.incidence(v) {
                if !seen[inc.other] {
                    seen[inc.other] = true;
                    parent[inc.other] = Some(v);
                    queue.push_back(inc.other);
                }
            }
        }
    }
    struct State<'a> {
        g: &'a Multigraph,
        h: &'a Multigraph,
        cg: Vec<usize>,
        ch: Vec<usize>,
        order: Vec<VertexId>,
        parent: Vec<Option<VertexId>>,
        map: Vec<usize>,
        used: Vec<bool>,
        nodes: u64,
    }
    impl State<'_> {
        fn fits(&self, depth: usize, v: VertexId, w: VertexId) -> bool {
            if self.cg[v] != self.ch[w] || self.g.multiplicity(v, v) != self.h.multiplicity(w, w) {
                return false;
            }
            self.order[..depth]
                .iter()
                .all(|&u| self.g.multiplicity(u, v) == self.h.multiplicity(self.map[u], w))
        }

        fn run(&mut self, depth: usize) -> bool {
            self.nodes += 1;
            if depth == self.order.len() {
                return true;
            }
            let v = self.order[depth];
            let candidates: Vec<VertexId> = match self.parent[v] {
                Some(p) => {
                    let mut c: Vec<VertexId> =
                        self.h.incidence(self.map[p]).iter().map(|i| i.other).collect();
                    c.sort_unstable();
                    c.dedup();
                    c
                }
                None => (0..self.h.vertex_count()).collect(),
            };
            for w in candidates {
                if self.used[w] || !self.fits(depth, v, w) {
                    continue;
                }
                self.map[v] = w;
                self.used[w] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.used[w] = false;
            }
            false
        }
    }
    let mut st = State {
        g,
        h,
        cg,
        ch,
        order,
        parent,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
    };
    let found = st.run(0);
    let nodes = st.nodes;
    if found {
        debug_assert!(verify_isomorphism(g, h, &st.map));
        Ok(IsoOutcome {
            bijection: Some(st.map),
            nodes,
        })
    } else {
        none(nodes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{i_graph, x_graph, IParams, XParams};

    fn cycle(n: usize) -> Multigraph {
        let edges: Vec<[usize; 2]> = (0..n).map(|i| [i, (i + 1) % n]).collect();
        Multigraph::from_edges(n, &edges).unwrap()
    }

    fn gp(n: usize, k: usize) -> Multigraph {
        i_graph(&IParams::new(n, 1, k).unwrap()).graph
    }

    #[test]
    fn hamiltonicity_examples() {
        assert!(brute_hamiltonian(&gp(5, 2)).unwrap().cycle.is_none());
        let c = brute_hamiltonian(&gp(7, 2)).unwrap().cycle.unwrap();
        assert!(verify_cycle(&gp(7, 2), &c));
        let c6 = cycle(6);
        assert!(verify_cycle(&c6, &brute_hamiltonian(&c6).unwrap().cycle.unwrap()));
    }

    #[test]
    fn verify_cycle_rejects_bad_sequences() {
        let g = gp(7, 2);
        let c = brute_hamiltonian(&g).unwrap().cycle.unwrap();
        assert!(!verify_cycle(&g, &c[1..]));
        // v_6 and u_0 are not adjacent.
        let in_order: Vec<usize> = (0..14).collect();
        assert!(!verify_cycle(&g, &in_order));
        let mut dup = c.clone();
        dup[1] = dup[0];
        assert!(!verify_cycle(&g, &dup));
    }

    #[test]
    fn size_guard_applies() {
        assert!(matches!(
            brute_hamiltonian_with_limit(&cycle(10), 5),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn two_factor_counts() {
        let k4 = Multigraph::from_edges(4, &[[0, 1], [2, 3], [0, 2], [0, 3], [1, 2], [1, 3]]).unwrap();
        assert_eq!(enumerate_two_factors(&k4).unwrap().len(), 3);
        assert_eq!(enumerate_two_factors(&gp(5, 2)).unwrap().len(), 6);
        let prism = i_graph(&IParams::new(3, 1, 1).unwrap()).graph;
        assert_eq!(enumerate_two_factors(&prism).unwrap().len(), 4);
    }

    #[test]
    fn isomorphism_examples() {
        let a = x_graph(&XParams::new(8, 1, 3).unwrap()).graph;
        let b = x_graph(&XParams::new(4, 2, 2).unwrap()).graph;
        let map = brute_isomorphic(&a, &b).unwrap().bijection.unwrap();
        assert!(verify_isomorphism(&a, &b, &map));
        let c = x_graph(&XParams::new(8, 1, 1).unwrap()).graph;
        assert!(brute_isomorphic(&a, &c).unwrap().bijection.is_none());
        assert!(brute_isomorphic(&cycle(5), &cycle(6)).unwrap().bijection.is_none());
        for (p, q) in [(2, 3), (3, 5)] {
            let g = i_graph(&IParams::new(12, p, q).unwrap()).graph;
            let h = i_graph(&IParams::new(12, 12 - p, q).unwrap()).graph;
            assert!(brute_isomorphic(&g, &h).unwrap().bijection.is_some());
        }
    }

    #[test]
    fn certificate_json_shape() {
        let c = Certificate::HamiltonianCycle { cycle: vec![0, 1, 2] };
        let json = serde_json::to_string(&c).unwrap();
        assert_eq!(json, r#"{"kind":"hamiltonian_cycle","payload":{"cycle":[0,1,2]}}"#);
        assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), c);
    }
}
