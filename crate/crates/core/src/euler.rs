//! Good Eulerian subgraphs of a quartic multigraph with a transition
//! system: admissibility, tour tracing, an exact backtracking search, and
//! the correspondence with 2-factors and Hamiltonian cycles of the cubic
//! source.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multigraph::{EdgeId, EdgeSubset, Multigraph, VertexId};
use crate::quotient::{Contraction, TransitionSystem};

type Slot = (EdgeId, u8);

/// A spanning subgraph with all degrees in {2, 4} whose 2-valent vertices
/// carry traversing transitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleSubgraph {
    pub edges: EdgeSubset,
    /// For each 2-valent vertex, the two edge ends it joins.
    pub two_valent: Vec<Option<[Slot; 2]>>,
}

/// A closed walk as `(edge, forward)` steps; `forward` means the edge is
/// walked from `endpoints[0]` to `endpoints[1]` (for a loop: leaving through
/// end 0).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodTour {
    pub steps: Vec<(EdgeId, bool)>,
}

impl GoodTour {
    fn departure(step: (EdgeId, bool)) -> Slot {
        (step.0, if step.1 { 0 } else { 1 })
    }

    fn arrival(step: (EdgeId, bool)) -> Slot {
        (step.0, if step.1 { 1 } else { 0 })
    }
}

fn slot_vertex(x: &Multigraph, slot: Slot) -> VertexId {
    x.endpoints(slot.0)[slot.1 as usize]
}

/// Validates admissibility and records the 2-valent transitions.
pub fn check_admissible(
    x: &Multigraph,
    ts: &TransitionSystem,
    edges: &EdgeSubset,
) -> Result<AdmissibleSubgraph> {
    if edges.host_len() != x.edge_count() {
        return Err(Error::SubsetLength {
            expected: x.edge_count(),
            got: edges.host_len(),
        });
    }
    let mut two_valent = vec![None; x.vertex_count()];
    for v in 0..x.vertex_count() {
        let slots: Vec<Slot> = x
            .incidence(v)
            .iter()
            .filter(|i| edges.contains(i.edge))
            .map(|i| (i.edge, i.end))
            .collect();
        match slots.len() {
            4 => {}
            2 => {
                if !ts.is_traversing(slots[0], slots[1]) {
                    return Err(Error::NotAdmissible(format!(
                        "2-valent vertex {v} has a non-traversing transition"
                    )));
                }
                two_valent[v] = Some([slots[0], slots[1]]);
            }
            d => {
                return Err(Error::NotAdmissible(format!("vertex {v} has degree {d}")));
            }
        }
    }
    Ok(AdmissibleSubgraph {
        edges: edges.clone(),
        two_valent,
    })
}

/// The end that continues the tour after arriving through `slot`.
fn partner(x: &Multigraph, ts: &TransitionSystem, w: &AdmissibleSubgraph, slot: Slot) -> Slot {
    let v = slot_vertex(x, slot);
    if let Some([a, b]) = w.two_valent[v] {
        return if a == slot { b } else { a };
    }
    let side = ts.side(slot.0, slot.1);
    x.incidence(v)
        .iter()
        .map(|i| (i.edge, i.end))
        .find(|&s| s != slot && ts.side(s.0, s.1) == side)
        .expect("4-valent vertex has a same-side partner")
}

/// Number of closed components of the transition-constrained walk
/// decomposition of `w`.
pub fn tour_components(x: &Multigraph, ts: &TransitionSystem, w: &AdmissibleSubgraph) -> usize {
    let mut seen = vec![false; x.edge_count()];
    let mut components = 0;
    for start in w.edges.iter() {
        if seen[start] {
            continue;
        }
        components += 1;
        trace(x, ts, w, start, |e| seen[e] = true);
    }
    components
}

/// Follows the component through `start` (walked forward first), reporting
/// each step; returns the steps.
fn trace(
    x: &Multigraph,
    ts: &TransitionSystem,
    w: &AdmissibleSubgraph,
    start: EdgeId,
    mut visit: impl FnMut(EdgeId),
) -> Vec<(EdgeId, bool)> {
    let mut steps = Vec::new();
    let mut step = (start, true);
    loop {
        visit(step.0);
        steps.push(step);
        let next = partner(x, ts, w, GoodTour::arrival(step));
        step = (next.0, next.1 == 0);
        if step == (start, true) {
            return steps;
        }
    }
}

/// The good tour of a single-component admissible subgraph, starting with
/// its lowest edge walked forward.
pub fn good_tour(x: &Multigraph, ts: &TransitionSystem, w: &AdmissibleSubgraph) -> Result<GoodTour> {
    let first = w
        .edges
        .iter()
        .next()
        .ok_or_else(|| Error::InvalidTour("empty subgraph".into()))?;
    let steps = trace(x, ts, w, first, |_| {});
    if steps.len() != w.edges.count() {
        return Err(Error::MultiComponentTour(tour_components(x, ts, w)));
    }
    Ok(GoodTour { steps })
}

/// Independent re-check of a tour against a subgraph: every edge of `edges`
/// exactly once, consecutive steps meet, and every transition is the
/// allowed one for the vertex's degree in `edges`.
pub fn check_good_tour(
    x: &Multigraph,
    ts: &TransitionSystem,
    edges: &EdgeSubset,
    tour: &GoodTour,
) -> Result<()> {
    if edges.host_len() != x.edge_count() {
        return Err(Error::SubsetLength {
            expected: x.edge_count(),
            got: edges.host_len(),
        });
    }
    let mut used = vec![false; x.edge_count()];
    for &(e, _) in &tour.steps {
        if e >= x.edge_count() || !edges.contains(e) {
            return Err(Error::InvalidTour(format!("edge {e} is not in the subgraph")));
        }
        if std::mem::replace(&mut used[e], true) {
            return Err(Error::InvalidTour(format!("edge {e} is used twice")));
        }
    }
    if tour.steps.len() != edges.count() {
        return Err(Error::InvalidTour(format!(
            "tour uses {} of {} edges",
            tour.steps.len(),
            edges.count()
        )));
    }
    for v in 0..x.vertex_count() {
        let d = x.degree_in(v, edges);
        if d != 2 && d != 4 {
            return Err(Error::InvalidTour(format!("vertex {v} has degree {d}")));
        }
    }
    let m = tour.steps.len();
    for i in 0..m {
        let arrive = GoodTour::arrival(tour.steps[i]);
        let depart = GoodTour::departure(tour.steps[(i + 1) % m]);
        let v = slot_vertex(x, arrive);
        if slot_vertex(x, depart) != v {
            return Err(Error::InvalidTour(format!(
                "step {i} ends at {v} but the next step starts elsewhere"
            )));
        }
        if arrive == depart {
            return Err(Error::InvalidTour(format!("step {i} reverses along its edge")));
        }
        let traversing = ts.is_traversing(arrive, depart);
        let four_valent = x.degree_in(v, edges) == 4;
        if traversing == four_valent {
            return Err(Error::InvalidTour(format!(
                "transition at vertex {v} after step {i} is not allowed"
            )));
        }
    }
    Ok(())
}

// ------------------------------------------------------------ exact search

/// Per-edge constraints and limits for [`search`].
#[derive(Debug, Clone, Default)]
pub struct SearchOptions {
    /// `Some(true)` forces an edge in, `Some(false)` forces it out.
    pub forced: Vec<Option<bool>>,
    /// Stop after this many search nodes.
    pub node_limit: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<(AdmissibleSubgraph, GoodTour)>,
    pub nodes: u64,
    /// False only when the node limit stopped the search.
    pub exhausted: bool,
}

const UNKNOWN: i8 = -1;
const OUT: i8 = 0;
const IN: i8 = 1;

/// Local configuration at a vertex: which of its four slots are in `W`.
type Config = [bool; 4];

struct Searcher<'a> {
    x: &'a Multigraph,
    ts: &'a TransitionSystem,
    slots: Vec<[Slot; 4]>,
    configs: Vec<Vec<Config>>,
    nodes: u64,
    node_limit: Option<u64>,
    stopped: bool,
}

enum Mode<'f> {
    Find {
        found: Option<EdgeSubset>,
        accept: Option<&'f dyn Fn(&EdgeSubset) -> bool>,
    },
    Enumerate(&'f mut dyn FnMut(&EdgeSubset)),
}

impl<'a> Searcher<'a> {
    fn new(x: &'a Multigraph, ts: &'a TransitionSystem) -> Result<Self> {
        let mut slots = Vec::with_capacity(x.vertex_count());
        let mut configs = Vec::with_capacity(x.vertex_count());
        for v in 0..x.vertex_count() {
            let inc = x.incidence(v);
            if inc.len() != 4 {
                return Err(Error::NotQuartic {
                    vertex: v,
                    degree: inc.len(),
                });
            }
            let s: [Slot; 4] = std::array::from_fn(|k| (inc[k].edge, inc[k].end));
            let side: Vec<u8> = s.iter().map(|&(e, end)| ts.side(e, end)).collect();
            let a: Vec<usize> = (0..4).filter(|&k| side[k] == 0).collect();
            let b: Vec<usize> = (0..4).filter(|&k| side[k] == 1).collect();
            let mut cs = vec![[true; 4]];
            for &i in &a {
                for &j in &b {
                    let mut c = [false; 4];
                    c[i] = true;
                    c[j] = true;
                    cs.push(c);
                }
            }
            // A loop's two slots must agree.
            cs.retain(|c| {
                (0..4).all(|i| (0..4).all(|j| s[i].0 != s[j].0 || c[i] == c[j]))
            });
            slots.push(s);
            configs.push(cs);
        }
        Ok(Self {
            x,
            ts,
            slots,
            configs,
            nodes: 0,
            node_limit: None,
            stopped: false,
        })
    }

    fn consistent(&self, v: VertexId, c: &Config, state: &[i8]) -> bool {
        (0..4).all(|k| {
            let s = state[self.slots[v][k].0];
            s == UNKNOWN || (s == IN) == c[k]
        })
    }

    /// Fixed point of local consistency; `None` on contradiction, else the
    /// determined configuration index per vertex.
    fn propagate(&self, state: &mut [i8]) -> Option<Vec<Option<usize>>> {
        loop {
            let mut changed = false;
            let mut determined = vec![None; self.x.vertex_count()];
            for v in 0..self.x.vertex_count() {
                let mut any = false;
                let mut agree_in = [true; 4];
                let mut agree_out = [true; 4];
                let mut only = None;
                let mut count = 0;
                for (ci, c) in self.configs[v].iter().enumerate() {
                    if !self.consistent(v, c, state) {
                        continue;
                    }
                    any = true;
                    count += 1;
                    only = Some(ci);
                    for k in 0..4 {
                        agree_in[k] &= c[k];
                        agree_out[k] &= !c[k];
                    }
                }
                if !any {
                    return None;
                }
                if count == 1 {
                    determined[v] = only;
                }
                for k in 0..4 {
                    let e = self.slots[v][k].0;
                    if state[e] == UNKNOWN && (agree_in[k] || agree_out[k]) {
                        state[e] = if agree_in[k] { IN } else { OUT };
                        changed = true;
                    }
                }
            }
            if !changed {
                return Some(determined);
            }
        }
    }

    fn partner_slot(&self, v: VertexId, config: &Config, slot: Slot) -> Slot {
        let s = &self.slots[v];
        let k = (0..4).find(|&k| s[k] == slot).expect("slot belongs to vertex");
        let degree = config.iter().filter(|&&b| b).count();
        let side = self.ts.side(slot.0, slot.1);
        (0..4)
            .filter(|&j| j != k && config[j])
            .map(|j| s[j])
            .find(|&o| degree == 2 || self.ts.side(o.0, o.1) == side)
            .expect("configuration pairs every in-slot")
    }

    /// Finds a closed strand of determined pairings; returns its edges.
    fn closed_strand(&self, state: &[i8], determined: &[Option<usize>]) -> Option<Vec<EdgeId>> {
        let mut seen = vec![false; self.x.edge_count()];
        for start in 0..self.x.edge_count() {
            if state[start] != IN || seen[start] {
                continue;
            }
            let mut edges = Vec::new();
            let mut step = (start, true);
            loop {
                seen[step.0] = true;
                edges.push(step.0);
                let arrive = GoodTour::arrival(step);
                let v = slot_vertex(self.x, arrive);
                let Some(ci) = determined[v] else { break };
                let next = self.partner_slot(v, &self.configs[v][ci], arrive);
                step = (next.0, next.1 == 0);
                if step == (start, true) {
                    return Some(edges);
                }
                if seen[step.0] {
                    break;
                }
            }
        }
        None
    }

    fn connected_without_out(&self, state: &[i8]) -> bool {
        let n = self.x.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for inc in self.x.incidence(v) {
                if state[inc.edge] != OUT && !seen[inc.other] {
                    seen[inc.other] = true;
                    count += 1;
                    stack.push(inc.other);
                }
            }
        }
        count == n
    }

    fn run(&mut self, mut state: Vec<i8>, mode: &mut Mode) {
        if self.stopped {
            return;
        }
        self.nodes += 1;
        if self.node_limit.is_some_and(|l| self.nodes > l) {
            self.stopped = true;
            return;
        }
        let find = matches!(mode, Mode::Find { .. });
        let mut determined = match self.propagate(&mut state) {
            Some(d) => d,
            None => return,
        };
        if find {
            if !self.connected_without_out(&state) {
                return;
            }
            if let Some(strand) = self.closed_strand(&state, &determined) {
                let mut on = vec![false; self.x.edge_count()];
                for e in strand {
                    on[e] = true;
                }
                for e in 0..self.x.edge_count() {
                    if !on[e] {
                        if state[e] == IN {
                            return;
                        }
                        state[e] = OUT;
                    }
                }
                determined = match self.propagate(&mut state) {
                    Some(d) => d,
                    None => return,
                };
            }
        }
        // Branch on the most constrained undetermined vertex.
        let mut best: Option<(usize, VertexId)> = None;
        for v in 0..self.x.vertex_count() {
            if determined[v].is_some() {
                continue;
            }
            let options = self.configs[v]
                .iter()
                .filter(|c| self.consistent(v, c, &state))
                .count();
            if best.map_or(true, |(o, _)| options < o) {
                best = Some((options, v));
            }
        }
        let Some((_, v)) = best else {
            let edges = EdgeSubset::from_bits(state.iter().map(|&s| s == IN).collect());
            match mode {
                Mode::Find { found, accept } => {
                    let w = check_admissible(self.x, self.ts, &edges)
                        .expect("search leaves are admissible");
                    if tour_components(self.x, self.ts, &w) == 1 && accept.map_or(true, |f| f(&edges)) {
                        *found = Some(edges);
                        self.stopped = true;
                    }
                }
                Mode::Enumerate(f) => f(&edges),
            }
            return;
        };
        for ci in 0..self.configs[v].len() {
            let c = self.configs[v][ci];
            if !self.consistent(v, &c, &state) {
                continue;
            }
            let mut next = state.clone();
            for k in 0..4 {
                next[self.slots[v][k].0] = if c[k] { IN } else { OUT };
            }
            self.run(next, mode);
            if self.stopped {
                return;
            }
        }
    }
}

fn initial_state(x: &Multigraph, forced: &[Option<bool>]) -> Result<Vec<i8>> {
    if !forced.is_empty() && forced.len() != x.edge_count() {
        return Err(Error::SubsetLength {
            expected: x.edge_count(),
            got: forced.len(),
        });
    }
    Ok((0..x.edge_count())
        .map(|e| match forced.get(e).copied().flatten() {
            None => UNKNOWN,
            Some(true) => IN,
            Some(false) => OUT,
        })
        .collect())
}

/// Exhaustive search for a good Eulerian subgraph under `options`.
pub fn search(x: &Multigraph, ts: &TransitionSystem, options: &SearchOptions) -> Result<SearchOutcome> {
    search_accepting(x, ts, options, None)
}

/// As [`search`], but only good subgraphs passing `accept` are returned.
pub fn search_accepting(
    x: &Multigraph,
    ts: &TransitionSystem,
    options: &SearchOptions,
    accept: Option<&dyn Fn(&EdgeSubset) -> bool>,
) -> Result<SearchOutcome> {
    let mut searcher = Searcher::new(x, ts)?;
    searcher.node_limit = options.node_limit;
    let state = initial_state(x, &options.forced)?;
    let mut mode = Mode::Find { found: None, accept };
    searcher.run(state, &mut mode);
    let Mode::Find { found, .. } = mode else { unreachable!() };
    let found = match found {
        Some(edges) => {
            let w = check_admissible(x, ts, &edges)?;
            let tour = good_tour(x, ts, &w)?;
            check_good_tour(x, ts, &w.edges, &tour)?;
            Some((w, tour))
        }
        None => None,
    };
    let exhausted = found.is_some() || searcher.node_limit.map_or(true, |l| searcher.nodes <= l);
    Ok(SearchOutcome {
        found,
        nodes: searcher.nodes,
        exhausted,
    })
}

pub fn find_good_eulerian(x: &Multigraph, ts: &TransitionSystem) -> Result<SearchOutcome> {
    search(x, ts, &SearchOptions::default())
}

/// Calls `visit` on every admissible subgraph (connected or not); returns
/// the number of search nodes.
pub fn enumerate_admissible(
    x: &Multigraph,
    ts: &TransitionSystem,
    mut visit: impl FnMut(&EdgeSubset),
) -> Result<u64> {
    let mut searcher = Searcher::new(x, ts)?;
    let state = initial_state(x, &[])?;
    let mut mode = Mode::Enumerate(&mut visit);
    searcher.run(state, &mut mode);
    Ok(searcher.nodes)
}

// ------------------------------------------- 2-factors and Hamiltonicity

/// Projects a 2-factor of the cubic source onto the quotient.
pub fn project_two_factor(c: &Contraction, t: &EdgeSubset) -> Result<AdmissibleSubgraph> {
    if t.host_len() != c.source.edge_count() {
        return Err(Error::SubsetLength {
            expected: c.source.edge_count(),
            got: t.host_len(),
        });
    }
    for v in 0..c.source.vertex_count() {
        let d = c.source.degree_in(v, t);
        if d != 2 {
            return Err(Error::NotTwoRegular { vertex: v, degree: d });
        }
    }
    let bits = c.edge_map.iter().map(|&e| t.contains(e)).collect();
    let ts = crate::quotient::classify_transitions(c);
    check_admissible(&c.quotient, &ts, &EdgeSubset::from_bits(bits))
}

/// Lifts a single-component good tour to a Hamiltonian cycle of the source,
/// as a vertex sequence.
pub fn lift_tour(c: &Contraction, w: &AdmissibleSubgraph, tour: &GoodTour) -> Result<Vec<VertexId>> {
    let ts = crate::quotient::classify_transitions(c);
    check_good_tour(&c.quotient, &ts, &w.edges, tour)?;
    let mut seq: Vec<VertexId> = Vec::with_capacity(c.source.vertex_count());
    for &(e, forward) in &tour.steps {
        let [a, b] = c.source.endpoints(c.edge_map[e]);
        let (from, to) = if forward { (a, b) } else { (b, a) };
        if seq.last() != Some(&from) {
            seq.push(from);
        }
        seq.push(to);
    }
    if seq.len() > 1 && seq.first() == seq.last() {
        seq.pop();
    }
    let mut seen = vec![false; c.source.vertex_count()];
    for &v in &seq {
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidTour(format!("lift revisits vertex {v}")));
        }
    }
    if seq.len() != c.source.vertex_count() {
        return Err(Error::InvalidTour(format!(
            "lift covers {} of {} vertices",
            seq.len(),
            c.source.vertex_count()
        )));
    }
    Ok(seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{i_graph, x_graph, CubicEdgeKind, IParams, XParams};
    use crate::quotient::{blue_red_coloring, classify_transitions, contract_factor, Coloring, Color};

    fn x_system(s: usize, t: usize, r: usize) -> (Multigraph, TransitionSystem) {
        let p = XParams::new(s, t, r).unwrap();
        let x = x_graph(&p).graph;
        let col = Coloring {
            colors: (0..x.edge_count())
                .map(|e| if p.is_blue(e) { Color::Blue } else { Color::Red })
                .collect(),
        };
        let ts = TransitionSystem::from_coloring(&x, &col).unwrap();
        (x, ts)
    }

    fn i_contraction(n: usize, p: usize, q: usize) -> Contraction {
        let l = i_graph(&IParams::new(n, p, q).unwrap());
        contract_factor(&l.graph, &l.subset_of(CubicEdgeKind::Spoke)).unwrap()
    }

    #[test]
    fn small_prop_cases_are_absent() {
        for s in [5, 11] {
            let (x, ts) = x_system(s, 1, 2);
            let out = find_good_eulerian(&x, &ts).unwrap();
            assert!(out.found.is_none());
            assert!(out.exhausted);
        }
    }

    #[test]
    fn witness_found_for_x543() {
        let (x, ts) = x_system(5, 4, 3);
        let out = find_good_eulerian(&x, &ts).unwrap();
        let (w, tour) = out.found.unwrap();
        check_good_tour(&x, &ts, &w.edges, &tour).unwrap();
    }

    #[test]
    fn full_quotient_components_count_y_cycles() {
        let c = i_contraction(5, 1, 2);
        let ts = classify_transitions(&c);
        let w = check_admissible(&c.quotient, &ts, &EdgeSubset::full(10)).unwrap();
        assert_eq!(tour_components(&c.quotient, &ts, &w), 2);
        let c = i_contraction(7, 1, 1);
        let ts = classify_transitions(&c);
        let w = check_admissible(&c.quotient, &ts, &EdgeSubset::full(14)).unwrap();
        assert_eq!(tour_components(&c.quotient, &ts, &w), 2);
    }

    #[test]
    fn lifted_tours_are_hamiltonian() {
        for (n, p, q, len) in [(7, 1, 2, 14), (12, 2, 3, 24)] {
            let c = i_contraction(n, p, q);
            let ts = classify_transitions(&c);
            let (w, tour) = find_good_eulerian(&c.quotient, &ts).unwrap().found.unwrap();
            let cycle = lift_tour(&c, &w, &tour).unwrap();
            assert_eq!(cycle.len(), len);
            for i in 0..len {
                assert!(c.source.multiplicity(cycle[i], cycle[(i + 1) % len]) > 0);
            }
        }
    }

    #[test]
    fn projection_of_factor_free_two_factor_is_everything() {
        let c = i_contraction(7, 2, 3);
        let t = c.factor.complement();
        let w = project_two_factor(&c, &t).unwrap();
        assert_eq!(w.edges.count(), c.quotient.edge_count());
        let col = blue_red_coloring(&c).unwrap();
        assert_eq!(col.colors.len(), 14);
    }

    #[test]
    fn tampered_tour_is_rejected() {
        let (x, ts) = x_system(5, 4, 3);
        let (w, mut tour) = find_good_eulerian(&x, &ts).unwrap().found.unwrap();
        tour.steps.swap(0, 1);
        assert!(check_good_tour(&x, &ts, &w.edges, &tour).is_err());
    }

    #[test]
    fn forced_edges_are_respected() {
        let (x, ts) = x_system(4, 3, 2);
        let p = XParams::new(4, 3, 2).unwrap();
        let forced = (0..x.edge_count())
            .map(|e| (p.edge_coords(e).0 == crate::families::XEdgeKind::Diagonal).then_some(false))
            .collect();
        let out = search(&x, &ts, &SearchOptions { forced, node_limit: None }).unwrap();
        if let Some((w, _)) = out.found {
            assert!((0..x.edge_count())
                .filter(|&e| p.edge_coords(e).0 == crate::families::XEdgeKind::Diagonal)
                .all(|e| !w.edges.contains(e)));
        }
    }
}
