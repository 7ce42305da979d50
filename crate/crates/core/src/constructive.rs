//! Good Eulerian subgraphs of `X(s,t,r)` built from a table of small base
//! witnesses by row and column expansions, grid isomorphisms, and (where no
//! construction applies) exact search.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::{check_admissible, check_good_tour, good_tour, GoodTour};
use crate::families::{x_graph, XEdgeKind, XParams};
use crate::iso::XIso;
use crate::multigraph::{EdgeId, EdgeSubset, Multigraph};
use crate::quotient::{Color, Coloring, TransitionSystem};

/// Red = horizontal, blue = vertical and diagonal.
pub fn fundamental_coloring(p: &XParams) -> Coloring {
    Coloring {
        colors: (0..p.edge_count())
            .map(|e| if p.is_blue(e) { Color::Blue } else { Color::Red })
            .collect(),
    }
}

/// Transition system of the fundamental 2-factorization.
pub fn fundamental_transitions(p: &XParams) -> TransitionSystem {
    let x = x_graph(p).graph;
    TransitionSystem::from_coloring(&x, &fundamental_coloring(p)).expect("fundamental colouring is valid")
}

/// How the diagonals of a witness sit relative to a column boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    /// No diagonal of the witness crosses the boundary.
    None,
    /// Every diagonal of the witness crosses it (and there is at least one).
    All,
    Mixed,
}

/// A good Eulerian subgraph of `X(s,t,r)` with its tour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridWitness {
    pub params: XParams,
    pub edges: EdgeSubset,
    pub tour: GoodTour,
}

impl GridWitness {
    /// Checks admissibility and single-component goodness, tracing the tour.
    pub fn from_edges(params: XParams, edges: EdgeSubset) -> Result<Self> {
        let x = x_graph(&params).graph;
        let ts = fundamental_transitions(&params);
        let w = check_admissible(&x, &ts, &edges)?;
        let tour = good_tour(&x, &ts, &w)?;
        check_good_tour(&x, &ts, &edges, &tour)?;
        Ok(Self { params, edges, tour })
    }

    pub fn from_ids(params: XParams, ids: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        Self::from_edges(params, EdgeSubset::from_ids(params.edge_count(), ids))
    }

    /// Independent re-check of the stored tour.
    pub fn check(&self) -> Result<()> {
        let x = x_graph(&self.params).graph;
        check_good_tour(&x, &fundamental_transitions(&self.params), &self.edges, &self.tour)
    }

    fn has(&self, kind: XEdgeKind, row: usize, col: usize) -> bool {
        self.edges.contains(self.params.edge_id(kind, row, col))
    }

    /// Whether the blue edge leaving `x^i_j` downwards (vertical, or the
    /// diagonal for `i = t-1`) is present.
    pub fn has_down(&self, i: usize, j: usize) -> bool {
        let kind = if i + 1 < self.params.t { XEdgeKind::Vertical } else { XEdgeKind::Diagonal };
        self.has(kind, i, j)
    }

    /// `|W ∩ V_i|`: blue edges between row `i` and the next row.
    pub fn row_count(&self, i: usize) -> usize {
        (0..self.params.s).filter(|&j| self.has_down(i, j)).count()
    }

    /// `|W ∩ H_j|`: horizontal edges between columns `j` and `j+1`.
    pub fn col_count(&self, j: usize) -> usize {
        (0..self.params.t).filter(|&i| self.has(XEdgeKind::Horizontal, i, j)).count()
    }

    pub fn diagonal_count(&self) -> usize {
        self.row_count(self.params.t - 1)
    }

    /// No diagonals: the same edge ids form a witness for every shift.
    pub fn is_diagonal_free(&self) -> bool {
        self.diagonal_count() == 0
    }

    /// A column boundary with no horizontal edge, if any.
    pub fn empty_column(&self) -> Option<usize> {
        (0..self.params.s).find(|&j| self.col_count(j) == 0)
    }

    /// A diagonal from column `c` crosses boundary `j` when `j` lies in the
    /// cyclic interval `[c, c+r)`.
    pub fn crossing(&self, j: usize) -> Crossing {
        let XParams { s, t, r } = self.params;
        let (mut yes, mut no) = (0, 0);
        for c in 0..s {
            if self.has(XEdgeKind::Diagonal, t - 1, c) {
                if (j + s - c) % s < r {
                    yes += 1;
                } else {
                    no += 1;
                }
            }
        }
        match (yes, no) {
            (0, _) => Crossing::None,
            (_, 0) => Crossing::All,
            _ => Crossing::Mixed,
        }
    }

    /// Reinterprets a diagonal-free witness in `X(s,t,r)`.
    pub fn with_shift(&self, r: usize) -> Result<Self> {
        if !self.is_diagonal_free() {
            return Err(Error::Expansion("only diagonal-free witnesses change shift".into()));
        }
        let params = XParams::new(self.params.s, self.params.t, r)?;
        Ok(Self {
            params,
            edges: self.edges.clone(),
            tour: self.tour.clone(),
        })
    }

    /// Image under a grid isomorphism (the tour is re-traced).
    pub fn transport(&self, iso: &XIso) -> Result<Self> {
        if iso.from != self.params {
            return Err(Error::InvalidParams(format!("isomorphism starts at {}, witness is in {}", iso.from, self.params)));
        }
        let m = iso.edge_map();
        Self::from_ids(iso.to, self.edges.iter().map(|e| m[e]))
    }

    pub fn mirrored(&self) -> Result<Self> {
        self.transport(&crate::iso::mirror_iso(&self.params))
    }

    /// Transposes a diagonal-free witness with an empty column into
    /// `X(t,s,r)`; rows become columns.
    pub fn transposed_open(&self, r: usize) -> Result<Self> {
        let XParams { s, t, .. } = self.params;
        let j0 = self
            .empty_column()
            .filter(|_| self.is_diagonal_free())
            .ok_or_else(|| Error::Expansion("transposition needs no diagonals and an empty column".into()))?;
        let to = XParams::new(t, s, r)?;
        let shift = s - 1 - j0;
        let ids = self.edges.iter().map(|e| {
            let (kind, i, j) = self.params.edge_coords(e);
            let j = (j + shift) % s;
            match kind {
                XEdgeKind::Horizontal => to.edge_id(XEdgeKind::Vertical, j, i),
                _ => to.edge_id(XEdgeKind::Horizontal, j, i),
            }
        });
        Self::from_ids(to, ids.collect::<Vec<_>>())
    }

    /// Vertex sequence of the tour.
    pub fn tour_vertices(&self) -> Vec<(usize, usize)> {
        let x = x_graph(&self.params).graph;
        self.tour
            .steps
            .iter()
            .map(|&(e, fwd)| self.params.coords(x.endpoints(e)[if fwd { 0 } else { 1 }]))
            .collect()
    }
}

/// `count ∈ {m-1, m-2}` with `m-2 > 0`; for `m = 3` only `2` is allowed.
fn count_allows(count: usize, m: usize) -> bool {
    if m == 3 {
        count == 2
    } else {
        count + 1 == m || (m > 2 && count + 2 == m)
    }
}

/// Count condition for expanding across row boundary `i`.
pub fn can_expand_vertical(w: &GridWitness, i: usize) -> bool {
    i < w.params.t && count_allows(w.row_count(i), w.params.s)
}

/// Count condition for expanding across column boundary `j`.
pub fn can_expand_horizontal(w: &GridWitness, j: usize) -> bool {
    j < w.params.s && count_allows(w.col_count(j), w.params.t)
}

/// Splits positions `0..present.len()` into runs of consecutive positions
/// (cyclically when `cyclic`), each holding exactly one absent position at
/// one of its ends and at least one present position. Each run is listed
/// from its absent end.
pub fn partition_runs(present: &[bool], cyclic: bool) -> Option<Vec<Vec<usize>>> {
    let m = present.len();
    let missing: Vec<usize> = (0..m).filter(|&k| !present[k]).collect();
    let k = missing.len();
    if k == 0 || k > 16 {
        return None;
    }
    // gaps[a] = present positions strictly between missing[a] and the next one.
    let gap = |a: usize| -> Vec<usize> {
        let from = missing[a];
        if a + 1 < k {
            (from + 1..missing[a + 1]).collect()
        } else if cyclic {
            (1..m).map(|d| (from + d) % m).take_while(|&c| c != missing[0]).collect()
        } else {
            (from + 1..m).collect()
        }
    };
    let head: Vec<usize> = if cyclic { Vec::new() } else { (0..missing[0]).collect() };
    let gaps: Vec<Vec<usize>> = (0..k).map(gap).collect();
    'dirs: for mask in 0u32..(1 << k) {
        // bit set: run extends to the right of its absent position.
        let right = |a: usize| mask >> a & 1 == 1;
        let mut runs: Vec<Vec<usize>> = missing.iter().map(|&c| vec![c]).collect();
        if !head.is_empty() {
            if right(0) {
                continue;
            }
            runs[0].extend(head.iter().rev());
        }
        for a in 0..k {
            let g = &gaps[a];
            let next = if a + 1 < k {
                Some(a + 1)
            } else if cyclic {
                Some(0)
            } else {
                None
            };
            let left_next = next.is_some_and(|b| !right(b));
            match (right(a), left_next) {
                (false, false) => {
                    if !g.is_empty() {
                        continue 'dirs;
                    }
                }
                (true, false) => runs[a].extend(g.iter()),
                (false, true) => runs[next.unwrap()].extend(g.iter().rev()),
                (true, true) => {
                    if g.len() < 2 {
                        continue 'dirs;
                    }
                    let (mine, theirs) = g.split_at(g.len() - 1);
                    runs[a].extend(mine.iter());
                    runs[next.unwrap()].extend(theirs.iter().rev());
                }
            }
        }
        if runs.iter().all(|r| r.len() >= 2) {
            return Some(runs);
        }
    }
    None
}

fn row_plan(w: &GridWitness, i: usize) -> Option<Vec<Vec<usize>>> {
    let present: Vec<bool> = (0..w.params.s).map(|j| w.has_down(i, j)).collect();
    partition_runs(&present, true)
}

/// Shift after expanding across column `j`, given the crossing status.
fn expanded_shift(w: &GridWitness, j: usize) -> Option<usize> {
    match w.crossing(j) {
        Crossing::None => Some(w.params.r),
        Crossing::All => Some(w.params.r + 2),
        Crossing::Mixed => None,
    }
}

/// Runs of rows for a column expansion, and whether they wrap.
fn col_plan(w: &GridWitness, j: usize) -> Option<(Vec<Vec<usize>>, bool)> {
    let r2 = expanded_shift(w, j)?;
    let present: Vec<bool> = (0..w.params.t).map(|i| w.has(XEdgeKind::Horizontal, i, j)).collect();
    // New columns may wrap from the last row to row 0 only if the new
    // diagonals are vertical; wrapping is avoided when possible so that
    // diagonal-free witnesses stay diagonal-free.
    partition_runs(&present, false)
        .map(|runs| (runs, false))
        .or_else(|| if r2 == 0 { partition_runs(&present, true).map(|runs| (runs, true)) } else { None })
}

/// Whether [`expand_vertical`] applies at `i`.
pub fn vertical_site(w: &GridWitness, i: usize) -> bool {
    can_expand_vertical(w, i) && row_plan(w, i).is_some()
}

/// Whether [`expand_horizontal`] applies at `j` with the given crossing.
pub fn horizontal_site(w: &GridWitness, j: usize, crossing: Crossing) -> bool {
    can_expand_horizontal(w, j)
        && w.crossing(j) == crossing
        && (crossing == Crossing::None || w.params.r + 2 < w.params.s + 2)
        && col_plan(w, j).is_some()
}

/// Inserts two rows after row `i` (after the last row: the diagonals are
/// subdivided), giving a witness in `X(s,t+2,r)`.
pub fn expand_vertical(w: &GridWitness, i: usize) -> Result<GridWitness> {
    let XParams { s, t, r } = w.params;
    if !can_expand_vertical(w, i) {
        return Err(Error::Expansion(format!("row {i} of {} fails the count condition", w.params)));
    }
    let runs = row_plan(w, i).ok_or_else(|| Error::Expansion(format!("row {i} of {} has no run partition", w.params)))?;
    let to = XParams::new(s, t + 2, r)?;
    let row = |a: usize| if a <= i { a } else { a + 2 };
    let mut ids = Vec::new();
    for e in w.edges.iter() {
        let (kind, a, c) = w.params.edge_coords(e);
        match kind {
            XEdgeKind::Horizontal => ids.push(to.edge_id(kind, row(a), c)),
            _ if a == i => {}
            XEdgeKind::Vertical => ids.push(to.edge_id(kind, row(a), c)),
            XEdgeKind::Diagonal => ids.push(to.edge_id(kind, t + 1, c)),
        }
    }
    let lower = if i + 1 < t { XEdgeKind::Vertical } else { XEdgeKind::Diagonal };
    for run in &runs {
        let last = *run.last().unwrap();
        for &c in run {
            if w.has_down(i, c) {
                ids.push(to.edge_id(XEdgeKind::Vertical, i, c));
                ids.push(to.edge_id(lower, i + 2, c));
            }
            if c != last {
                ids.push(to.edge_id(XEdgeKind::Vertical, i + 1, c));
            }
        }
        for pair in run.windows(2) {
            let left = if (pair[0] + 1) % s == pair[1] { pair[0] } else { pair[1] };
            ids.push(to.edge_id(XEdgeKind::Horizontal, i + 1, left));
            ids.push(to.edge_id(XEdgeKind::Horizontal, i + 2, left));
        }
    }
    GridWitness::from_ids(to, ids)
}

/// Inserts two columns after column `j`, giving a witness in `X(s+2,t,r)`,
/// or `X(s+2,t,r+2)` when every diagonal crosses `j`.
pub fn expand_horizontal(w: &GridWitness, j: usize) -> Result<GridWitness> {
    let XParams { s, t, r } = w.params;
    if !can_expand_horizontal(w, j) {
        return Err(Error::Expansion(format!("column {j} of {} fails the count condition", w.params)));
    }
    let r2 = expanded_shift(w, j).ok_or_else(|| Error::Expansion(format!("diagonals of {} cross column {j} partially", w.params)))?;
    let (runs, wraps) = col_plan(w, j).ok_or_else(|| Error::Expansion(format!("column {j} of {} has no run partition", w.params)))?;
    let to = XParams::new(s + 2, t, r2)?;
    let col = |c: usize| if c <= j { c } else { c + 2 };
    let mut ids = Vec::new();
    for e in w.edges.iter() {
        let (kind, a, c) = w.params.edge_coords(e);
        if kind == XEdgeKind::Horizontal && c == j {
            continue;
        }
        if kind == XEdgeKind::Diagonal && to.vertex(0, col(c) + r2) != to.vertex(0, col((c + r) % s)) {
            return Err(Error::Expansion(format!("diagonal at column {c} is not preserved")));
        }
        ids.push(to.edge_id(kind, a, col(c)));
    }
    for run in &runs {
        let last = *run.last().unwrap();
        for &a in run {
            if w.has(XEdgeKind::Horizontal, a, j) {
                ids.push(to.edge_id(XEdgeKind::Horizontal, a, j));
                ids.push(to.edge_id(XEdgeKind::Horizontal, a, j + 2));
            }
            if a != last {
                ids.push(to.edge_id(XEdgeKind::Horizontal, a, j + 1));
            }
        }
        for pair in run.windows(2) {
            let upper = if !wraps || pair[0].abs_diff(pair[1]) == 1 {
                pair[0].min(pair[1])
            } else {
                pair[0].max(pair[1])
            };
            let kind = if upper + 1 < t { XEdgeKind::Vertical } else { XEdgeKind::Diagonal };
            ids.push(to.edge_id(kind, upper, j + 1));
            ids.push(to.edge_id(kind, upper, j + 2));
        }
    }
    GridWitness::from_ids(to, ids)
}

/// First boundary where a vertical expansion applies.
pub fn first_vertical_site(w: &GridWitness) -> Option<usize> {
    (0..w.params.t).find(|&i| vertical_site(w, i))
}

/// First boundary where a horizontal expansion with `crossing` applies.
pub fn first_horizontal_site(w: &GridWitness, crossing: Crossing) -> Option<usize> {
    (0..w.params.s).find(|&j| horizontal_site(w, j, crossing))
}

// ------------------------------------------------------------ operations

/// One step of a construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expansion {
    /// Two rows inserted (`t += 2`).
    Rows,
    /// Two columns inserted, shift kept (`s += 2`).
    Columns,
    /// Two columns inserted across every diagonal (`s += 2`, `r += 2`).
    ColumnsCrossing,
}

/// Applies one expansion at its first admissible site.
pub fn expand_once(w: &GridWitness, op: Expansion) -> Result<GridWitness> {
    let missing = || Error::Expansion(format!("{} has no site for {op:?}", w.params));
    match op {
        Expansion::Rows => expand_vertical(w, first_vertical_site(w).ok_or_else(missing)?),
        Expansion::Columns => expand_horizontal(w, first_horizontal_site(w, Crossing::None).ok_or_else(missing)?),
        Expansion::ColumnsCrossing => expand_horizontal(w, first_horizontal_site(w, Crossing::All).ok_or_else(missing)?),
    }
}

/// Applies expansions in order.
pub fn expand_all(w: &GridWitness, ops: &[Expansion]) -> Result<GridWitness> {
    let mut cur = w.clone();
    for &op in ops {
        cur = expand_once(&cur, op)?;
    }
    Ok(cur)
}

/// The six block orders of `rows` row expansions, `cols` plain and
/// `crossing` crossing column expansions.
pub fn block_orders(rows: usize, cols: usize, crossing: usize) -> Vec<Vec<Expansion>> {
    let blocks = [(Expansion::Rows, rows), (Expansion::Columns, cols), (Expansion::ColumnsCrossing, crossing)];
    let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
    let mut out: Vec<Vec<Expansion>> = Vec::new();
    for perm in perms {
        let seq: Vec<Expansion> = perm
            .iter()
            .flat_map(|&k| std::iter::repeat_n(blocks[k].0, blocks[k].1))
            .collect();
        if !out.contains(&seq) {
            out.push(seq);
        }
    }
    out
}

// ------------------------------------------------------------ base table

/// Which edges a base witness may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseVariant {
    /// Any edges (`W`).
    Full,
    /// No diagonals (`W'`); valid for every shift.
    NoDiagonals,
    /// No diagonals and no edge of the last horizontal column (`W''`).
    OpenColumn,
}

/// A base witness: parameters, variant, and the expansions it must support
/// (each once, and each type twice in a row).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseSpec {
    pub name: &'static str,
    pub params: XParams,
    pub variant: BaseVariant,
    pub needs: &'static [Expansion],
}

const fn x(s: usize, t: usize, r: usize) -> XParams {
    XParams { s, t, r }
}

use Expansion::{Columns as C, ColumnsCrossing as K, Rows as R};

/// The base table, in preference order.
pub const BASE_TABLE: &[BaseSpec] = &[
    BaseSpec { name: "W(3,3,0)", params: x(3, 3, 0), variant: BaseVariant::Full, needs: &[C, R] },
    BaseSpec { name: "W(4,3,0)", params: x(4, 3, 0), variant: BaseVariant::Full, needs: &[R] },
    BaseSpec { name: "W(6,3,0)", params: x(6, 3, 0), variant: BaseVariant::Full, needs: &[] },
    BaseSpec { name: "W(4,3,2)", params: x(4, 3, 2), variant: BaseVariant::Full, needs: &[C, K] },
    BaseSpec { name: "W(6,3,3)", params: x(6, 3, 3), variant: BaseVariant::Full, needs: &[] },
    BaseSpec { name: "W(8,3,3)", params: x(8, 3, 3), variant: BaseVariant::Full, needs: &[C] },
    BaseSpec { name: "W(10,3,5)", params: x(10, 3, 5), variant: BaseVariant::Full, needs: &[C, K] },
    BaseSpec { name: "W(5,3,2)", params: x(5, 3, 2), variant: BaseVariant::Full, needs: &[C] },
    BaseSpec { name: "W(9,3,4)", params: x(9, 3, 4), variant: BaseVariant::Full, needs: &[C] },
    BaseSpec { name: "W(13,3,6)", params: x(13, 3, 6), variant: BaseVariant::Full, needs: &[C] },
    BaseSpec { name: "W(7,3,3)", params: x(7, 3, 3), variant: BaseVariant::Full, needs: &[C] },
    BaseSpec { name: "W'(2,2)", params: x(2, 2, 0), variant: BaseVariant::NoDiagonals, needs: &[C] },
    BaseSpec { name: "W''(4,4)", params: x(4, 4, 0), variant: BaseVariant::OpenColumn, needs: &[C] },
    BaseSpec { name: "W'(6,6)", params: x(6, 6, 0), variant: BaseVariant::NoDiagonals, needs: &[C] },
    BaseSpec { name: "W''(6,8)", params: x(6, 8, 0), variant: BaseVariant::OpenColumn, needs: &[R, C] },
    BaseSpec { name: "W'(6,5)", params: x(6, 5, 0), variant: BaseVariant::NoDiagonals, needs: &[R, C] },
    BaseSpec { name: "W(7,5,3)", params: x(7, 5, 3), variant: BaseVariant::Full, needs: &[C, R, K] },
    BaseSpec { name: "W(5,4,3)", params: x(5, 4, 3), variant: BaseVariant::Full, needs: &[C, K] },
];

/// Whether `w` supports every expansion in `needs`: each type twice in a
/// row, and all types together in some block order.
pub fn supports(w: &GridWitness, needs: &[Expansion]) -> bool {
    let count = |op| needs.iter().filter(|&&o| o == op).count();
    let twice = |op| expand_all(w, &[op, op]).is_ok();
    if !needs.iter().all(|&op| twice(op)) {
        return false;
    }
    let (r, c, k) = (count(R).min(1), count(C).min(1), count(K).min(1));
    r + c + k <= 1 || block_orders(r, c, k).iter().any(|ops| expand_all(w, ops).is_ok())
}

/// Regenerates a base witness by exact search restricted to its variant,
/// returning the first one (in search order) that supports its expansions.
pub fn generate_base(spec: &BaseSpec) -> Result<GridWitness> {
    let p = spec.params;
    let g = x_graph(&p).graph;
    let ts = fundamental_transitions(&p);
    let mut forced = vec![None; p.edge_count()];
    if spec.variant != BaseVariant::Full {
        for j in 0..p.s {
            forced[p.edge_id(XEdgeKind::Diagonal, p.t - 1, j)] = Some(false);
        }
    }
    if spec.variant == BaseVariant::OpenColumn {
        for i in 0..p.t {
            forced[p.edge_id(XEdgeKind::Horizontal, i, p.s - 1)] = Some(false);
        }
    }
    let accept = |e: &EdgeSubset| {
        GridWitness::from_edges(p, e.clone()).is_ok_and(|w| supports(&w, spec.needs))
    };
    let options = crate::euler::SearchOptions { forced, node_limit: None };
    let out = crate::euler::search_accepting(&g, &ts, &options, Some(&accept))?;
    let (w, _) = out
        .found
        .ok_or_else(|| Error::Expansion(format!("no good subgraph of {p} supports {:?}", spec.needs)))?;
    GridWitness::from_edges(p, w.edges)
}

/// Serialized base witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoredWitness {
    pub name: String,
    pub s: usize,
    pub t: usize,
    pub r: usize,
    pub variant: BaseVariant,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseFile {
    pub note: String,
    pub witnesses: Vec<StoredWitness>,
}

/// Regenerates the whole table (the `W(5,4,3)` entry is the corrected
/// published tour).
pub fn generate_base_file() -> Result<BaseFile> {
    let mut witnesses = Vec::new();
    for spec in BASE_TABLE {
        let w = if spec.params == x(5, 4, 3) { published_witness_5_4_3() } else { generate_base(spec)? };
        witnesses.push(StoredWitness {
            name: spec.name.to_string(),
            s: spec.params.s,
            t: spec.params.t,
            r: spec.params.r,
            variant: spec.variant,
            edges: w.edges.to_ids(),
        });
    }
    Ok(BaseFile {
        note: "Generated by exact search restricted to each variant; the first witness in search order that supports the listed expansions. W(5,4,3) is the corrected published tour.".into(),
        witnesses,
    })
}

static BASES: std::sync::LazyLock<Vec<(BaseSpec, GridWitness)>> = std::sync::LazyLock::new(|| {
    let file: BaseFile = serde_json::from_str(include_str!("../data/base_witnesses.json")).expect("base table parses");
    BASE_TABLE
        .iter()
        .map(|spec| {
            let sw = file
                .witnesses
                .iter()
                .find(|w| w.name == spec.name)
                .expect("every base is stored");
            let w = GridWitness::from_ids(spec.params, sw.edges.iter().copied()).expect("stored base is good");
            (*spec, w)
        })
        .collect()
});

/// The frozen base table with its checked witnesses.
pub fn bases() -> &'static [(BaseSpec, GridWitness)] {
    &BASES
}

/// A base witness for exactly `p` (diagonal-free bases serve every shift).
pub fn base_witness(p: &XParams) -> Option<GridWitness> {
    bases().iter().find_map(|(spec, w)| {
        if spec.params == *p {
            Some(w.clone())
        } else if spec.variant != BaseVariant::Full && spec.params.s == p.s && spec.params.t == p.t {
            w.with_shift(p.r).ok()
        } else {
            None
        }
    })
}

/// Joins two witnesses with `r = 0` and equal `t` side by side: each is cut
/// open at a column boundary and the two are glued along boundaries with the
/// same set of rows. The first gluing that stays good is returned.
pub fn concatenate(a: &GridWitness, b: &GridWitness) -> Result<GridWitness> {
    let (pa, pb) = (a.params, b.params);
    if pa.t != pb.t || pa.r != 0 || pb.r != 0 {
        return Err(Error::Expansion(format!("cannot concatenate {pa} and {pb}")));
    }
    let t = pa.t;
    let to = XParams::new(pa.s + pb.s, t, 0)?;
    let pattern = |w: &GridWitness, j: usize| -> Vec<bool> {
        (0..t).map(|i| w.has(XEdgeKind::Horizontal, i, j)).collect()
    };
    for ja in 0..pa.s {
        for jb in 0..pb.s {
            if pattern(a, ja) != pattern(b, jb) {
                continue;
            }
            let mut ids = Vec::new();
            for (w, cut, offset) in [(a, ja, 0), (b, jb, pa.s)] {
                let sw = w.params.s;
                for e in w.edges.iter() {
                    let (kind, i, c) = w.params.edge_coords(e);
                    ids.push(to.edge_id(kind, i, offset + (c + sw - cut - 1) % sw));
                }
            }
            if let Ok(w) = GridWitness::from_ids(to, ids) {
                return Ok(w);
            }
        }
    }
    Err(Error::Expansion(format!("no good gluing of {pa} and {pb}")))
}

// ------------------------------------------------------------ dispatcher

/// How a witness was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// A stored base witness, possibly transformed.
    Base,
    /// Base witnesses, expansions, concatenation and grid isomorphisms.
    Constructed,
    /// Exact search on the target grid.
    ExactSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub method: Method,
    /// Human-readable steps, in order.
    pub steps: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub witness: GridWitness,
    pub provenance: Provenance,
}

/// Listed grids without a good Eulerian subgraph: `s = 1`; `t = 1, r = 0`;
/// `s = 2` with `(t odd, r = 0)` or `(t > 2 even, r = 1)`; `s` odd with
/// `(t,r) = (2,0)`; and `X(s,1,r)` with `s ≡ 5 (mod 6)` and
/// `r ∈ {2, s-2, (s±1)/2}`.
pub fn is_listed_absent(p: &XParams) -> bool {
    let XParams { s, t, r } = *p;
    s == 1
        || (t == 1 && r == 0)
        || (s == 2 && ((t % 2 == 1 && r == 0) || (t > 2 && t % 2 == 0 && r == 1)))
        || (s % 2 == 1 && t == 2 && r == 0)
        || (t == 1 && s % 6 == 5 && (r == 2 || r + 2 == s || 2 * r == s + 1 || 2 * r + 1 == s))
}

/// Whether some grid isomorphic to `p` (by reflections, swaps and the
/// exceptional pairs) is listed absent.
pub fn is_absent(p: &XParams) -> bool {
    crate::iso::adam_orbit(p).keys().any(|q| {
        is_listed_absent(q) || crate::iso::exceptional_partners(q).iter().any(is_listed_absent)
    })
}

/// Total search-node budget for the exact fallback of [`construct_witness`].
pub const DEFAULT_MAX_SEARCH_NODES: u64 = 20_000_000;
pub const SEARCH_NODES_VAR: &str = "HAMCUBIC_MAX_SEARCH_NODES";

pub fn search_node_budget() -> u64 {
    std::env::var(SEARCH_NODES_VAR)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_SEARCH_NODES)
}

/// Exact search over the grids of an orbit, round-robin with doubling node
/// limits (restarting on an isomorphic grid sidesteps unlucky branching).
fn exact_in_orbit(p: &XParams, orbit: &[(XParams, XIso)]) -> Result<(GridWitness, Vec<String>)> {
    let budget = search_node_budget();
    let mut spent = 0u64;
    let mut limit = 1000u64;
    loop {
        for (q, iso) in orbit {
            let g = x_graph(q).graph;
            let options = crate::euler::SearchOptions { forced: Vec::new(), node_limit: Some(limit) };
            let out = crate::euler::search(&g, &fundamental_transitions(q), &options)?;
            spent += out.nodes;
            if let Some((w, _)) = out.found {
                let mut steps = vec![format!("exact search on {q}, {} nodes", out.nodes)];
                let mut witness = GridWitness::from_edges(*q, w.edges)?;
                if q != p {
                    witness = witness.transport(&iso.inverse())?;
                    steps.push(format!("isomorphism {q} -> {p}"));
                }
                return Ok((witness, steps));
            }
            if out.exhausted {
                return Err(Error::Expansion(format!("{q} has no good subgraph but is not listed as absent")));
            }
            if spent >= budget {
                return Err(Error::SizeGuard { what: "exact search nodes", size: spent as usize, limit: budget as usize });
            }
        }
        limit = limit.saturating_mul(2);
    }
}

/// A starting witness with the steps that produced it.
#[derive(Clone)]
struct Start {
    witness: GridWitness,
    /// Diagonal-free with a shift that may still be chosen freely.
    free_shift: bool,
    steps: Vec<String>,
    table_index: usize,
}

fn starts() -> Vec<Start> {
    let mut out = Vec::new();
    for (idx, (spec, w)) in bases().iter().enumerate() {
        let free = spec.variant != BaseVariant::Full;
        let base = format!("base {}", spec.name);
        let mut push = |witness: GridWitness, free_shift: bool, extra: Option<&str>| {
            let mut steps = vec![base.clone()];
            steps.extend(extra.map(str::to_string));
            out.push(Start { witness, free_shift, steps, table_index: idx });
        };
        push(w.clone(), free, None);
        if !free && w.params.r != 0 {
            if let Ok(m) = w.mirrored() {
                push(m, false, Some("mirror"));
            }
        }
        if spec.variant == BaseVariant::OpenColumn {
            if let Ok(tw) = w.transposed_open(0) {
                push(tw, true, Some("transpose"));
            }
        }
        let zero = if free { w.with_shift(0).ok() } else { (w.params.r == 0).then(|| w.clone()) };
        if let Some(z) = zero {
            if let Ok(tw) = z.transport(&crate::iso::swap_iso(&z.params)) {
                if tw.params.r == 0 && tw.params.t == z.params.s {
                    push(tw, false, Some("transpose"));
                }
            }
        }
    }
    out
}

static STARTS: std::sync::LazyLock<Vec<Start>> = std::sync::LazyLock::new(starts);

/// Expansion counts `(rows, columns, crossing)` taking `from` to `to`.
fn expansion_counts(from: &XParams, free_shift: bool, to: &XParams) -> Option<(usize, usize, usize)> {
    if to.s < from.s || to.t < from.t || (to.s - from.s) % 2 == 1 || (to.t - from.t) % 2 == 1 {
        return None;
    }
    let (rows, cols) = ((to.t - from.t) / 2, (to.s - from.s) / 2);
    if free_shift {
        return Some((rows, cols, 0));
    }
    if to.r < from.r || (to.r - from.r) % 2 == 1 {
        return None;
    }
    let crossing = (to.r - from.r) / 2;
    (crossing <= cols && (crossing == 0 || from.r != 0)).then(|| (rows, cols - crossing, crossing))
}

fn run_plan(start: &Start, target: &XParams, counts: (usize, usize, usize)) -> Option<(GridWitness, Vec<String>)> {
    for ops in block_orders(counts.0, counts.1, counts.2) {
        let mut w = start.witness.clone();
        let mut steps = start.steps.clone();
        let mut ok = true;
        for &op in &ops {
            let site = match op {
                Expansion::Rows => first_vertical_site(&w),
                Expansion::Columns => first_horizontal_site(&w, Crossing::None),
                Expansion::ColumnsCrossing => first_horizontal_site(&w, Crossing::All),
            };
            let next = site.and_then(|k| {
                let r = if op == Expansion::Rows { expand_vertical(&w, k) } else { expand_horizontal(&w, k) };
                r.ok().map(|n| (k, n))
            });
            match next {
                Some((k, n)) => {
                    steps.push(match op {
                        Expansion::Rows => format!("rows after row {k}"),
                        Expansion::Columns => format!("columns after column {k}"),
                        Expansion::ColumnsCrossing => format!("crossing columns after column {k}"),
                    });
                    w = n;
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if start.free_shift && w.params.r != target.r {
            w = w.with_shift(target.r).ok()?;
            steps.push(format!("shift {}", target.r));
        }
        if w.params == *target {
            return Some((w, steps));
        }
    }
    None
}

/// `W(s,3,0)` for even `s ≥ 8` by gluing copies of `W(4,3,0)` onto
/// `W(4,3,0)` or `W(6,3,0)`.
fn concatenated(target: &XParams) -> Option<(GridWitness, Vec<String>)> {
    if target.t != 3 || target.r != 0 || target.s % 2 == 1 || target.s < 8 {
        return None;
    }
    let w4 = base_witness(&x(4, 3, 0))?;
    let (mut w, mut steps) = if target.s % 4 == 0 {
        (w4.clone(), vec!["base W(4,3,0)".to_string()])
    } else {
        (base_witness(&x(6, 3, 0))?, vec!["base W(6,3,0)".to_string()])
    };
    while w.params.s < target.s {
        w = concatenate(&w, &w4).ok()?;
        steps.push("glue W(4,3,0)".into());
    }
    Some((w, steps))
}

/// Constructive routes into `target` itself (no isomorphism).
fn direct_candidates(target: &XParams) -> Vec<(usize, usize, usize, (usize, usize, usize))> {
    let mut out = Vec::new();
    for (k, st) in STARTS.iter().enumerate() {
        let from = st.witness.params;
        if let Some(counts) = expansion_counts(&from, st.free_shift, target) {
            let cost = target.s - from.s + target.t - from.t;
            out.push((cost, st.table_index, k, counts));
        }
    }
    out.sort();
    out
}

fn construct_direct(target: &XParams) -> Option<(GridWitness, Vec<String>)> {
    for (_, _, k, counts) in direct_candidates(target) {
        if let Some(found) = run_plan(&STARTS[k], target, counts) {
            return Some(found);
        }
    }
    concatenated(target)
}

/// A checked witness for `p`, or `None` when `p` has none. Construction
/// tries base witnesses with expansions on `p` and then on each grid of its
/// reflection/swap orbit (transporting the result back); only when all of
/// these fail is exact search used, within [`search_node_budget`] nodes.
pub fn construct_witness(p: &XParams) -> Result<Option<Construction>> {
    if is_absent(p) {
        return Ok(None);
    }
    let done = |witness: GridWitness, steps: Vec<String>| {
        witness.check()?;
        let method = if steps.len() == 1 { Method::Base } else { Method::Constructed };
        Ok(Some(Construction { witness, provenance: Provenance { method, steps } }))
    };
    if let Some((w, steps)) = construct_direct(p) {
        return done(w, steps);
    }
    for (q, iso) in crate::iso::adam_orbit(p) {
        if q == *p {
            continue;
        }
        if let Some((w, mut steps)) = construct_direct(&q) {
            let back = w.transport(&iso.inverse())?;
            steps.push(format!("isomorphism {q} -> {p}"));
            return done(back, steps);
        }
    }
    let orbit: Vec<(XParams, XIso)> = std::iter::once((*p, XIso::identity(*p)))
        .chain(crate::iso::adam_orbit(p).into_iter().filter(|(q, _)| q != p))
        .collect();
    let (witness, steps) = exact_in_orbit(p, &orbit)?;
    witness.check()?;
    Ok(Some(Construction { witness, provenance: Provenance { method: Method::ExactSearch, steps } }))
}

// ------------------------------------------------------------ I-graphs

/// A Hamiltonian cycle of a connected I-graph with its construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HamiltonianConstruction {
    pub reduction: crate::iso::Reduction,
    pub cycle: Vec<usize>,
    pub provenance: Provenance,
}

/// Decides Hamiltonicity of a connected `I(n,p,q)` through its grid: the
/// spokes are contracted, the witness of the reduced grid is carried onto
/// the quotient, and its tour is lifted. `None` exactly when the grid has no
/// good Eulerian subgraph.
pub fn hamiltonian_i_graph(ip: &crate::families::IParams) -> Result<Option<HamiltonianConstruction>> {
    use crate::families::{i_graph, CubicEdgeKind};
    let red = crate::iso::reduce_i_graph(ip)?;
    let Some(con) = construct_witness(&red.x)? else {
        return Ok(None);
    };
    let n = ip.n;
    let g = i_graph(ip);
    let c = crate::quotient::contract_factor(&g.graph, &g.subset_of(CubicEdgeKind::Spoke))?;
    let x = red.x;
    let mut qe = Vec::new();
    for e in con.witness.edges.iter() {
        let (kind, i, j) = x.edge_coords(e);
        let a = red.circulant_vertex(i, j);
        let source = match kind {
            XEdgeKind::Horizontal => {
                let from = if red.mirrored { (a + n - ip.q) % n } else { a };
                2 * n + from
            }
            _ => a,
        };
        qe.push(c.source_to_quotient[source].expect("rim edges survive contraction"));
    }
    let ts = crate::quotient::classify_transitions(&c);
    let w = check_admissible(&c.quotient, &ts, &EdgeSubset::from_ids(c.quotient.edge_count(), qe))?;
    let tour = good_tour(&c.quotient, &ts, &w)?;
    let cycle = crate::euler::lift_tour(&c, &w, &tour)?;
    if !crate::oracle::verify_cycle(&g.graph, &cycle) {
        return Err(Error::InvalidTour(format!("lifted cycle of {ip} fails verification")));
    }
    Ok(Some(HamiltonianConstruction { reduction: red, cycle, provenance: con.provenance }))
}

// ------------------------------------------------------- the W(5,4,3) tour

/// Tour on `X(5,4,3)` as `(row, column)` vertices, transcribed literally
/// from its published drawing. Its last vertex is `x^0_1`, but `x^0_4` and
/// `x^0_1` are not adjacent; the closing vertex must be `x^0_0`.
pub const PUBLISHED_TOUR_5_4_3: [(usize, usize); 29] = [
    (0, 0), (1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (0, 4), (3, 1), (2, 1), (1, 1),
    (0, 1), (0, 2), (1, 2), (2, 2), (3, 2), (3, 1), (3, 0), (2, 0), (2, 1), (2, 2),
    (2, 3), (2, 4), (3, 4), (3, 3), (2, 3), (1, 3), (0, 3), (0, 4), (0, 1),
];

/// The published tour with its closing vertex corrected.
pub fn corrected_tour_5_4_3() -> Vec<(usize, usize)> {
    let mut v = PUBLISHED_TOUR_5_4_3.to_vec();
    *v.last_mut().unwrap() = (0, 0);
    v
}

/// Turns a closed vertex sequence on `X(s,t,r)` into a witness, matching
/// each step to an unused edge; the result is checked.
pub fn witness_from_vertex_tour(p: XParams, walk: &[(usize, usize)]) -> Result<GridWitness> {
    if walk.len() < 2 || walk.first() != walk.last() {
        return Err(Error::InvalidTour("walk is not closed".into()));
    }
    let x: Multigraph = x_graph(&p).graph;
    let mut used = vec![false; p.edge_count()];
    let mut steps = Vec::new();
    for pair in walk.windows(2) {
        let (a, b) = (p.vertex(pair[0].0, pair[0].1), p.vertex(pair[1].0, pair[1].1));
        let inc = x
            .incidence(a)
            .iter()
            .find(|inc| inc.other == b && !used[inc.edge])
            .ok_or_else(|| Error::InvalidTour(format!("no unused edge joins {:?} and {:?}", pair[0], pair[1])))?;
        used[inc.edge] = true;
        steps.push((inc.edge, inc.end == 0));
    }
    let edges = EdgeSubset::from_bits(used);
    let tour = GoodTour { steps };
    check_good_tour(&x, &fundamental_transitions(&p), &edges, &tour)?;
    Ok(GridWitness { params: p, edges, tour })
}

/// The corrected published witness in `X(5,4,3)`.
pub fn published_witness_5_4_3() -> GridWitness {
    witness_from_vertex_tour(XParams { s: 5, t: 4, r: 3 }, &corrected_tour_5_4_3())
        .expect("corrected tour is good")
}
