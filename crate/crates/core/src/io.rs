//! Instance specifications, file formats (JSON edge lists, graph6, DOT),
//! certificate envelopes with re-verification, and the I-graph survey.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::constructive::{construct_witness, fundamental_transitions, hamiltonian_i_graph, Method};
use crate::error::{Error, Result};
use crate::euler::{check_good_tour, find_good_eulerian, lift_tour, good_tour, check_admissible};
use crate::families::{
    cayley_graph, i_graph, is_connected_i, is_proper_i, sgi_graph, x_graph, CayleyParams, CubicEdgeKind, IParams,
    XParams,
};
use crate::multigraph::{EdgeSubset, Multigraph, VertexId};
use crate::oracle::{
    brute_hamiltonian_with_limit, brute_isomorphic_with_limit, ham_limit, iso_limit, verify_cycle,
    verify_isomorphism, Certificate,
};
use crate::quotient::{contract_factor, Color, Coloring, TransitionSystem};

pub const TOOL_VERSION: &str = concat!("hamcubic ", env!("CARGO_PKG_VERSION"));
/// Version of the JSON formats in this module.
pub const SCHEMA_VERSION: u32 = 1;

// ------------------------------------------------------------ instances

/// A graph family member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum InstanceSpec {
    IGraph { n: usize, p: usize, q: usize },
    /// Generalized Petersen graph `G(n,k) = I(n,1,k)`.
    Gpg { n: usize, k: usize },
    XGraph { s: usize, t: usize, r: usize },
    Sgi { s: usize, t: usize, r: usize },
    /// `Cir(n; ±a, ±b)`.
    Circulant { n: usize, a: usize, b: usize },
    Cayley { cyclic_order: usize, cofactor: usize, gamma1: [usize; 2], gamma2: [usize; 2] },
}

impl InstanceSpec {
    /// Parses a family tag (`i`, `gpg`, `x`, `sgi`, `circulant`, `cayley`)
    /// and its integer parameters.
    pub fn parse(family: &str, params: &[usize]) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if params.len() == k {
                Ok(())
            } else {
                Err(Error::Format(format!("family `{family}` takes {k} parameters, got {}", params.len())))
            }
        };
        let spec = match family {
            "i" | "i_graph" => {
                want(3)?;
                InstanceSpec::IGraph { n: params[0], p: params[1], q: params[2] }
            }
            "gpg" => {
                want(2)?;
                InstanceSpec::Gpg { n: params[0], k: params[1] }
            }
            "x" | "x_graph" => {
                want(3)?;
                InstanceSpec::XGraph { s: params[0], t: params[1], r: params[2] }
            }
            "sgi" => {
                want(3)?;
                InstanceSpec::Sgi { s: params[0], t: params[1], r: params[2] }
            }
            "circulant" => {
                want(3)?;
                InstanceSpec::Circulant { n: params[0], a: params[1], b: params[2] }
            }
            "cayley" => {
                want(6)?;
                InstanceSpec::Cayley {
                    cyclic_order: params[0],
                    cofactor: params[1],
                    gamma1: [params[2], params[3]],
                    gamma2: [params[4], params[5]],
                }
            }
            other => return Err(Error::Format(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Parses `family p1 p2 ...` tokens.
    pub fn parse_tokens(tokens: &[String]) -> Result<Self> {
        let (family, rest) = tokens.split_first().ok_or_else(|| Error::Format("missing instance family".into()))?;
        let params = rest
            .iter()
            .map(|s| s.parse::<usize>().map_err(|_| Error::Format(format!("`{s}` is not a non-negative integer"))))
            .collect::<Result<Vec<_>>>()?;
        Self::parse(family, &params)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            InstanceSpec::IGraph { n, p, q } => IParams::new(n, p, q).map(|_| ()),
            InstanceSpec::Gpg { n, k } => IParams::petersen(n, k).map(|_| ()),
            InstanceSpec::XGraph { s, t, r } | InstanceSpec::Sgi { s, t, r } => XParams::new(s, t, r).map(|_| ()),
            InstanceSpec::Circulant { n, a, b } => {
                if n == 0 || a >= n || b >= n {
                    Err(Error::InvalidParams(format!("Cir({n};{a},{b}): need n > 0 and a, b < n")))
                } else {
                    Ok(())
                }
            }
            InstanceSpec::Cayley { cyclic_order, cofactor, gamma1, gamma2 } => {
                let ok = cyclic_order > 0
                    && cofactor > 0
                    && [gamma1, gamma2].iter().all(|g| g[0] < cyclic_order && g[1] < cofactor);
                if ok {
                    Ok(())
                } else {
                    Err(Error::InvalidParams(format!("{self}: generators must lie in the group")))
                }
            }
        }
    }

    /// The I-graph parameters for `i` and `gpg` instances.
    pub fn i_params(&self) -> Option<IParams> {
        match *self {
            InstanceSpec::IGraph { n, p, q } => IParams::new(n, p, q).ok(),
            InstanceSpec::Gpg { n, k } => IParams::petersen(n, k).ok(),
            _ => None,
        }
    }

    /// Grid parameters for `x` and `sgi` instances.
    pub fn x_params(&self) -> Option<XParams> {
        match *self {
            InstanceSpec::XGraph { s, t, r } | InstanceSpec::Sgi { s, t, r } => XParams::new(s, t, r).ok(),
            _ => None,
        }
    }

    pub fn cayley_params(&self) -> Option<CayleyParams> {
        match *self {
            InstanceSpec::Circulant { n, a, b } => Some(CayleyParams::circulant(n, a, b)),
            InstanceSpec::Cayley { cyclic_order, cofactor, gamma1, gamma2 } => Some(CayleyParams {
                cyclic_order,
                cofactor,
                gamma1: (gamma1[0], gamma1[1]),
                gamma2: (gamma2[0], gamma2[1]),
            }),
            _ => None,
        }
    }

    /// Cubic families (`i`, `gpg`, `sgi`); the others are quartic.
    pub fn is_cubic(&self) -> bool {
        matches!(self, InstanceSpec::IGraph { .. } | InstanceSpec::Gpg { .. } | InstanceSpec::Sgi { .. })
    }

    pub fn build(&self) -> Result<Multigraph> {
        self.validate()?;
        Ok(match *self {
            InstanceSpec::IGraph { .. } | InstanceSpec::Gpg { .. } => i_graph(&self.i_params().unwrap()).graph,
            InstanceSpec::XGraph { .. } => x_graph(&self.x_params().unwrap()).graph,
            InstanceSpec::Sgi { .. } => sgi_graph(&self.x_params().unwrap()).graph,
            _ => cayley_graph(&self.cayley_params().unwrap()),
        })
    }

    /// The spoke 1-factor of a cubic instance.
    pub fn spokes(&self) -> Option<EdgeSubset> {
        match *self {
            InstanceSpec::IGraph { .. } | InstanceSpec::Gpg { .. } => {
                Some(i_graph(&self.i_params()?).subset_of(CubicEdgeKind::Spoke))
            }
            InstanceSpec::Sgi { .. } => Some(sgi_graph(&self.x_params()?).subset_of(CubicEdgeKind::Spoke)),
            _ => None,
        }
    }

    /// Transition system of a quartic instance: the first generator class
    /// (horizontal edges for grids) is red, the second blue.
    pub fn transitions(&self) -> Result<TransitionSystem> {
        if let Some(p) = self.x_params().filter(|_| !self.is_cubic()) {
            return Ok(fundamental_transitions(&p));
        }
        let c = self
            .cayley_params()
            .ok_or_else(|| Error::InvalidParams(format!("{self} is not a quartic instance")))?;
        let g = cayley_graph(&c);
        let n = c.order();
        let coloring = Coloring {
            colors: (0..g.edge_count()).map(|e| if e < n { Color::Red } else { Color::Blue }).collect(),
        };
        TransitionSystem::from_coloring(&g, &coloring)
    }
}

impl fmt::Display for InstanceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            InstanceSpec::IGraph { n, p, q } => write!(f, "I({n},{p},{q})"),
            InstanceSpec::Gpg { n, k } => write!(f, "G({n},{k})"),
            InstanceSpec::XGraph { s, t, r } => write!(f, "X({s},{t},{r})"),
            InstanceSpec::Sgi { s, t, r } => write!(f, "SGI({},{s},{t},{r})", s * t),
            InstanceSpec::Circulant { n, a, b } => write!(f, "Cir({n};{a},{b})"),
            InstanceSpec::Cayley { cyclic_order, cofactor, gamma1, gamma2 } => write!(
                f,
                "Cay(Z{cyclic_order}xZ{cofactor};({},{}),({},{}))",
                gamma1[0], gamma1[1], gamma2[0], gamma2[1]
            ),
        }
    }
}

// ------------------------------------------------------------ graph formats

/// Multigraph JSON: `{"vertex_count": n, "edges": [[a, b], ...]}`; edge
/// ids are array positions, so loops and parallel edges are explicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultigraphJson {
    pub vertex_count: usize,
    pub edges: Vec<[VertexId; 2]>,
}

impl From<&Multigraph> for MultigraphJson {
    fn from(g: &Multigraph) -> Self {
        Self { vertex_count: g.vertex_count(), edges: g.edges().to_vec() }
    }
}

impl MultigraphJson {
    pub fn to_graph(&self) -> Result<Multigraph> {
        Multigraph::from_edges(self.vertex_count, &self.edges)
    }
}

/// graph6 encoding of a simple graph.
pub fn to_graph6(g: &Multigraph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::Format(
            "graph6 cannot represent loops or parallel edges; use the JSON edge-list format".into(),
        ));
    }
    let n = g.vertex_count();
    let mut out: Vec<u8> = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        out.extend((0..3).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|k| ((n >> (6 * k)) & 63) as u8 + 63));
    }
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for j in 1..n {
        for i in 0..j {
            bits.push(g.multiplicity(i, j) > 0);
        }
    }
    for chunk in bits.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

/// Decodes graph6 (edges in column order of the upper triangle).
pub fn from_graph6(text: &str) -> Result<Multigraph> {
    let bytes: Vec<u8> = text.trim().bytes().collect();
    let bad = || Error::Format("malformed graph6".into());
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) || bytes.is_empty() {
        return Err(bad());
    }
    let val = |b: u8| (b - 63) as usize;
    let (n, rest) = if bytes[0] != 126 {
        (val(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 4 && bytes[1] != 126 {
        (bytes[1..4].iter().fold(0, |a, &b| a << 6 | val(b)), &bytes[4..])
    } else if bytes.len() >= 8 {
        (bytes[2..8].iter().fold(0, |a, &b| a << 6 | val(b)), &bytes[8..])
    } else {
        return Err(bad());
    };
    let needed = n * n.saturating_sub(1) / 2;
    if rest.len() != needed.div_ceil(6) {
        return Err(bad());
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if val(rest[k / 6]) >> (5 - k % 6) & 1 == 1 {
                edges.push([i, j]);
            }
            k += 1;
        }
    }
    Multigraph::from_edges(n, &edges)
}

/// DOT text; edges of `highlight` are drawn bold.
pub fn to_dot(g: &Multigraph, name: &str, highlight: Option<&EdgeSubset>) -> String {
    let mut s = format!("graph \"{}\" {{\n", name.replace('"', "'"));
    for v in 0..g.vertex_count() {
        s += &format!("  {v};\n");
    }
    for (e, [a, b]) in g.edges().iter().enumerate() {
        let bold = highlight.is_some_and(|h| h.contains(e));
        s += &format!("  {a} -- {b} [id=\"e{e}\"{}];\n", if bold { ", style=bold" } else { "" });
    }
    s += "}\n";
    s
}

// ------------------------------------------------------------ certificates

/// Certificate file: tool and schema version, the instance (and a second
/// instance for isomorphism answers), how it was obtained, and the answer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope {
    pub version: String,
    pub schema: u32,
    pub instance: InstanceSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub other: Option<InstanceSpec>,
    pub method: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub steps: Vec<String>,
    pub certificate: Certificate,
}

impl Envelope {
    pub fn new(instance: InstanceSpec, method: &str, certificate: Certificate) -> Self {
        Self {
            version: TOOL_VERSION.into(),
            schema: SCHEMA_VERSION,
            instance,
            other: None,
            method: method.into(),
            steps: Vec::new(),
            certificate,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelopes serialize")
    }

    /// Parses an envelope; schema errors name the offending field path.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let env: Envelope = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Format(format!("at `{}`: {}", e.path(), e.inner())))?;
        if env.schema != SCHEMA_VERSION {
            return Err(Error::Format(format!("schema {} is not supported (expected {SCHEMA_VERSION})", env.schema)));
        }
        env.instance.validate()?;
        if let Some(o) = &env.other {
            o.validate()?;
        }
        Ok(env)
    }
}

fn millis(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Whether to decide by construction or by exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Exact,
    Constructive,
}

/// Decides Hamiltonicity (cubic instances) or good-subgraph existence
/// (quartic instances). Constructive solving needs an `i`, `gpg`, `sgi`
/// or `x` instance; disconnected I-graphs are answered negatively.
pub fn solve(spec: &InstanceSpec, method: SolveMethod) -> Result<Envelope> {
    spec.validate()?;
    let start = Instant::now();
    match (method, spec.is_cubic()) {
        (SolveMethod::Exact, true) => {
            let g = spec.build()?;
            let out = brute_hamiltonian_with_limit(&g, ham_limit())?;
            let cert = match out.cycle {
                Some(cycle) => Certificate::HamiltonianCycle { cycle },
                None => Certificate::NoHamiltonian { nodes: out.nodes, millis: millis(start) },
            };
            Ok(Envelope::new(*spec, "exact", cert))
        }
        (SolveMethod::Exact, false) => {
            let g = spec.build()?;
            let out = find_good_eulerian(&g, &spec.transitions()?)?;
            let cert = match out.found {
                Some((w, tour)) => Certificate::GoodSubgraph { edges: w.edges.to_ids(), tour },
                None => Certificate::NoGoodSubgraph { nodes: out.nodes, millis: millis(start) },
            };
            Ok(Envelope::new(*spec, "exact", cert))
        }
        (SolveMethod::Constructive, _) => solve_constructive(spec, start),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Base | Method::Constructed => "constructive",
        Method::ExactSearch => "constructive+search",
    }
}

fn solve_constructive(spec: &InstanceSpec, start: Instant) -> Result<Envelope> {
    if let Some(ip) = spec.i_params() {
        if !is_connected_i(&ip) {
            let cert = Certificate::NoHamiltonian { nodes: 0, millis: millis(start) };
            let mut env = Envelope::new(*spec, "constructive", cert);
            env.steps.push("disconnected".into());
            return Ok(env);
        }
        return Ok(match hamiltonian_i_graph(&ip)? {
            Some(h) => {
                let mut env = Envelope::new(*spec, method_name(h.provenance.method), Certificate::HamiltonianCycle { cycle: h.cycle });
                env.steps.push(format!("reduce to {}", h.reduction.x));
                env.steps.extend(h.provenance.steps);
                env
            }
            None => Envelope::new(*spec, "constructive", Certificate::NoHamiltonian { nodes: 0, millis: millis(start) }),
        });
    }
    let p = spec
        .x_params()
        .ok_or_else(|| Error::InvalidParams(format!("constructive solving needs an i, gpg, sgi or x instance, not {spec}")))?;
    let con = construct_witness(&p)?;
    let Some(con) = con else {
        let cert = if spec.is_cubic() {
            Certificate::NoHamiltonian { nodes: 0, millis: millis(start) }
        } else {
            Certificate::NoGoodSubgraph { nodes: 0, millis: millis(start) }
        };
        return Ok(Envelope::new(*spec, "constructive", cert));
    };
    let cert = if spec.is_cubic() {
        // The quotient of SGI(st,s,t,r) by its spokes is X(s,t,r) with the
        // same edge ids.
        let g = spec.build()?;
        let c = contract_factor(&g, &spec.spokes().unwrap())?;
        let ts = crate::quotient::classify_transitions(&c);
        let w = check_admissible(&c.quotient, &ts, &con.witness.edges)?;
        let tour = good_tour(&c.quotient, &ts, &w)?;
        Certificate::HamiltonianCycle { cycle: lift_tour(&c, &w, &tour)? }
    } else {
        Certificate::GoodSubgraph { edges: con.witness.edges.to_ids(), tour: con.witness.tour.clone() }
    };
    let mut env = Envelope::new(*spec, method_name(con.provenance.method), cert);
    env.steps = con.provenance.steps;
    Ok(env)
}

/// Outcome of re-checking a certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub pass: bool,
    pub reason: String,
}

impl Verdict {
    fn from(pass: bool, ok: &str, bad: &str) -> Self {
        Self { pass, reason: if pass { ok } else { bad }.to_string() }
    }
}

/// Re-checks a certificate: positive answers are verified directly,
/// negative ones by re-running the exhaustive procedure (within the size
/// guards).
pub fn verify(env: &Envelope) -> Result<Verdict> {
    let g = env.instance.build()?;
    Ok(match &env.certificate {
        Certificate::HamiltonianCycle { cycle } => {
            Verdict::from(verify_cycle(&g, cycle), "cycle is Hamiltonian", "cycle is not a Hamiltonian cycle")
        }
        Certificate::NoHamiltonian { .. } => {
            let found = brute_hamiltonian_with_limit(&g, ham_limit())?.cycle.is_some();
            Verdict::from(!found, "exhaustive search finds no Hamiltonian cycle", "a Hamiltonian cycle exists")
        }
        Certificate::GoodSubgraph { edges, tour } => {
            if env.instance.is_cubic() {
                return Ok(Verdict::from(false, "", "good subgraphs certify quartic instances only"));
            }
            if edges.iter().any(|&e| e >= g.edge_count()) {
                return Ok(Verdict::from(false, "", "edge id out of range"));
            }
            let subset = EdgeSubset::from_ids(g.edge_count(), edges.iter().copied());
            match check_good_tour(&g, &env.instance.transitions()?, &subset, tour) {
                Ok(()) => Verdict::from(true, "tour is good", ""),
                Err(e) => Verdict::from(false, "", &e.to_string()),
            }
        }
        Certificate::NoGoodSubgraph { .. } => {
            if env.instance.is_cubic() {
                return Ok(Verdict::from(false, "", "good subgraphs certify quartic instances only"));
            }
            let found = find_good_eulerian(&g, &env.instance.transitions()?)?.found.is_some();
            Verdict::from(!found, "exhaustive search finds no good subgraph", "a good subgraph exists")
        }
        Certificate::Isomorphism { bijection } => {
            let h = env.other.ok_or_else(|| Error::Format("isomorphism certificate without `other`".into()))?.build()?;
            Verdict::from(verify_isomorphism(&g, &h, bijection), "bijection is an isomorphism", "bijection is not an isomorphism")
        }
        Certificate::NonIsomorphism { .. } => {
            let h = env.other.ok_or_else(|| Error::Format("isomorphism certificate without `other`".into()))?.build()?;
            let iso = brute_isomorphic_with_limit(&g, &h, iso_limit())?.bijection.is_some();
            Verdict::from(!iso, "exhaustive search finds no isomorphism", "the graphs are isomorphic")
        }
    })
}

/// Isomorphism of two grids, by the predicate and optionally by brute force.
pub fn iso_certificate(a: &XParams, b: &XParams) -> Result<Envelope> {
    let start = Instant::now();
    let (ga, gb) = (x_graph(a).graph, x_graph(b).graph);
    let out = brute_isomorphic_with_limit(&ga, &gb, iso_limit())?;
    let cert = match out.bijection {
        Some(bijection) => Certificate::Isomorphism { bijection },
        None => Certificate::NonIsomorphism { nodes: out.nodes, millis: millis(start) },
    };
    let mut env = Envelope::new(InstanceSpec::XGraph { s: a.s, t: a.t, r: a.r }, "exact", cert);
    env.other = Some(InstanceSpec::XGraph { s: b.s, t: b.t, r: b.r });
    Ok(env)
}

// ------------------------------------------------------------ quotient JSON

/// `contract` output: quotient, per-end sides, colouring and maps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionJson {
    pub instance: InstanceSpec,
    pub quotient: MultigraphJson,
    /// Side bit of each edge end; equal sides form a non-traversing pair.
    pub sides: Vec<[u8; 2]>,
    pub coloring: Option<Coloring>,
    /// Source vertex -> quotient vertex.
    pub vertex_map: Vec<VertexId>,
    /// Quotient edge -> source edge.
    pub edge_map: Vec<usize>,
    pub flagged_loops: Vec<usize>,
}

/// Contracts the spokes of a cubic instance.
pub fn contraction_json(spec: &InstanceSpec) -> Result<ContractionJson> {
    let f = spec
        .spokes()
        .ok_or_else(|| Error::InvalidParams(format!("{spec} is not a cubic instance with spokes")))?;
    let g = spec.build()?;
    let c = contract_factor(&g, &f)?;
    let ts = crate::quotient::classify_transitions(&c);
    let coloring = crate::quotient::blue_red_coloring(&c).ok();
    Ok(ContractionJson {
        instance: *spec,
        quotient: MultigraphJson::from(&c.quotient),
        sides: (0..c.quotient.edge_count()).map(|e| [ts.side(e, 0), ts.side(e, 1)]).collect(),
        coloring,
        vertex_map: c.vertex_map.clone(),
        edge_map: c.edge_map.clone(),
        flagged_loops: c.flagged_loops.clone(),
    })
}

// ------------------------------------------------------------ witnesses

/// `witness` output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub version: String,
    pub params: XParams,
    pub edges: Vec<usize>,
    pub tour: crate::euler::GoodTour,
    /// Tour as `(row, column)` vertices.
    pub tour_vertices: Vec<(usize, usize)>,
    pub provenance: crate::constructive::Provenance,
}

pub fn witness_json(p: &XParams) -> Result<Option<WitnessJson>> {
    Ok(construct_witness(p)?.map(|c| WitnessJson {
        version: TOOL_VERSION.into(),
        params: *p,
        edges: c.witness.edges.to_ids(),
        tour_vertices: c.witness.tour_vertices(),
        tour: c.witness.tour,
        provenance: c.provenance,
    }))
}

// ------------------------------------------------------------ survey

/// One survey row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRow {
    pub params: IParams,
    pub connected: bool,
    pub proper: bool,
    pub hamiltonian: bool,
    pub method: String,
    pub millis: Option<u64>,
}

pub const SURVEY_HEADER: &str = "n,p,q,connected,proper,hamiltonian,method,millis";

impl SurveyRow {
    /// CSV line; without timing the `millis` field is empty.
    pub fn csv(&self) -> String {
        let IParams { n, p, q } = self.params;
        let ms = self.millis.map(|m| m.to_string()).unwrap_or_default();
        format!("{n},{p},{q},{},{},{},{},{ms}", self.connected, self.proper, self.hamiltonian, self.method)
    }
}

/// Every valid `I(n,p,q)` with `3 ≤ n ≤ n_max`, in `(n,p,q)` order.
pub fn survey_instances(n_max: usize) -> Vec<IParams> {
    (3..=n_max).flat_map(IParams::all_for).collect()
}

fn survey_one(ip: &IParams, timing: bool) -> Result<SurveyRow> {
    let start = Instant::now();
    let connected = is_connected_i(ip);
    let proper = is_proper_i(ip).unwrap_or(false);
    let (hamiltonian, method) = if connected {
        match hamiltonian_i_graph(ip)? {
            Some(h) => (true, method_name(h.provenance.method).to_string()),
            None => (false, "constructive".to_string()),
        }
    } else {
        (false, "disconnected".to_string())
    };
    Ok(SurveyRow { params: *ip, connected, proper, hamiltonian, method, millis: timing.then(|| millis(start)) })
}

/// Runs the survey on `jobs` threads; rows come back in instance order.
pub fn survey(n_max: usize, jobs: usize, timing: bool) -> Result<Vec<SurveyRow>> {
    use rayon::prelude::*;
    let instances = survey_instances(n_max);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Format(e.to_string()))?;
    pool.install(|| instances.par_iter().map(|ip| survey_one(ip, timing)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s = InstanceSpec::parse_tokens(&["i".into(), "12".into(), "2".into(), "3".into()]).unwrap();
        assert_eq!(s.to_string(), "I(12,2,3)");
        assert!(InstanceSpec::parse("x", &[5, 4]).is_err());
        assert!(InstanceSpec::parse("y", &[5]).is_err());
        assert!(InstanceSpec::parse("i", &[6, 3, 1]).is_err());
        assert_eq!(InstanceSpec::parse("sgi", &[4, 2, 2]).unwrap().to_string(), "SGI(8,4,2,2)");
    }

    #[test]
    fn graph6_round_trip() {
        let g = InstanceSpec::Gpg { n: 5, k: 2 }.build().unwrap();
        let text = to_graph6(&g).unwrap();
        assert_eq!(text, "IheA@GUAo");
        let h = from_graph6(&text).unwrap();
        assert_eq!(h.edge_count(), 15);
        assert!(crate::oracle::brute_isomorphic(&g, &h).unwrap().bijection.is_some());
        assert!(to_graph6(&InstanceSpec::XGraph { s: 2, t: 2, r: 0 }.build().unwrap()).is_err());
    }

    #[test]
    fn dot_has_one_node_line_per_vertex() {
        let g = InstanceSpec::XGraph { s: 5, t: 4, r: 3 }.build().unwrap();
        let dot = to_dot(&g, "X(5,4,3)", None);
        assert_eq!(dot.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count(), 20);
    }

    #[test]
    fn certificates_round_trip_and_verify() {
        for (spec, method) in [
            (InstanceSpec::Gpg { n: 5, k: 2 }, SolveMethod::Exact),
            (InstanceSpec::Gpg { n: 7, k: 2 }, SolveMethod::Constructive),
            (InstanceSpec::XGraph { s: 5, t: 1, r: 2 }, SolveMethod::Exact),
            (InstanceSpec::XGraph { s: 5, t: 4, r: 3 }, SolveMethod::Constructive),
            (InstanceSpec::Sgi { s: 4, t: 2, r: 2 }, SolveMethod::Constructive),
            (InstanceSpec::Circulant { n: 9, a: 1, b: 3 }, SolveMethod::Exact),
        ] {
            let env = solve(&spec, method).unwrap();
            let back = Envelope::from_json(&env.to_json()).unwrap();
            assert_eq!(back, env);
            assert!(verify(&back).unwrap().pass, "{spec}");
        }
    }

    #[test]
    fn tampered_cycle_fails() {
        let mut env = solve(&InstanceSpec::Gpg { n: 7, k: 2 }, SolveMethod::Constructive).unwrap();
        if let Certificate::HamiltonianCycle { cycle } = &mut env.certificate {
            cycle.swap(0, 1);
        }
        assert!(!verify(&env).unwrap().pass);
    }

    #[test]
    fn schema_errors_name_the_field() {
        let env = solve(&InstanceSpec::Gpg { n: 7, k: 2 }, SolveMethod::Exact).unwrap();
        let bad = env.to_json().replace("\"gpg\"", "\"nope\"");
        let err = Envelope::from_json(&bad).unwrap_err().to_string();
        assert!(err.contains("instance"), "{err}");
    }
}
