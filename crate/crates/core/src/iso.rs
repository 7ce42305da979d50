//! The number-theoretic layer over `X(s,t,r)`: Cayley representations,
//! the integer `k`, parameter swaps, Adám isomorphisms with explicit vertex
//! maps, the exceptional pair family, canonical forms, and the
//! correspondences with I-graphs and SGI graphs.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, mod_inverse, modulo, prime_factors};
use crate::error::{Error, Result};
use crate::families::{x_graph, CayleyParams, IParams, XEdgeKind, XParams};
use crate::multigraph::VertexId;

/// Smallest `h` in `1..a` with `h ≡ c (mod b)` and `gcd(h,a) = 1`, built as
/// `c + ωb` where `ω` multiplies the primes of `a` dividing neither `b`
/// nor `c`.
pub fn coprime_lift(a: usize, b: usize, c: usize) -> Result<usize> {
    if a < 2 || b == 0 || a % b != 0 {
        return Err(Error::InvalidParams(format!(
            "coprime lift needs a > 1 and b | a, got a={a}, b={b}"
        )));
    }
    let c = c % b;
    if gcd(c, b) != 1 {
        return Err(Error::InvalidParams(format!("gcd({c},{b}) != 1")));
    }
    let h = if gcd(c, a) == 1 {
        c
    } else {
        let omega: usize = prime_factors(a)
            .into_iter()
            .filter(|&p| b % p != 0 && c % p != 0)
            .product();
        c + omega * b
    };
    debug_assert!(h % b == c && gcd(h, a) == 1);
    Ok(h % a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KWitness {
    pub s: usize,
    pub t: usize,
    pub r: usize,
    pub d1: usize,
    pub k: usize,
}

impl KWitness {
    /// `gcd(k,t) = 1`, `k ≡ r/d1 (mod s/d1)`, `tk ≡ rt/d1 (mod st/d1)`.
    pub fn holds(s: usize, t: usize, r: usize, k: usize) -> bool {
        let d1 = gcd(gcd(s, t), r);
        let m = s * t / d1;
        k >= 1
            && k < m.max(2)
            && gcd(k, t) == 1
            && k % (s / d1) == (r / d1) % (s / d1)
            && (t * k) % m == (r * t / d1) % m
    }
}

fn require_nonzero_shift(p: &XParams) -> Result<()> {
    if p.r == 0 {
        return Err(Error::InvalidParams(format!(
            "{p}: k is only defined for r != 0"
        )));
    }
    Ok(())
}

/// The least valid `k`.
pub fn find_k(p: &XParams) -> Result<KWitness> {
    require_nonzero_shift(p)?;
    let d1 = p.d1();
    let m = p.s * p.t / d1;
    (1..m.max(2))
        .find(|&k| KWitness::holds(p.s, p.t, p.r, k))
        .map(|k| KWitness {
            s: p.s,
            t: p.t,
            r: p.r,
            d1,
            k,
        })
        .ok_or_else(|| Error::InvalidParams(format!("{p}: no k exists")))
}

/// A valid `k` reached through the coset `h + <t/d1>` with `h` a coprime
/// lift; an independent route to the same invariants.
pub fn find_k_via_cosets(p: &XParams) -> Result<usize> {
    require_nonzero_shift(p)?;
    if p.t == 1 {
        return Ok(p.r);
    }
    let (d, d1) = (p.d(), p.d1());
    let b = d / d1;
    let h = coprime_lift(p.t, b, (p.r / d1) % b)?;
    let m = p.s * p.t / d1;
    let step = p.t / d1;
    (0..m)
        .map(|i| (h + i * step) % m)
        .find(|&k| KWitness::holds(p.s, p.t, p.r, k))
        .ok_or_else(|| Error::InvalidParams(format!("{p}: coset route found no k")))
}

/// Cayley representation of `X(s,t,r)` with the map from group elements
/// (by index) to grid vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyRepresentation {
    pub params: CayleyParams,
    pub k: Option<usize>,
    /// Group element index -> vertex `x^i_j` of the grid.
    pub to_grid: Vec<VertexId>,
}

fn grid_map(p: &XParams, params: &CayleyParams) -> Option<Vec<VertexId>> {
    let mut to_grid = vec![usize::MAX; p.order()];
    for i in 0..p.t {
        for j in 0..p.s {
            let x = params.add(params.scale(i, params.gamma2), params.scale(j, params.gamma1));
            let idx = params.index(x);
            if to_grid[idx] != usize::MAX {
                return None;
            }
            to_grid[idx] = p.vertex(i, j);
        }
    }
    Some(to_grid)
}

/// Cayley representation with `gamma1 = (t/d1, 1)` and `gamma2 = (k, 0)`
/// when a valid `k` exists. Otherwise (some grids with `d1 > 1`, e.g.
/// `X(8,2,4)`) the least `gamma2 = (k, e)` with `t·gamma2 = r·gamma1` that
/// still gives a bijection is used; `r = 0` uses `Z_s x Z_t`.
pub fn cayley_params(p: &XParams) -> Result<CayleyRepresentation> {
    if p.r == 0 {
        let params = CayleyParams {
            cyclic_order: p.s,
            cofactor: p.t,
            gamma1: (1 % p.s, 0),
            gamma2: (0, 1 % p.t),
        };
        let to_grid = grid_map(p, &params).expect("product representation is bijective");
        return Ok(CayleyRepresentation {
            params,
            k: None,
            to_grid,
        });
    }
    let d1 = p.d1();
    let m = p.order() / d1;
    let base = CayleyParams {
        cyclic_order: m,
        cofactor: d1,
        gamma1: ((p.t / d1) % m, 1 % d1),
        gamma2: (0, 0),
    };
    if let Ok(kw) = find_k(p) {
        let params = CayleyParams {
            gamma2: (kw.k, 0),
            ..base
        };
        let to_grid = grid_map(p, &params)
            .ok_or_else(|| Error::InvalidParams(format!("{p}: generators do not give a bijection")))?;
        return Ok(CayleyRepresentation {
            params,
            k: Some(kw.k),
            to_grid,
        });
    }
    let target = base.scale(p.r, base.gamma1);
    for e in 0..d1 {
        for k in 0..m {
            let params = CayleyParams {
                gamma2: (k, e),
                ..base
            };
            if params.scale(p.t, params.gamma2) != target {
                continue;
            }
            if let Some(to_grid) = grid_map(p, &params) {
                return Ok(CayleyRepresentation {
                    params,
                    k: None,
                    to_grid,
                });
            }
        }
    }
    Err(Error::InvalidParams(format!("{p}: no Cayley representation found")))
}

/// Cycle structure of the fundamental 2-factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCounts {
    pub red_cycles: usize,
    pub red_length: usize,
    pub blue_cycles: usize,
    pub blue_length: usize,
}

pub fn fundamental_factor_counts(p: &XParams) -> FactorCounts {
    let g = gcd(p.s, p.r);
    FactorCounts {
        red_cycles: p.t,
        red_length: p.s,
        blue_cycles: g,
        blue_length: p.order() / g,
    }
}

// ------------------------------------------------------ grid isomorphisms

/// Horizontal step `x^i_j -> x^i_{j+1}`.
fn step_h(p: &XParams, v: VertexId) -> VertexId {
    let (i, j) = p.coords(v);
    p.vertex(i, j + 1)
}

/// Vertical step, wrapping through the diagonal.
fn step_v(p: &XParams, v: VertexId) -> VertexId {
    let (i, j) = p.coords(v);
    if i + 1 < p.t {
        p.vertex(i + 1, j)
    } else {
        p.vertex(0, j + p.r)
    }
}

fn iterate(mut v: VertexId, times: usize, f: impl Fn(VertexId) -> VertexId) -> VertexId {
    for _ in 0..times {
        v = f(v);
    }
    v
}

/// An isomorphism between two grids that sends the fundamental
/// 2-factorization onto the fundamental 2-factorization, possibly
/// exchanging the colours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XIso {
    pub from: XParams,
    pub to: XParams,
    pub map: Vec<VertexId>,
    pub colors_swapped: bool,
}

impl XIso {
    pub fn identity(p: XParams) -> Self {
        Self {
            from: p,
            to: p,
            map: (0..p.order()).collect(),
            colors_swapped: false,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &XIso) -> XIso {
        debug_assert_eq!(self.to, next.from);
        XIso {
            from: self.from,
            to: next.to,
            map: self.map.iter().map(|&v| next.map[v]).collect(),
            colors_swapped: self.colors_swapped != next.colors_swapped,
        }
    }

    pub fn inverse(&self) -> XIso {
        let mut map = vec![0; self.map.len()];
        for (v, &w) in self.map.iter().enumerate() {
            map[w] = v;
        }
        XIso {
            from: self.to,
            to: self.from,
            map,
            colors_swapped: self.colors_swapped,
        }
    }

    /// Checks bijectivity and that every colour class of `from` lands,
    /// with multiplicity, in the matching colour class of `to`.
    pub fn verify(&self) -> bool {
        let n = self.from.order();
        if self.to.order() != n || self.map.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        if self.map.iter().any(|&v| v >= n || std::mem::replace(&mut seen[v], true)) {
            return false;
        }
        let count = |p: &XParams, blue: bool| {
            let g = x_graph(p).graph;
            let mut m = BTreeMap::new();
            for e in 0..g.edge_count() {
                if p.is_blue(e) == blue {
                    let [a, b] = g.endpoints(e);
                    *m.entry((a.min(b), a.max(b))).or_insert(0usize) += 1;
                }
            }
            m
        };
        for blue in [false, true] {
            let src = count(&self.from, blue);
            let dst = count(&self.to, blue != self.colors_swapped);
            let mapped: BTreeMap<_, _> = src
                .into_iter()
                .map(|((a, b), c)| {
                    let (x, y) = (self.map[a], self.map[b]);
                    ((x.min(y), x.max(y)), c)
                })
                .collect();
            if mapped != dst {
                return false;
            }
        }
        true
    }

    /// Image of an edge of `from` as an edge of `to` (parallel edges are
    /// matched in id order within a colour class).
    pub fn edge_map(&self) -> Vec<usize> {
        let gf = x_graph(&self.from).graph;
        let gt = x_graph(&self.to).graph;
        let mut pool: BTreeMap<(bool, VertexId, VertexId), VecDeque<usize>> = BTreeMap::new();
        for e in 0..gt.edge_count() {
            let [a, b] = gt.endpoints(e);
            pool.entry((self.to.is_blue(e), a.min(b), a.max(b)))
                .or_default()
                .push_back(e);
        }
        (0..gf.edge_count())
            .map(|e| {
                let [a, b] = gf.endpoints(e);
                let (x, y) = (self.map[a], self.map[b]);
                let blue = self.from.is_blue(e) != self.colors_swapped;
                pool.get_mut(&(blue, x.min(y), x.max(y)))
                    .and_then(|q| q.pop_front())
                    .expect("verified isomorphism maps every edge")
            })
            .collect()
    }
}

/// Column reflection `x^i_j -> x^i_{-j}` onto `X(s,t,s-r)`.
pub fn mirror_iso(p: &XParams) -> XIso {
    let to = p.mirrored();
    let map = (0..p.order())
        .map(|v| {
            let (i, j) = p.coords(v);
            to.vertex(i, (p.s - j) % p.s)
        })
        .collect();
    XIso {
        from: *p,
        to,
        map,
        colors_swapped: false,
    }
}

/// The swap computed by walking: vertical steps become horizontal ones.
/// Returns the isomorphism onto `X(s',t',r')` with the raw `r'`.
fn swap_by_walk(p: &XParams) -> XIso {
    let origin = 0;
    let mut s2 = 1;
    let mut v = step_v(p, origin);
    while v != origin {
        v = step_v(p, v);
        s2 += 1;
    }
    let t2 = p.order() / s2;
    let target = iterate(origin, t2, |v| step_h(p, v));
    let mut r2 = 0;
    let mut v = origin;
    while v != target {
        v = step_v(p, v);
        r2 += 1;
    }
    let to = XParams {
        s: s2,
        t: t2,
        r: r2 % s2,
    };
    let map = (0..p.order())
        .map(|v| {
            let (i, j) = p.coords(v);
            let w = iterate(0, j, |w| step_v(&to, w));
            iterate(w, i, |w| step_h(&to, w))
        })
        .collect();
    XIso {
        from: *p,
        to,
        map,
        colors_swapped: true,
    }
}

/// `r'` by the closed formula `±t(k·d1/gcd(s,r))^{-1} (mod st/gcd(s,r))`,
/// when the inverse exists.
pub fn swap_shift_formula(p: &XParams) -> Option<usize> {
    if p.r == 0 {
        return Some(0);
    }
    let g = gcd(p.s, p.r);
    let m = p.order() / g;
    let kw = find_k(p).ok()?;
    let u = kw.k * kw.d1 / g;
    let inv = mod_inverse(u % m, m)?;
    Some((p.t % m) * inv % m)
}

fn smaller_representative(r: usize, s: usize) -> usize {
    r.min((s - r) % s)
}

/// Isomorphism onto the swap form, with the smaller shift representative.
pub fn swap_iso(p: &XParams) -> XIso {
    let raw = swap_by_walk(p);
    if raw.to.r == smaller_representative(raw.to.r, raw.to.s) {
        raw
    } else {
        let m = mirror_iso(&raw.to);
        raw.then(&m)
    }
}

/// `X(st/gcd(s,r), gcd(s,r), r')`, or `X(t,s,0)` when `r = 0`.
pub fn swap_form(p: &XParams) -> XParams {
    if p.r == 0 {
        return XParams {
            s: p.t,
            t: p.s,
            r: 0,
        };
    }
    let g = gcd(p.s, p.r);
    let s2 = p.order() / g;
    match swap_shift_formula(p) {
        Some(r2) => XParams {
            s: s2,
            t: g,
            r: smaller_representative(r2, s2),
        },
        None => swap_iso(p).to,
    }
}

/// All parameters reachable by reflections and swaps, each with an explicit
/// isomorphism from `p`.
pub fn adam_orbit(p: &XParams) -> BTreeMap<XParams, XIso> {
    let mut orbit = BTreeMap::new();
    orbit.insert(*p, XIso::identity(*p));
    let mut queue = VecDeque::from([*p]);
    while let Some(cur) = queue.pop_front() {
        let base = orbit[&cur].clone();
        for step in [mirror_iso(&cur), swap_iso(&cur)] {
            if !orbit.contains_key(&step.to) {
                orbit.insert(step.to, base.then(&step));
                queue.push_back(step.to);
            }
        }
    }
    orbit
}

pub fn adam_iso(a: &XParams, b: &XParams) -> Option<XIso> {
    if a.order() != b.order() {
        return None;
    }
    adam_orbit(a).remove(b)
}

pub fn adam_isomorphic(a: &XParams, b: &XParams) -> bool {
    a.order() == b.order() && adam_orbit(a).contains_key(b)
}

/// Partners of `p` in the family `X(4n,1,2n±1) ≅ X(2n,2,2)`, `X(2n,2,2n-2)`.
pub fn exceptional_partners(p: &XParams) -> Vec<XParams> {
    let mut out = BTreeSet::new();
    if p.t == 1 && p.s % 4 == 0 {
        let n = p.s / 4;
        if p.r == 2 * n - 1 || p.r == 2 * n + 1 {
            for r in [2 % (2 * n), (2 * n - 2) % (2 * n)] {
                out.insert(XParams { s: 2 * n, t: 2, r });
            }
        }
    }
    if p.t == 2 && p.s % 2 == 0 {
        let n = p.s / 2;
        if p.r == 2 % p.s || p.r == (2 * n - 2) % p.s {
            for r in [2 * n - 1, 2 * n + 1] {
                out.insert(XParams { s: 4 * n, t: 1, r });
            }
        }
    }
    out.into_iter().collect()
}

pub fn isomorphic_x(a: &XParams, b: &XParams) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let oa = adam_orbit(a);
    if oa.contains_key(b) {
        return true;
    }
    let ob = adam_orbit(b);
    oa.keys()
        .any(|x| exceptional_partners(x).iter().any(|y| ob.contains_key(y)))
}

/// Lexicographically least parameters in the full isomorphism class.
pub fn canonical_form(p: &XParams) -> XParams {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([*p]);
    while let Some(cur) = queue.pop_front() {
        if !seen.insert(cur) {
            continue;
        }
        for q in adam_orbit(&cur).into_keys() {
            for next in std::iter::once(q).chain(exceptional_partners(&q)) {
                if !seen.contains(&next) {
                    queue.push_back(next);
                }
            }
        }
    }
    *seen.iter().next().expect("orbit contains p")
}

// ------------------------------------------------ I-graphs and SGI graphs

/// `X(s,t,r)` attached to a connected I-graph, with the coordinates of the
/// circulant quotient: vertex `a` of `Cir(n; p, q)` is `x^i_j` where
/// `a = i·p + j·step (mod n)`, `step = ±q`. Horizontal edges come from the
/// inner rim, vertical and diagonal edges from the outer rim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub source: IParams,
    pub x: XParams,
    /// Whether the horizontal step is `-q` (the reflected shift was chosen).
    pub mirrored: bool,
}

impl Reduction {
    /// Circulant vertex of grid vertex `x^i_j`.
    pub fn circulant_vertex(&self, i: usize, j: usize) -> usize {
        let n = self.source.n;
        let step = if self.mirrored { n - self.source.q } else { self.source.q };
        (i * self.source.p + j * step) % n
    }
}

/// `t = gcd(n,q)`, `s = n/t`, `r ≡ ±p(q/t)^{-1} (mod s)` with the smaller
/// representative.
pub fn reduce_i_graph(ip: &IParams) -> Result<Reduction> {
    if !crate::families::is_connected_i(ip) {
        return Err(Error::Disconnected);
    }
    let (s, t) = (ip.s(), ip.t());
    let inv = mod_inverse((ip.q / t) % s, s)
        .ok_or_else(|| Error::InvalidParams(format!("{ip}: q/t not invertible mod s")))?;
    let r = (ip.p % s) * inv % s;
    let alt = (s - r) % s;
    let (r, mirrored) = if alt < r { (alt, true) } else { (r, false) };
    Ok(Reduction {
        source: *ip,
        x: XParams::new(s, t, r)?,
        mirrored,
    })
}

/// `I(st, k, t)` for grids that come from a connected I-graph, `k = s` when
/// `r = 0`. Grids with `s < 3` or whose `k` would equal `st/2` have no
/// I-graph.
pub fn i_graph_from_x(p: &XParams) -> Option<IParams> {
    if p.s < 3 || p.d1() != 1 || (p.s % 2 == 1 && p.t == 2 && p.r == 0) {
        return None;
    }
    let n = p.order();
    let k = if p.r == 0 {
        p.s
    } else {
        (1..n).find(|&k| 2 * k != n && KWitness::holds(p.s, p.t, p.r, k))?
    };
    IParams::new(n, k, p.t).ok()
}

/// The SGI graph that splits `X(s,t,r)`: `SGI(st, s, t, r)` where the last
/// parameter is the diagonal shift used by [`crate::families::sgi_graph`];
/// `cayley_k` is the Cayley integer (`s` when `r = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgiForm {
    pub order: usize,
    pub x: XParams,
    pub cayley_k: usize,
}

pub fn sgi_from_x(p: &XParams) -> Result<SgiForm> {
    let cayley_k = if p.r == 0 { p.s } else { find_k(p)?.k };
    Ok(SgiForm {
        order: p.order(),
        x: *p,
        cayley_k,
    })
}

/// Kind of every grid edge, for callers that only hold the parameters.
pub fn edge_kinds(p: &XParams) -> Vec<XEdgeKind> {
    (0..p.edge_count()).map(|e| p.edge_coords(e).0).collect()
}

/// Whether the step `±1` residue arithmetic in [`Reduction`] matches the
/// grid: every grid edge joins circulant vertices differing by `±p` or `±q`.
pub fn reduction_is_consistent(red: &Reduction) -> bool {
    let n = red.source.n;
    let x = x_graph(&red.x);
    (0..x.graph.edge_count()).all(|e| {
        let [a, b] = x.graph.endpoints(e);
        let (ia, ja) = red.x.coords(a);
        let (ib, jb) = red.x.coords(b);
        let (ca, cb) = (red.circulant_vertex(ia, ja), red.circulant_vertex(ib, jb));
        let diff = modulo(cb as i64 - ca as i64, n);
        let step = if x.labels[e] == XEdgeKind::Horizontal {
            red.source.q
        } else {
            red.source.p
        };
        diff == step || diff == n - step
    })
}
