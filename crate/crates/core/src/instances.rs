//! Finite graphs and finite Schreier instances.
//!
//! A [`SchreierInstance`] is a finite vertex set with one partial injection
//! per generator of its group context; `γ·x` is evaluated by composing those
//! maps. [`GraphInstance`] is a plain undirected (multi)graph.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{ball, GroupCtx, GroupElement, Window};
use crate::rng;

/// Sentinel for "undefined" in gen-map arrays.
pub const UNDEFINED: u32 = u32::MAX;

const CONFIG_MODEL_STREAM: u64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    vertices: usize,
    edges: Vec<(u32, u32)>,
    multigraph: bool,
}

impl GraphInstance {
    /// Normalizes `edges` to `u <= v` and sorts them. Simple graphs are
    /// deduplicated and may not contain loops; multigraphs keep both.
    pub fn new(
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        multigraph: bool,
    ) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= vertices {
                    return Err(Error::VertexOutOfRange { index: w, vertices });
                }
            }
            if u == v && !multigraph {
                return Err(Error::LoopInSimpleGraph(u));
            }
            out.push((u.min(v) as u32, u.max(v) as u32));
        }
        out.sort_unstable();
        if !multigraph {
            out.dedup();
        }
        Ok(GraphInstance {
            vertices,
            edges: out,
            multigraph,
        })
    }

    pub fn simple(
        vertices: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        GraphInstance::new(vertices, edges, false)
    }

    pub fn edgeless(n: usize) -> Self {
        GraphInstance {
            vertices: n,
            edges: Vec::new(),
            multigraph: false,
        }
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters("cycles need n >= 3".into()));
        }
        GraphInstance::simple(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        GraphInstance::simple(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        GraphInstance::simple(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
            .expect("valid clique")
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        GraphInstance::simple(10, outer.chain(spokes).chain(inner)).expect("valid Petersen graph")
    }

    /// Parses `cycle:N`, `complete:N`, `path:N`, `edgeless:N` or `petersen`.
    pub fn named(spec: &str) -> Result<Self> {
        let (name, arg) = spec.split_once(':').unwrap_or((spec, ""));
        let num = || {
            arg.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad size in graph spec `{spec}`")))
        };
        match name {
            "cycle" => GraphInstance::cycle(num()?),
            "complete" => Ok(GraphInstance::complete(num()?)),
            "path" => Ok(GraphInstance::path(num()?)),
            "edgeless" => Ok(GraphInstance::edgeless(num()?)),
            "petersen" => Ok(GraphInstance::petersen()),
            _ => Err(Error::Parse(format!("unknown graph `{spec}`"))),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_multigraph(&self) -> bool {
        self.multigraph
    }

    /// Neighbor lists; a loop lists its vertex twice, parallel edges repeat.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v as usize);
            adj[v as usize].push(u as usize);
        }
        adj
    }

    /// Neighbor lists paired with edge ids.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.vertices];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            inc[u as usize].push((v as usize, id));
            inc[v as usize].push((u as usize, id));
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for &(u, v) in &self.edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let deg = self.degrees();
        let first = *deg.first()?;
        deg.iter().all(|&d| d == first).then_some(first)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.edges.binary_search(&key).is_ok()
    }

    /// Vertices within graph distance `radius` of `source`.
    pub fn ball(&self, adj: &[Vec<usize>], source: usize, radius: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertices];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        let mut out = vec![source];
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    out.push(v);
                    queue.push_back(v);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Graph on the same vertices joining distinct vertices at distance at
    /// most `radius`.
    pub fn distance_power(&self, radius: usize) -> GraphInstance {
        let adj = self.adjacency();
        let mut edges = Vec::new();
        for u in 0..self.vertices {
            for v in self.ball(&adj, u, radius) {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        GraphInstance::simple(self.vertices, edges).expect("valid power graph")
    }

    /// `u v` per line, 0-indexed and sorted, after a `# vertices N` header.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# vertices {}\n", self.vertices);
        for &(u, v) in &self.edges {
            writeln!(s, "{u} {v}").unwrap();
        }
        s
    }

    /// Reads the edge-list format. Without a `# vertices` header the vertex
    /// count is one more than the largest index.
    pub fn from_edge_list(text: &str, multigraph: bool) -> Result<Self> {
        let mut vertices = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("vertices") {
                    vertices = Some(n.trim().parse::<usize>().map_err(|_| {
                        Error::Parse(format!("line {}: bad vertex count", lineno + 1))
                    })?);
                }
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => {
                    return Err(Error::Parse(format!(
                        "line {}: expected `u v`, got `{line}`",
                        lineno + 1
                    )))
                }
            }
        }
        let n =
            vertices.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        GraphInstance::new(n, edges, multigraph)
    }
}

/// Length of a shortest cycle; `None` for forests. Loops count as length 1
/// and parallel edges as length 2.
pub fn girth(g: &GraphInstance) -> Option<usize> {
    if g.edges.iter().any(|&(u, v)| u == v) {
        return Some(1);
    }
    if g.edges.windows(2).any(|w| w[0] == w[1]) {
        return Some(2);
    }
    let inc = g.incidence();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; g.vertices];
    let mut parent_edge = vec![usize::MAX; g.vertices];
    for root in 0..g.vertices {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent_edge[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &(v, id) in &inc[u] {
                if id == parent_edge[u] {
                    continue;
                }
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent_edge[v] = id;
                    queue.push_back(v);
                } else {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Options for [`random_regular_with`].
#[derive(Clone, Copy, Debug)]
pub struct RandomRegularOptions {
    pub max_attempts: usize,
    /// Keep loops and parallel edges instead of resampling.
    pub allow_multigraph: bool,
}

impl Default for RandomRegularOptions {
    fn default() -> Self {
        RandomRegularOptions {
            max_attempts: 1_000_000,
            allow_multigraph: false,
        }
    }
}

/// A `2·n_gens`-regular simple graph from the configuration model with
/// whole-pairing rejection.
pub fn random_regular(n_gens: usize, vertices: usize, seed: u64) -> Result<GraphInstance> {
    random_regular_with(n_gens, vertices, seed, RandomRegularOptions::default())
}

pub fn random_regular_with(
    n_gens: usize,
    vertices: usize,
    seed: u64,
    opts: RandomRegularOptions,
) -> Result<GraphInstance> {
    let degree = 2 * n_gens;
    if n_gens == 0 {
        return Err(Error::InvalidParameters("n_gens must be at least 1".into()));
    }
    if !opts.allow_multigraph && vertices <= degree {
        return Err(Error::InvalidParameters(format!(
            "a simple {degree}-regular graph needs more than {degree} vertices"
        )));
    }
    let mut rng = rng::stream(seed, CONFIG_MODEL_STREAM);
    let mut stubs: Vec<u32> = (0..vertices as u32)
        .flat_map(|v| std::iter::repeat_n(v, degree))
        .collect();
    let mut seen = HashSet::with_capacity(stubs.len() / 2);
    for _ in 0..opts.max_attempts {
        stubs.shuffle(&mut rng);
        seen.clear();
        let mut ok = true;
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if !opts.allow_multigraph && (u == v || !seen.insert((u, v))) {
                ok = false;
                break;
            }
            edges.push((u as usize, v as usize));
        }
        if ok {
            return GraphInstance::new(vertices, edges, opts.allow_multigraph);
        }
    }
    Err(Error::RejectionBudget(opts.max_attempts))
}

/// Where an instance came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub construction: String,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchreierInstance {
    ctx: GroupCtx,
    vertices: usize,
    maps: Vec<Vec<u32>>,
    inverse: Vec<Vec<u32>>,
    provenance: Provenance,
    free: Option<bool>,
}

impl SchreierInstance {
    /// Validates that every gen-map is a partial injection on `0..vertices`.
    pub fn new(
        ctx: GroupCtx,
        vertices: usize,
        maps: Vec<Vec<u32>>,
        provenance: Provenance,
    ) -> Result<Self> {
        ctx.validate()?;
        if maps.len() != ctx.generator_count() {
            return Err(Error::InvalidParameters(format!(
                "{ctx} has {} generators but {} gen-maps were given",
                ctx.generator_count(),
                maps.len()
            )));
        }
        let mut inverse = Vec::with_capacity(maps.len());
        for (g, map) in maps.iter().enumerate() {
            if map.len() != vertices {
                return Err(Error::InvalidParameters(format!(
                    "gen-map {g} has {} entries, expected {vertices}",
                    map.len()
                )));
            }
            let mut inv = vec![UNDEFINED; vertices];
            for (x, &y) in map.iter().enumerate() {
                if y == UNDEFINED {
                    continue;
                }
                let yu = y as usize;
                if yu >= vertices {
                    return Err(Error::VertexOutOfRange {
                        index: yu,
                        vertices,
                    });
                }
                if inv[yu] != UNDEFINED {
                    return Err(Error::NotInjective {
                        generator: g,
                        a: inv[yu] as usize,
                        b: x,
                        target: yu,
                    });
                }
                inv[yu] = x as u32;
            }
            inverse.push(inv);
        }
        Ok(SchreierInstance {
            ctx,
            vertices,
            maps,
            inverse,
            provenance,
            free: None,
        })
    }

    pub fn ctx(&self) -> GroupCtx {
        self.ctx
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn gen_maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Freeness flag recorded at construction, if any.
    pub fn free_flag(&self) -> Option<bool> {
        self.free
    }

    pub fn is_total(&self) -> bool {
        self.maps.iter().all(|m| m.iter().all(|&y| y != UNDEFINED))
    }

    /// One step by a signed 1-based letter.
    #[inline]
    pub fn step(&self, letter: i32, x: usize) -> Option<usize> {
        let g = letter.unsigned_abs() as usize - 1;
        let y = if letter > 0 {
            self.maps[g][x]
        } else {
            self.inverse[g][x]
        };
        (y != UNDEFINED).then_some(y as usize)
    }

    /// `γ·x`, or `None` where some composed map is undefined.
    ///
    /// Words act as a left action: the rightmost letter is applied first.
    /// Torus elements use the shortest signed representative per coordinate.
    pub fn act(&self, gamma: &GroupElement, x: usize) -> Option<usize> {
        debug_assert_eq!(gamma.ctx(), self.ctx);
        match gamma.letters() {
            Some(word) => word.iter().rev().try_fold(x, |y, &l| self.step(l, y)),
            None => self.act_torus(gamma.coords().unwrap(), x, false, true),
        }
    }

    fn act_torus(&self, coords: &[u32], x: usize, reverse: bool, shortest: bool) -> Option<usize> {
        let GroupCtx::Torus { m, .. } = self.ctx else {
            unreachable!()
        };
        let m = m as i64;
        let mut y = x;
        let order: Vec<usize> = if reverse {
            (0..coords.len()).rev().collect()
        } else {
            (0..coords.len()).collect()
        };
        for i in order {
            let c = coords[i] as i64;
            let c = if shortest && 2 * c > m { c - m } else { c };
            let letter = if c >= 0 {
                i as i32 + 1
            } else {
                -(i as i32 + 1)
            };
            for _ in 0..c.unsigned_abs() {
                y = self.step(letter, y)?;
            }
        }
        Some(y)
    }

    /// First `(γ, x)` with `γ ≠ 1`, `|γ| ≤ radius` and `γ·x = x`.
    pub fn fixed_point(&self, radius: usize) -> Option<(GroupElement, usize)> {
        let b = ball(self.ctx, radius, &self.ctx.generators()).ok()?;
        for gamma in b.iter().filter(|g| !g.is_identity()) {
            for x in 0..self.vertices {
                if self.act(gamma, x) == Some(x) {
                    return Some((gamma.clone(), x));
                }
            }
        }
        None
    }

    /// For torus contexts, checks that every factorization of every `γ` in
    /// the radius ball gives the same `γ·x` wherever all of them are
    /// defined. Free-group instances are consistent by construction.
    pub fn check_consistency(&self, radius: usize) -> Result<()> {
        if matches!(self.ctx, GroupCtx::Free { .. }) {
            return Ok(());
        }
        let b = ball(self.ctx, radius, &self.ctx.generators())?;
        for gamma in &b {
            let coords = gamma.coords().unwrap();
            for x in 0..self.vertices {
                let results: Vec<usize> =
                    [(false, true), (true, true), (false, false), (true, false)]
                        .into_iter()
                        .filter_map(|(rev, short)| self.act_torus(coords, x, rev, short))
                        .collect();
                if results.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::InconsistentAction(format!(
                        "{gamma} applied to vertex {x} depends on the factorization"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            ctx: self.ctx,
            vertices: self.vertices,
            gen_maps: self
                .maps
                .iter()
                .map(|m| m.iter().map(|&y| (y != UNDEFINED).then_some(y)).collect())
                .collect(),
            seed: self.provenance.seed,
        }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        let maps = file
            .gen_maps
            .iter()
            .map(|m| m.iter().map(|y| y.unwrap_or(UNDEFINED)).collect())
            .collect();
        let inst = SchreierInstance::new(
            file.ctx,
            file.vertices,
            maps,
            Provenance {
                construction: "file".into(),
                seed: file.seed,
            },
        )?;
        inst.check_consistency(4)?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        SchreierInstance::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }
}

/// `{"ctx": …, "vertices": N, "gen_maps": [[target-or-null, …], …], "seed": …}`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub ctx: GroupCtx,
    pub vertices: usize,
    pub gen_maps: Vec<Vec<Option<u32>>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// `Z_m^d` acting on itself by translation. Vertex `x` has coordinates
/// `x = Σ c_i m^i`.
///
/// The action of `Z_m^d` is free. The recorded freeness flag is false for
/// `m = 2`, where every generator is an involution and the instance stops
/// looking like a quotient of the free `Z^d` action at word length 2.
pub fn torus_instance(d: u32, m: u32) -> Result<SchreierInstance> {
    let ctx = GroupCtx::torus(d, m)?;
    let n = (m as usize)
        .checked_pow(d)
        .filter(|&n| n < UNDEFINED as usize)
        .ok_or_else(|| Error::InvalidParameters("torus too large".into()))?;
    let m = m as usize;
    let maps = (0..d as usize)
        .map(|i| {
            let stride = m.pow(i as u32);
            (0..n)
                .map(|x| {
                    let c = (x / stride) % m;
                    let y = x - c * stride + ((c + 1) % m) * stride;
                    y as u32
                })
                .collect()
        })
        .collect();
    let mut inst = SchreierInstance::new(
        ctx,
        n,
        maps,
        Provenance {
            construction: format!("torus:{d}:{m}"),
            seed: None,
        },
    )?;
    inst.free = Some(m > 2);
    Ok(inst)
}

/// Vertex index of a torus point.
pub fn torus_vertex(m: u32, coords: &[u32]) -> usize {
    coords
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * m as usize + c as usize)
}

/// `G(X, F)`: edges `{x, σ·x}` for `σ ∈ F` wherever defined and `σ·x ≠ x`.
pub fn schreier_graph(s: &SchreierInstance, f: &Window) -> Result<GraphInstance> {
    if f.ctx() != s.ctx {
        return Err(Error::ContextMismatch(s.ctx, f.ctx()));
    }
    if f.contains_identity() {
        return Err(Error::IdentityInF);
    }
    let mut edges = BTreeSet::new();
    for sigma in f {
        for x in 0..s.vertices {
            if let Some(y) = s.act(sigma, x) {
                if y != x {
                    edges.insert((x.min(y), x.max(y)));
                }
            }
        }
    }
    GraphInstance::simple(s.vertices, edges)
}
