//! Schreier decorations of finite regular graphs.
//!
//! A decoration labels a graph by partial injections `p_1, …, p_n` so that it
//! becomes (part of) the Schreier graph of an `F_n` action. For a
//! `2n`-regular graph a full decoration comes from a 2-factorization: orient
//! every component along an Eulerian circuit, then peel `n` perfect matchings
//! off the resulting `n`-regular bipartite out/in graph.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupCtx;
use crate::instances::{GraphInstance, InstanceFile, Provenance, SchreierInstance, UNDEFINED};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    graph: GraphInstance,
    maps: Vec<Vec<u32>>,
    certified: Vec<bool>,
}

/// How each generator's partial injection is chosen from the remaining arcs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingRule {
    /// Maximum matching (Hopcroft–Karp).
    #[default]
    Maximum,
    /// First-fit maximal matching in arc order.
    Greedy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartialStrategy {
    pub n_gens: usize,
    pub matching: MatchingRule,
}

impl Decoration {
    /// Wraps explicit maps, computing the certified set. Fails if a map is
    /// not a partial injection along graph edges.
    pub fn from_maps(graph: GraphInstance, maps: Vec<Vec<u32>>) -> Result<Self> {
        let mut dec = Decoration {
            certified: vec![false; graph.vertex_count()],
            graph,
            maps,
        };
        dec.check_maps()?;
        dec.certified = dec.compute_certified();
        Ok(dec)
    }

    pub fn graph(&self) -> &GraphInstance {
        &self.graph
    }

    pub fn n_gens(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<u32>] {
        &self.maps
    }

    pub fn is_certified(&self, v: usize) -> bool {
        self.certified[v]
    }

    /// `C(Q, p)` in increasing order.
    pub fn certified_vertices(&self) -> Vec<usize> {
        (0..self.certified.len())
            .filter(|&v| self.certified[v])
            .collect()
    }

    pub fn certified_fraction(&self) -> Rational {
        let n = self.certified.len().max(1);
        Rational::new(
            self.certified.iter().filter(|&&c| c).count() as i64,
            n as i64,
        )
    }

    fn inverses(&self) -> Vec<Vec<u32>> {
        self.maps
            .iter()
            .map(|m| {
                let mut inv = vec![UNDEFINED; m.len()];
                for (x, &y) in m.iter().enumerate() {
                    if y != UNDEFINED {
                        inv[y as usize] = x as u32;
                    }
                }
                inv
            })
            .collect()
    }

    fn check_maps(&self) -> Result<()> {
        let n = self.graph.vertex_count();
        let mut used_multiplicity = std::collections::HashMap::new();
        for (g, m) in self.maps.iter().enumerate() {
            if m.len() != n {
                return Err(Error::InvalidParameters(format!(
                    "decoration map {g} has {} entries for {n} vertices",
                    m.len()
                )));
            }
            let mut hit = vec![UNDEFINED; n];
            for (x, &y) in m.iter().enumerate() {
                if y == UNDEFINED {
                    continue;
                }
                let yu = y as usize;
                if yu >= n {
                    return Err(Error::VertexOutOfRange {
                        index: yu,
                        vertices: n,
                    });
                }
                if hit[yu] != UNDEFINED {
                    return Err(Error::NotInjective {
                        generator: g,
                        a: hit[yu] as usize,
                        b: x,
                        target: yu,
                    });
                }
                hit[yu] = x as u32;
                if !self.graph.has_edge(x, yu) {
                    return Err(Error::InconsistentAction(format!(
                        "p_{} maps {x} to non-neighbor {yu}",
                        g + 1
                    )));
                }
                *used_multiplicity
                    .entry((x.min(yu), x.max(yu)))
                    .or_insert(0usize) += 1;
            }
        }
        let mut available_multiplicity = std::collections::HashMap::new();
        for &(u, v) in self.graph.edges() {
            *available_multiplicity
                .entry((u as usize, v as usize))
                .or_insert(0usize) += 1;
        }
        for (&(u, v), &used) in &used_multiplicity {
            let available = available_multiplicity[&(u, v)];
            if used > available {
                return Err(Error::InconsistentAction(format!(
                    "edge {{{u}, {v}}} is used {used} times but has multiplicity {available}"
                )));
            }
        }
        Ok(())
    }

    /// `x` is certified when all `2n` values `p_i(x)`, `p_i⁻¹(x)` are
    /// defined and, as a multiset, equal the neighbors of `x`.
    fn compute_certified(&self) -> Vec<bool> {
        let adj = self.graph.adjacency();
        let inv = self.inverses();
        (0..self.graph.vertex_count())
            .map(|x| {
                let mut vals = Vec::with_capacity(2 * self.maps.len());
                for (m, mi) in self.maps.iter().zip(&inv) {
                    if m[x] == UNDEFINED || mi[x] == UNDEFINED {
                        return false;
                    }
                    vals.push(m[x] as usize);
                    vals.push(mi[x] as usize);
                }
                let mut nb = adj[x].clone();
                vals.sort_unstable();
                nb.sort_unstable();
                vals == nb
            })
            .collect()
    }

    /// Re-derives every invariant from scratch.
    pub fn validate(&self) -> Result<()> {
        self.check_maps()?;
        if self.compute_certified() != self.certified {
            return Err(Error::InconsistentAction(
                "stored certified set is stale".into(),
            ));
        }
        Ok(())
    }

    /// The decoration as an action of `F_n` on the vertices.
    pub fn to_instance(&self) -> Result<SchreierInstance> {
        SchreierInstance::new(
            GroupCtx::free(self.maps.len() as u32)?,
            self.graph.vertex_count(),
            self.maps.clone(),
            Provenance {
                construction: "decoration".into(),
                seed: None,
            },
        )
    }

    /// Undirected edges `{x, p_i(x)}` over all generators, sorted, with
    /// multiplicity.
    pub fn used_edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .maps
            .iter()
            .flat_map(|m| {
                m.iter()
                    .enumerate()
                    .filter(|(_, &y)| y != UNDEFINED)
                    .map(|(x, &y)| ((x as u32).min(y), (x as u32).max(y)))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn to_file(&self, seed: Option<u64>) -> Result<DecorationFile> {
        let mut instance = self.to_instance()?.to_file();
        instance.seed = seed;
        Ok(DecorationFile {
            instance,
            certified: self.certified_vertices(),
        })
    }
}

/// Decoration JSON: the instance format plus the certified vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecorationFile {
    #[serde(flatten)]
    pub instance: InstanceFile,
    pub certified: Vec<usize>,
}

/// Orients every edge so that in- and out-degrees differ by at most one
/// (exactly balanced at even-degree vertices). Returns `(tail, head)` per
/// edge id.
pub fn balanced_orientation(g: &GraphInstance) -> Vec<(usize, usize)> {
    let n = g.vertex_count();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(u, v)| (u as usize, v as usize))
        .collect();
    let real = edges.len();
    // odd-degree vertices are paired through one extra vertex
    let hub = n;
    for (v, d) in g.degrees().into_iter().enumerate() {
        if d % 2 == 1 {
            edges.push((v, hub));
        }
    }
    let mut inc = vec![Vec::new(); n + 1];
    for (id, &(u, v)) in edges.iter().enumerate() {
        inc[u].push((v, id));
        inc[v].push((u, id));
    }
    let mut used = vec![false; edges.len()];
    let mut orient = vec![(0, 0); edges.len()];
    let mut ptr = vec![0usize; n + 1];
    for start in 0..=n {
        let mut stack = vec![start];
        while let Some(&u) = stack.last() {
            while ptr[u] < inc[u].len() && used[inc[u][ptr[u]].1] {
                ptr[u] += 1;
            }
            match inc[u].get(ptr[u]) {
                Some(&(v, id)) => {
                    used[id] = true;
                    orient[id] = (u, v);
                    stack.push(v);
                }
                None => {
                    stack.pop();
                }
            }
        }
    }
    orient.truncate(real);
    orient
}

/// Maximum matching in a bipartite multigraph given as `(left, right)` arcs.
/// Returns the chosen arc for each left vertex.
fn hopcroft_karp(n_left: usize, n_right: usize, arcs: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); n_left];
    for (id, &(l, r)) in arcs.iter().enumerate() {
        adj[l].push((r, id));
    }
    let mut match_left: Vec<Option<usize>> = vec![None; n_left];
    let mut match_right: Vec<Option<usize>> = vec![None; n_right];
    let mut dist = vec![usize::MAX; n_left];
    loop {
        let mut queue = VecDeque::new();
        for l in 0..n_left {
            if match_left[l].is_none() {
                dist[l] = 0;
                queue.push_back(l);
            } else {
                dist[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &(r, _) in &adj[l] {
                match match_right[r] {
                    None => found = true,
                    Some(id) => {
                        let l2 = arcs[id].0;
                        if dist[l2] == usize::MAX {
                            dist[l2] = dist[l] + 1;
                            queue.push_back(l2);
                        }
                    }
                }
            }
        }
        if !found {
            break;
        }
        let mut it = vec![0usize; n_left];
        for l in 0..n_left {
            if match_left[l].is_none() {
                augment(
                    l,
                    &adj,
                    arcs,
                    &mut match_left,
                    &mut match_right,
                    &mut dist,
                    &mut it,
                );
            }
        }
    }
    match_left
}

fn augment(
    l: usize,
    adj: &[Vec<(usize, usize)>],
    arcs: &[(usize, usize)],
    match_left: &mut [Option<usize>],
    match_right: &mut [Option<usize>],
    dist: &mut [usize],
    it: &mut [usize],
) -> bool {
    while it[l] < adj[l].len() {
        let (r, id) = adj[l][it[l]];
        it[l] += 1;
        let ok = match match_right[r] {
            None => true,
            Some(prev) => {
                let l2 = arcs[prev].0;
                dist[l2] == dist[l] + 1 && augment(l2, adj, arcs, match_left, match_right, dist, it)
            }
        };
        if ok {
            match_left[l] = Some(id);
            match_right[r] = Some(id);
            return true;
        }
    }
    dist[l] = usize::MAX;
    false
}

fn greedy_matching(n_left: usize, n_right: usize, arcs: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut match_left = vec![None; n_left];
    let mut right_used = vec![false; n_right];
    for (id, &(l, r)) in arcs.iter().enumerate() {
        if match_left[l].is_none() && !right_used[r] {
            match_left[l] = Some(id);
            right_used[r] = true;
        }
    }
    match_left
}

/// Peels `n_gens` matchings off the oriented arcs, one per generator.
fn peel(
    n: usize,
    mut arcs: Vec<(usize, usize)>,
    n_gens: usize,
    rule: MatchingRule,
) -> Vec<Vec<u32>> {
    let mut maps = Vec::with_capacity(n_gens);
    for _ in 0..n_gens {
        let matching = match rule {
            MatchingRule::Maximum => hopcroft_karp(n, n, &arcs),
            MatchingRule::Greedy => greedy_matching(n, n, &arcs),
        };
        let mut map = vec![UNDEFINED; n];
        let mut taken = vec![false; arcs.len()];
        for id in matching.into_iter().flatten() {
            let (u, v) = arcs[id];
            map[u] = v as u32;
            taken[id] = true;
        }
        arcs = arcs
            .into_iter()
            .zip(taken)
            .filter_map(|(a, t)| (!t).then_some(a))
            .collect();
        maps.push(map);
    }
    maps
}

/// Full Schreier decoration of a `2n`-regular (multi)graph.
pub fn full_decoration(g: &GraphInstance) -> Result<Decoration> {
    let degree = g
        .regular_degree()
        .ok_or_else(|| Error::NotEvenRegular("degrees differ".into()))?;
    if degree == 0 || degree % 2 == 1 {
        return Err(Error::NotEvenRegular(format!("degree {degree}")));
    }
    let n_gens = degree / 2;
    let arcs = balanced_orientation(g);
    let maps = peel(g.vertex_count(), arcs, n_gens, MatchingRule::Maximum);
    debug_assert!(maps.iter().all(|m| m.iter().all(|&y| y != UNDEFINED)));
    Decoration::from_maps(g.clone(), maps)
}

/// A partial decoration with `strategy.n_gens` generators. A `2n`-regular
/// input under the maximum-matching rule takes the full decoration path.
pub fn partial_decoration(g: &GraphInstance, strategy: PartialStrategy) -> Result<Decoration> {
    let limit = 2 * strategy.n_gens;
    if strategy.n_gens == 0 {
        return Err(Error::InvalidParameters("n_gens must be at least 1".into()));
    }
    let max_degree = g.max_degree();
    if max_degree > limit {
        return Err(Error::DegreeTooLarge { max_degree, limit });
    }
    if strategy.matching == MatchingRule::Maximum && g.regular_degree() == Some(limit) {
        return full_decoration(g);
    }
    let arcs = balanced_orientation(g);
    let maps = peel(g.vertex_count(), arcs, strategy.n_gens, strategy.matching);
    Decoration::from_maps(g.clone(), maps)
}

/// `C_k`: vertices whose radius-`k` ball lies inside `C(Q, p)`.
pub fn certified_ball_set(dec: &Decoration, k: usize) -> Vec<usize> {
    let n = dec.graph.vertex_count();
    let adj = dec.graph.adjacency();
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if !dec.certified[v] {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] == k {
            continue;
        }
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    (0..n).filter(|&v| dist[v] == usize::MAX).collect()
}

/// A probability measure on the vertices, with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMeasure {
    weights: Vec<Rational>,
}

impl WeightedMeasure {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.iter().any(Rational::is_negative) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::one() {
            return Err(Error::InvalidMeasure(format!("total mass {total}")));
        }
        Ok(WeightedMeasure { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMeasure("no vertices".into()));
        }
        Ok(WeightedMeasure {
            weights: vec![Rational::new(1, n as i64); n],
        })
    }

    pub fn point(n: usize, v: usize) -> Result<Self> {
        if v >= n {
            return Err(Error::VertexOutOfRange {
                index: v,
                vertices: n,
            });
        }
        let mut weights = vec![Rational::zero(); n];
        weights[v] = Rational::one();
        Ok(WeightedMeasure { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, v: usize) -> &Rational {
        &self.weights[v]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn mass(&self, vertices: impl IntoIterator<Item = usize>) -> Rational {
        vertices.into_iter().map(|v| &self.weights[v]).sum()
    }
}

/// `μ_k(A) = ∫ |A ∩ N^k(x)| / |N^k(x)| dμ(x)`, which needs every radius-`k`
/// ball to have the same size.
pub fn mu_k(mu: &WeightedMeasure, g: &GraphInstance, k: usize) -> Result<WeightedMeasure> {
    let n = g.vertex_count();
    if mu.len() != n {
        return Err(Error::InvalidMeasure(format!(
            "measure has {} weights for {n} vertices",
            mu.len()
        )));
    }
    let adj = g.adjacency();
    let balls: Vec<Vec<usize>> = (0..n).map(|x| g.ball(&adj, x, k)).collect();
    let size = balls.first().map_or(1, Vec::len);
    if let Some(b) = balls.iter().find(|b| b.len() != size) {
        return Err(Error::NonUniformBalls {
            radius: k,
            a: size,
            b: b.len(),
        });
    }
    let size = Rational::from_int(size as i64);
    // the ball relation is symmetric, so μ_k(v) sums μ over the ball at v
    let weights = balls
        .iter()
        .map(|b| &mu.mass(b.iter().copied()) / &size)
        .collect();
    Ok(WeightedMeasure { weights })
}

/// Both sides of the averaging step that turns a large `μ_k`-mass of the
/// certified set into a large `μ`-mass of `C_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CkMassReport {
    pub ball_size: usize,
    pub epsilon: Rational,
    /// `μ_k(C(Q, p))`
    pub mu_k_certified: Rational,
    /// `μ(C_k)`
    pub mu_ck: Rational,
    /// `μ_k(C) ≤ μ(C_k)/|D| + 1 − 1/|D|`
    pub averaging_bound_holds: bool,
    /// `μ_k(C) ≥ 1 − ε/|D|`
    pub hypothesis: bool,
    /// `μ(C_k) ≥ 1 − ε`
    pub conclusion: bool,
    /// hypothesis ⇒ conclusion
    pub implication_holds: bool,
}

pub fn ck_mass_bound_check(
    dec: &Decoration,
    mu: &WeightedMeasure,
    k: usize,
    epsilon: &Rational,
) -> Result<CkMassReport> {
    let g = &dec.graph;
    let muk = mu_k(mu, g, k)?;
    let adj = g.adjacency();
    let ball_size = if g.vertex_count() == 0 {
        1
    } else {
        g.ball(&adj, 0, k).len()
    };
    let d = Rational::from_int(ball_size as i64);
    let one = Rational::one();
    let mu_k_certified = muk.mass(dec.certified_vertices());
    let mu_ck = mu.mass(certified_ball_set(dec, k));
    let rhs = &(&(&mu_ck / &d) + &one) - &(&one / &d);
    let hypothesis = mu_k_certified >= &one - &(epsilon / &d);
    let conclusion = mu_ck >= &one - epsilon;
    Ok(CkMassReport {
        ball_size,
        epsilon: epsilon.clone(),
        averaging_bound_holds: mu_k_certified <= rhs,
        hypothesis,
        conclusion,
        implication_holds: !hypothesis || conclusion,
        mu_k_certified,
        mu_ck,
    })
}
